# Copyright (c) 2022 Sony Group Corporation. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

r"""Monte-Carlo error metrics."""

import numpy as np
from more_itertools import chunked

from ..utils.errors import ConfigError


def mse_at_step(estimates, truth):
    r"""Mean squared error of one step over the trials.

    Args:
        estimates (array-like): Estimated states, shape ``(N, n)``.
        truth (array-like): True state, shape ``(n,)``.

    Returns:
        numpy.ndarray: Per-state MSE, shape ``(n,)``.
    """
    estimates = np.atleast_2d(np.asarray(estimates, dtype=float))
    if len(estimates) == 0:
        raise ValueError('need at least one trial')
    return np.mean((estimates - np.asarray(truth, dtype=float)) ** 2, axis=0)


def mmse(mse_curve, steps=None):
    r"""Time average of an MSE curve over a range of steps.

    Args:
        mse_curve (array-like): Per-step MSE, shape ``(K, n)``.
        steps (slice or range, optional): Steps to average. Defaults to all.

    Returns:
        numpy.ndarray: Per-state mMSE, shape ``(n,)``.

    Raises:
        ValueError: If the range is empty.
    """
    mse_curve = np.asarray(mse_curve, dtype=float)
    if steps is not None:
        if isinstance(steps, range):
            steps = slice(steps.start, steps.stop, steps.step)
        mse_curve = mse_curve[steps]
    if len(mse_curve) == 0:
        raise ValueError('mMSE over an empty range of steps')
    return np.mean(mse_curve, axis=0)


def segment_bounds(n_steps, steps_per_segment):
    r"""Consecutive ``[start, stop)`` step ranges; the last one may be shorter.

    Args:
        n_steps (int): Number of steps.
        steps_per_segment (int): Nominal segment length in steps.

    Returns:
        list of tuple: The bounds.
    """
    if steps_per_segment < 1:
        raise ConfigError('a segment must span at least one measurement step')
    return [(chunk[0], chunk[-1] + 1) for chunk in chunked(range(n_steps), steps_per_segment)]


def steps_per_segment(segment_length, dt):
    r"""Segment length in measurement steps, at least one."""
    if segment_length <= 0:
        raise ConfigError('segment_length must be positive')
    return max(1, int(round(segment_length / dt)))
