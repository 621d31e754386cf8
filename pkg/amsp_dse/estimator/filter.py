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

import time
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..model.nonlinearity import NonlinearityIndexes
from ..model.nonlinearity import evaluate_indexes
from ..utils.errors import AmspDseError
from ..utils.errors import NumericalError
from .belief import GaussianBelief
from .ekf import correct
from .ekf import init_belief
from .ekf import multi_step_predict


@dataclass
class FilterRun:
    r"""Everything a filter run produces, one entry per measurement.

    Entry 0 is the initial belief; the wall time covers the first prediction
    to the last correction.
    """
    estimates: List[GaussianBelief] = field(default_factory=list)
    mp_trace: List[int] = field(default_factory=list)
    index_trace: List[NonlinearityIndexes] = field(default_factory=list)
    step_times: List[float] = field(default_factory=list)
    wall_time: float = 0.0

    def __len__(self):
        return len(self.estimates)

    @property
    def means(self):
        return np.stack([b.mean for b in self.estimates])

    @property
    def variances(self):
        return np.stack([np.diag(b.cov) for b in self.estimates])

    @property
    def indexes(self):
        return np.array([(i.n_phi, i.n_h) for i in self.index_trace]).reshape(-1, 2)


def run_filter(z_seq, u_seq, model, noise, P0, mode, dt, init=None, n_init=1,
               callback=None):
    r"""Runs the EKF over a measurement series.

    At every step the nonlinearity indexes of the coming change, the
    single-step prediction minus the last posterior mean, are evaluated over
    the full interval. The mode picks the prediction factor, then the
    multi-step prediction and the correction follow. The input is held over
    each interval.

    Args:
        z_seq (array-like): Measurements, shape ``(N, 2)``.
        u_seq (array-like): Inputs, shape ``(N, 4)``.
        model: Discrete model (see :mod:`amsp_dse.estimator.ekf`).
        noise (NoiseModel): Noise covariances.
        P0 (numpy.ndarray): Initial covariance.
        mode (EstimatorMode): How the prediction factor is chosen.
        dt (float): Measurement interval (s).
        init (GaussianBelief, optional): Initial belief. Defaults to the
            steady-state back-solve of the first ``n_init`` samples.
        n_init (int, optional): Samples averaged for the back-solve.
            Defaults to 1.
        callback (callable, optional): Called as ``callback(k, belief, m_p,
            indexes)`` after each correction, outside the timed region.

    Returns:
        FilterRun: Posterior beliefs and traces.

    Raises:
        NumericalError: With the step index, if a step fails.
    """
    z_seq = np.asarray(z_seq, dtype=float)
    u_seq = np.asarray(u_seq, dtype=float)
    if len(z_seq) != len(u_seq) or len(z_seq) < 2:
        raise ValueError('z_seq and u_seq must have the same length >= 2')
    if dt <= 0:
        raise ValueError('dt must be positive')

    if init is None:
        init = init_belief(z_seq[:n_init], u_seq[:n_init], model, P0)
    m_p = mode.initial_factor()
    run = FilterRun([init], [m_p], [NonlinearityIndexes(0.0, 0.0, m_p)], [0.0])

    belief = init
    elapsed = 0.0
    for k in range(1, len(z_seq)):
        start = time.perf_counter()
        try:
            dx = model.transition(belief.mean, u_seq[k - 1], dt) - belief.mean
            idx = evaluate_indexes(model, belief.mean, dx, u_seq[k - 1], dt, noise.Q, noise.R)
            m_p = mode.next_factor(m_p, idx)
            prior = multi_step_predict(belief, u_seq[k - 1], model, dt, m_p, noise,
                                       mode.q_substep_mode)
            belief = correct(prior, z_seq[k], u_seq[k], model, noise.R)
        except AmspDseError as e:
            if isinstance(e, NumericalError) and e.step is not None:
                raise
            raise NumericalError(str(e), step=k) from e
        except (ArithmeticError, np.linalg.LinAlgError) as e:
            raise NumericalError(f'{type(e).__name__}: {e}', step=k) from e
        step_time = time.perf_counter() - start
        elapsed += step_time

        run.estimates.append(belief)
        run.mp_trace.append(m_p)
        run.index_trace.append(idx._replace(m_p=m_p))
        run.step_times.append(step_time)
        if callback is not None:
            callback(k, belief, m_p, idx)

    run.wall_time = elapsed
    return run
