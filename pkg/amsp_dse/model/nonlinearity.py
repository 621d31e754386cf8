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

r"""Nonlinearity indexes of the transition and measurement functions.

An index is the first-order Taylor remainder of a function, normalized by
the covariance of the noise entering the same equation::

    eps = f(x + dx) - [f(x) + J(x) dx]
    n   = eps^T C^-1 eps

A step is quasi-linear when both indexes are well below one.
"""

from typing import NamedTuple

import numpy as np
import scipy.linalg as la

from ..utils.errors import ConfigError
from .machine import MachineModel
from .machine import MachineParams


class NonlinearityIndexes(NamedTuple):
    n_phi: float
    n_h: float
    m_p: int = 0


def _as_model(model):
    if isinstance(model, MachineParams):
        return MachineModel(model)
    return model


def linearization_error(fn, jac, x, dx):
    r"""First-order Taylor remainder of ``fn`` at ``x`` along ``dx``.

    Args:
        fn (callable): Vector function.
        jac (callable): Its Jacobian.
        x (numpy.ndarray): Expansion point.
        dx (numpy.ndarray): Perturbation.

    Returns:
        numpy.ndarray: ``fn(x + dx) - fn(x) - jac(x) @ dx``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    dx = np.atleast_1d(np.asarray(dx, dtype=float))
    if not np.all(np.isfinite(dx)):
        raise ValueError('state perturbation must be finite')
    linear = np.atleast_1d(fn(x)) + np.atleast_2d(jac(x)) @ dx
    return np.atleast_1d(fn(x + dx)) - linear


def normalized_index(eps, cov):
    r"""Quadratic form ``eps^T cov^-1 eps``.

    Diagonal covariances take an element-wise path; full matrices go through
    a Cholesky solve.

    Raises:
        ConfigError: If ``cov`` is not symmetric positive definite.
    """
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    if cov.shape != (eps.size, eps.size):
        raise ConfigError(f'covariance shape {cov.shape} does not match {eps.size} components')
    diag = np.diag(cov)
    if np.count_nonzero(cov - np.diag(diag)) == 0:
        if np.any(diag <= 0):
            raise ConfigError('noise covariance must have a strictly positive diagonal')
        return float(np.sum(eps ** 2 / diag))
    if not np.allclose(cov, cov.T):
        raise ConfigError('noise covariance must be symmetric')
    try:
        factor = la.cho_factor(cov)
    except la.LinAlgError as e:
        raise ConfigError(f'noise covariance is not positive definite: {e}') from e
    return float(eps @ la.cho_solve(factor, eps))


def index_phi(x, dx, u, model, dt, Q):
    r"""Nonlinearity index of the state transition over ``dt``.

    Args:
        x (numpy.ndarray): Expansion point.
        dx (numpy.ndarray): State perturbation.
        u (numpy.ndarray): Input, held over the interval.
        model (MachineModel or MachineParams): Discrete model.
        dt (float): Interval length (s).
        Q (numpy.ndarray): Process noise covariance.

    Returns:
        tuple: ``(eps_phi, n_phi)``.
    """
    if dt <= 0:
        raise ValueError('dt must be positive')
    model = _as_model(model)
    eps = linearization_error(
        lambda v: model.transition(v, u, dt),
        lambda v: model.transition_jacobian(v, u, dt),
        x, dx)
    return eps, normalized_index(eps, Q)


def index_h(x, dx, u, model, R):
    r"""Nonlinearity index of the measurement function.

    Returns:
        tuple: ``(eps_h, n_h)``.
    """
    model = _as_model(model)
    eps = linearization_error(
        lambda v: model.measure(v, u),
        lambda v: model.measurement_jacobian(v, u),
        x, dx)
    return eps, normalized_index(eps, R)


def evaluate_indexes(model, x, dx, u, dt, Q, R, m_p=0):
    r"""Both indexes for one interval, tagged with the active factor ``m_p``."""
    _, n_phi = index_phi(x, dx, u, model, dt, Q)
    _, n_h = index_h(x, dx, u, model, R)
    return NonlinearityIndexes(n_phi, n_h, m_p)


def subdivided_indexes(model, x, dx, u, dt, Q, R, m_p):
    r"""Indexes of one sub-step when the interval is split into ``2**m_p`` parts.

    Both the step length and the perturbation are divided by ``2**m_p``.
    """
    parts = 2 ** int(m_p)
    return evaluate_indexes(model, x, np.asarray(dx) / parts, u, dt / parts, Q, R, m_p)


def is_quasi_linear(indexes, threshold=1.0):
    r"""Whether both indexes are below ``threshold``."""
    return indexes.n_phi < threshold and indexes.n_h < threshold
