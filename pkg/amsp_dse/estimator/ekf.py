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

r"""Extended Kalman filter steps with multi-step prediction.

The model argument is any object with ``transition``, ``transition_jacobian``,
``measure`` and ``measurement_jacobian`` methods (see
:class:`amsp_dse.model.MachineModel`).
"""

import numpy as np
import scipy.linalg as la

from ..model.machine import E_I, E_R, ED_P, EQ_P, DELTA, I_I, I_R
from ..model.machine import MachineParams
from ..model.machine import to_dq
from ..utils.errors import InitializationError
from ..utils.errors import NumericalError
from .amsp import _q_substep_mode
from .belief import GaussianBelief
from .belief import symmetrize


def _check_finite(belief, what):
    if not (np.all(np.isfinite(belief.mean)) and np.all(np.isfinite(belief.cov))):
        raise NumericalError(f'non-finite values after {what}')
    return belief


def init_belief(first_measurements, first_inputs, p, P0):
    r"""Initial belief from a steady-state back-solve of the first samples.

    The measurement/input pairs are averaged, then the machine is assumed to
    be in equilibrium: the q axis is aligned with ``V + j x_q I``, the speed
    deviation is zero and the transient voltages follow from the stator
    equations.

    Args:
        first_measurements (array-like): One or more ``[e_R, e_I]`` rows.
        first_inputs (array-like): Matching ``[T_m, E_fd, i_R, i_I]`` rows.
        p (MachineParams or MachineModel): Machine constants.
        P0 (numpy.ndarray): Initial covariance, returned unchanged.

    Returns:
        GaussianBelief: Initial posterior.

    Raises:
        InitializationError: If the phasors admit no equilibrium.
    """
    if not isinstance(p, MachineParams):
        p = p.params
    z = np.atleast_2d(np.asarray(first_measurements, dtype=float))
    u = np.atleast_2d(np.asarray(first_inputs, dtype=float))
    if z.shape[0] == 0 or z.shape[0] != u.shape[0]:
        raise InitializationError('need at least one measurement/input pair of equal count')
    z, u = z.mean(axis=0), u.mean(axis=0)

    voltage = complex(z[E_R], z[E_I])
    current = complex(u[I_R], u[I_I])
    internal = voltage + 1j * p.x_q * current
    if not np.isfinite(internal) or abs(internal) < 1e-9:
        raise InitializationError(f'no equilibrium for terminal phasors V={voltage}, I={current}')

    delta = np.angle(internal)
    i_d, i_q = to_dq(delta, u[I_R], u[I_I])
    v_d, v_q = to_dq(delta, z[E_R], z[E_I])
    mean = np.zeros(4)
    mean[DELTA] = delta
    mean[EQ_P] = v_q + p.xp_d * i_d
    mean[ED_P] = v_d - p.xp_q * i_q
    return GaussianBelief(mean, np.array(P0, dtype=float))


def predict_substep(b, u, model, dt_sub, Q_sub):
    r"""One prediction sub-step.

    The Jacobian is evaluated at the mean before the step.
    """
    if dt_sub <= 0:
        raise ValueError('dt_sub must be positive')
    F = model.transition_jacobian(b.mean, u, dt_sub)
    mean = model.transition(b.mean, u, dt_sub)
    cov = symmetrize(F @ b.cov @ F.T + Q_sub)
    return _check_finite(GaussianBelief(mean, cov), 'prediction')


def multi_step_predict(b, u, model, dt, m_p, noise, mode='paper'):
    r"""Predicts over ``dt`` with ``2**m_p`` equal sub-steps.

    Args:
        b (GaussianBelief): Posterior at the start of the interval.
        u (numpy.ndarray): Input, held constant over the interval.
        model: Discrete model.
        dt (float): Measurement interval (s).
        m_p (int): Prediction factor.
        noise (NoiseModel): Noise covariances.
        mode (str, optional): ``paper`` adds ``Q`` at every sub-step,
            ``scaled`` adds ``Q / 2**m_p``. Defaults to ``paper``.

    Returns:
        GaussianBelief: Prior at the end of the interval.
    """
    if m_p < 0 or dt <= 0:
        raise ValueError('need m_p >= 0 and dt > 0')
    parts = 2 ** int(m_p)
    dt_sub = dt / parts
    Q_sub = noise.Q if _q_substep_mode(mode) == 'paper' else noise.Q / parts
    for _ in range(parts):
        b = predict_substep(b, u, model, dt_sub, Q_sub)
    return b


def correct(b, z, u, model, R):
    r"""Measurement update with the Jacobian taken at the prior mean.

    Raises:
        NumericalError: If the innovation covariance cannot be factorized.
    """
    H = model.measurement_jacobian(b.mean, u)
    innovation = np.asarray(z, dtype=float) - model.measure(b.mean, u)
    S = H @ b.cov @ H.T + R
    try:
        factor = la.cho_factor(symmetrize(S))
    except (la.LinAlgError, ValueError) as e:
        raise NumericalError(f'innovation covariance is singular: {e}') from e
    # S and P are symmetric, so K^T = S^-1 H P
    K = la.cho_solve(factor, H @ b.cov).T
    mean = b.mean + K @ innovation
    cov = symmetrize((np.eye(b.mean.size) - K @ H) @ b.cov)
    return _check_finite(GaussianBelief(mean, cov), 'correction')
