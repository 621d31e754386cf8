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

r"""Fourth-order (two-axis) synchronous machine model.

State, input and measurement vectors are plain ``numpy`` arrays whose
component order is fixed by :data:`STATE_NAMES`, :data:`INPUT_NAMES` and
:data:`MEASUREMENT_NAMES`::

    x = [delta, domega, eq_p, ed_p]
    u = [T_m, E_fd, i_R, i_I]
    z = [e_R, e_I]

The rotor angle is never wrapped. All functions are pure.
"""

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from ..utils.errors import ConfigError

STATE_NAMES = ('delta', 'domega', 'eq_p', 'ed_p')
INPUT_NAMES = ('T_m', 'E_fd', 'i_R', 'i_I')
MEASUREMENT_NAMES = ('e_R', 'e_I')

DELTA, DOMEGA, EQ_P, ED_P = range(4)
T_M, E_FD, I_R, I_I = range(4)
E_R, E_I = range(2)

INTEGRATORS = ('euler', 'modified_euler')
JACOBIANS = ('analytic', 'numeric')


@dataclass(frozen=True)
class MachineParams:
    r"""Physical constants of the two-axis machine model.

    Args:
        H (float): Inertia constant (s).
        K_D (float): Damping factor (pu torque per pu speed).
        omega0 (float): Synchronous speed (rad/s).
        x_d (float): d-axis synchronous reactance (pu).
        x_q (float): q-axis synchronous reactance (pu).
        xp_d (float): d-axis transient reactance (pu).
        xp_q (float): q-axis transient reactance (pu).
        Tp_d0 (float): d-axis open-circuit time constant (s).
        Tp_q0 (float): q-axis open-circuit time constant (s).

    Raises:
        ConfigError: If one of the physical invariants is violated.
    """
    H: float
    K_D: float
    omega0: float
    x_d: float
    x_q: float
    xp_d: float
    xp_q: float
    Tp_d0: float
    Tp_q0: float

    def __post_init__(self):
        values = [getattr(self, f) for f in self.__dataclass_fields__]
        if not np.all(np.isfinite(values)):
            raise ConfigError(f'machine parameters must be finite: {self}')
        if self.H <= 0 or self.Tp_d0 <= 0 or self.Tp_q0 <= 0 or self.omega0 <= 0:
            raise ConfigError('H, Tp_d0, Tp_q0 and omega0 must be positive')
        if not (self.x_d >= self.xp_d > 0 and self.x_q >= self.xp_q > 0):
            raise ConfigError('reactances must satisfy x_d >= xp_d > 0 and x_q >= xp_q > 0')
        if self.K_D < 0:
            raise ConfigError('K_D must be non-negative')

    @classmethod
    def from_frequency(cls, f0, **kargs):
        r"""Builds the parameters from the nominal frequency ``f0`` (Hz)."""
        return cls(omega0=2 * np.pi * f0, **kargs)

    def with_damping(self, K_D):
        r"""Returns a copy with another damping factor."""
        return replace(self, K_D=K_D)


class DqPair(NamedTuple):
    d: float
    q: float


def to_dq(delta, i_R, i_I):
    r"""Rotates a network-frame phasor into the rotor (d-q) frame."""
    s, c = np.sin(delta), np.cos(delta)
    return DqPair(s * i_R - c * i_I, c * i_R + s * i_I)


def from_dq(delta, d, q):
    r"""Inverse of :func:`to_dq`."""
    s, c = np.sin(delta), np.cos(delta)
    return s * d + c * q, -c * d + s * q


def measurement_fn(x, u, p):
    r"""Terminal voltage phasor ``h(x, u)`` in the network frame.

    Args:
        x (numpy.ndarray): State vector.
        u (numpy.ndarray): Input vector.
        p (MachineParams): Machine constants.

    Returns:
        numpy.ndarray: ``[e_R, e_I]``.
    """
    delta, eq, ed = x[DELTA], x[EQ_P], x[ED_P]
    s, c = np.sin(delta), np.cos(delta)
    i_d, i_q = to_dq(delta, u[I_R], u[I_I])
    e_R = s * ed + c * eq - (c * p.xp_d * i_d - s * p.xp_q * i_q)
    e_I = -c * ed + s * eq - (s * p.xp_d * i_d + c * p.xp_q * i_q)
    return np.array([e_R, e_I])


def electric_torque(x, idq, p):
    r"""Air-gap torque of the transient model.

    ``T_e = e'_d i_d + e'_q i_q + (x'_q - x'_d) i_d i_q``
    """
    i_d, i_q = idq
    return x[ED_P] * i_d + x[EQ_P] * i_q + (p.xp_q - p.xp_d) * i_d * i_q


def state_derivative(x, u, p):
    r"""Right-hand side of the swing and flux-decay equations (per second)."""
    idq = to_dq(x[DELTA], u[I_R], u[I_I])
    t_e = electric_torque(x, idq, p)
    domega = x[DOMEGA]
    return np.array([
        p.omega0 * domega,
        (u[T_M] - t_e - p.K_D * domega) / (2 * p.H),
        (u[E_FD] - x[EQ_P] - (p.x_d - p.xp_d) * idq.d) / p.Tp_d0,
        (-x[ED_P] + (p.x_q - p.xp_q) * idq.q) / p.Tp_q0,
    ])


def state_derivative_jacobian(x, u, p):
    r"""Analytic ``df/dx`` of :func:`state_derivative`."""
    delta, eq, ed = x[DELTA], x[EQ_P], x[ED_P]
    i_d, i_q = to_dq(delta, u[I_R], u[I_I])
    # d(i_d)/d(delta) = i_q and d(i_q)/d(delta) = -i_d
    dte_ddelta = ed * i_q - eq * i_d + (p.xp_q - p.xp_d) * (i_q ** 2 - i_d ** 2)
    two_h = 2 * p.H
    return np.array([
        [0.0, p.omega0, 0.0, 0.0],
        [-dte_ddelta / two_h, -p.K_D / two_h, -i_q / two_h, -i_d / two_h],
        [-(p.x_d - p.xp_d) * i_q / p.Tp_d0, 0.0, -1.0 / p.Tp_d0, 0.0],
        [-(p.x_q - p.xp_q) * i_d / p.Tp_q0, 0.0, 0.0, -1.0 / p.Tp_q0],
    ])


def euler_substep(x, u, p, dt):
    r"""One forward-Euler step ``x + f(x, u) dt``."""
    return x + state_derivative(x, u, p) * dt


def transition_jacobian(x, u, p, dt):
    r"""Jacobian of :func:`euler_substep`, ``I + dt df/dx``."""
    return np.eye(4) + dt * state_derivative_jacobian(x, u, p)


def modified_euler_substep(x, u, p, dt):
    r"""One modified-Euler (Heun) step."""
    k1 = state_derivative(x, u, p)
    k2 = state_derivative(x + dt * k1, u, p)
    return x + 0.5 * dt * (k1 + k2)


def modified_euler_jacobian(x, u, p, dt):
    r"""Jacobian of :func:`modified_euler_substep`."""
    a1 = state_derivative_jacobian(x, u, p)
    x1 = x + dt * state_derivative(x, u, p)
    a2 = state_derivative_jacobian(x1, u, p)
    eye = np.eye(4)
    return eye + 0.5 * dt * (a1 + a2 @ (eye + dt * a1))


def measurement_jacobian(x, u, p):
    r"""Analytic ``dh/dx``; the speed column is identically zero."""
    delta, eq, ed = x[DELTA], x[EQ_P], x[ED_P]
    s, c = np.sin(delta), np.cos(delta)
    i_d, i_q = to_dq(delta, u[I_R], u[I_I])
    dr_drop = -s * p.xp_d * i_d + c * p.xp_d * i_q - c * p.xp_q * i_q + s * p.xp_q * i_d
    di_drop = c * p.xp_d * i_d + s * p.xp_d * i_q - s * p.xp_q * i_q - c * p.xp_q * i_d
    return np.array([
        [c * ed - s * eq - dr_drop, 0.0, c, s],
        [s * ed + c * eq - di_drop, 0.0, s, -c],
    ])


def numerical_jacobian(fn, x, eps=1e-6):
    r"""Central finite-difference Jacobian of ``fn`` at ``x``.

    Args:
        fn (callable): Vector function of a single vector argument.
        x (numpy.ndarray): Expansion point.
        eps (float, optional): Absolute perturbation. Defaults to 1e-6.

    Returns:
        numpy.ndarray: Matrix of shape ``(len(fn(x)), len(x))``.
    """
    x = np.asarray(x, dtype=float)
    columns = []
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = eps
        columns.append((fn(x + step) - fn(x - step)) / (2 * eps))
    return np.stack(columns, axis=1)


class MachineModel(object):
    r"""Discrete-time view of the machine used by the estimator.

    Bundles the machine constants with the choice of integration scheme and
    Jacobian evaluation. Any object exposing the same four methods can be
    passed to the estimator instead (e.g. a linear test system).

    Args:
        params (MachineParams): Machine constants.
        integrator (str, optional): ``euler`` or ``modified_euler``.
            Defaults to ``euler``.
        jacobian (str, optional): ``analytic`` or ``numeric``.
            Defaults to ``analytic``.
    """

    n_states = 4
    n_measurements = 2

    def __init__(self, params, integrator='euler', jacobian='analytic'):
        if integrator not in INTEGRATORS:
            raise ConfigError(f'integrator `{integrator}` is not supported')
        if jacobian not in JACOBIANS:
            raise ConfigError(f'jacobian `{jacobian}` is not supported')
        self.params = params
        self.integrator = integrator
        self.jacobian = jacobian
        if integrator == 'euler':
            self._step, self._step_jacobian = euler_substep, transition_jacobian
        else:
            self._step, self._step_jacobian = modified_euler_substep, modified_euler_jacobian

    def transition(self, x, u, dt):
        return self._step(x, u, self.params, dt)

    def transition_jacobian(self, x, u, dt):
        if self.jacobian == 'numeric':
            return numerical_jacobian(lambda v: self.transition(v, u, dt), x)
        return self._step_jacobian(x, u, self.params, dt)

    def measure(self, x, u):
        return measurement_fn(x, u, self.params)

    def measurement_jacobian(self, x, u):
        if self.jacobian == 'numeric':
            return numerical_jacobian(lambda v: self.measure(v, u), x)
        return measurement_jacobian(x, u, self.params)

    def __repr__(self):
        return f'MachineModel(integrator={self.integrator}, jacobian={self.jacobian})'
