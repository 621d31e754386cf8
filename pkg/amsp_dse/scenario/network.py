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

r"""Algebraic closure of a machine connected to an infinite bus."""

import math

import numpy as np
from scipy import optimize

from ..model.machine import DELTA, ED_P, EQ_P
from ..model.machine import electric_torque
from ..model.machine import state_derivative
from ..model.machine import to_dq
from ..utils.errors import ScenarioError


def solve_stator_network(x, v_inf, x_e, p):
    r"""Solves the stator and line equations for the terminal current.

    The terminal voltage of the stator equations is equated with the line
    relation ``e_R = v_inf - x_e i_I``, ``e_I = x_e i_R`` (infinite bus at
    angle zero), which is linear in ``(i_R, i_I)``.

    Args:
        x (numpy.ndarray): Machine state.
        v_inf (float): Thevenin voltage seen through ``x_e`` (pu).
        x_e (float): External reactance (pu).
        p (MachineParams): Machine constants.

    Returns:
        tuple: ``(i_R, i_I, numpy.ndarray([e_R, e_I]))``.

    Raises:
        ScenarioError: If the linear system is singular.
    """
    delta, eq, ed = x[DELTA], x[EQ_P], x[ED_P]
    s, c = math.sin(delta), math.cos(delta)
    a11 = s * c * (p.xp_d - p.xp_q)
    a12 = -(c * c * p.xp_d + s * s * p.xp_q) - x_e
    a21 = s * s * p.xp_d + c * c * p.xp_q + x_e
    a22 = -a11
    b1 = s * ed + c * eq - v_inf
    b2 = -c * ed + s * eq
    det = a11 * a22 - a12 * a21
    if not abs(det) > 1e-12:
        raise ScenarioError(f'singular stator/network system (x_e={x_e})')
    i_R = (b1 * a22 - a12 * b2) / det
    i_I = (a11 * b2 - a21 * b1) / det
    return i_R, i_I, np.array([v_inf - x_e * i_I, x_e * i_R])


def steady_state_init(op, v_inf, x_e, p, tol=1e-10, max_iter=200):
    r"""Equilibrium state and input for an operating point.

    A closed-form phasor construction gives the starting point, which is
    then refined by a Newton-type solve of the equilibrium conditions.

    Args:
        op (tuple): ``(P, V_t)``, active power and terminal voltage magnitude.
        v_inf (float): Infinite-bus voltage (pu).
        x_e (float): External reactance (pu), positive.
        p (MachineParams): Machine constants.
        tol (float, optional): Solver tolerance. Defaults to 1e-10.
        max_iter (int, optional): Function evaluation budget. Defaults to 200.

    Returns:
        tuple: ``(x0, u0)`` as numpy arrays.

    Raises:
        ScenarioError: If the operating point is infeasible.
    """
    P, V_t = op
    if x_e <= 0 or V_t <= 0 or v_inf <= 0:
        raise ScenarioError('x_e, V_t and v_inf must be positive')
    sin_theta = P * x_e / (V_t * v_inf)
    if abs(sin_theta) > 1:
        raise ScenarioError(f'infeasible operating point P={P}, V_t={V_t}: transfer limit exceeded')

    voltage = V_t * complex(math.cos(math.asin(sin_theta)), sin_theta)
    current = (voltage - v_inf) / (1j * x_e)
    delta = float(np.angle(voltage + 1j * p.x_q * current))
    i_d, i_q = to_dq(delta, current.real, current.imag)
    v_d, v_q = to_dq(delta, voltage.real, voltage.imag)
    eq = v_q + p.xp_d * i_d
    ed = v_d - p.xp_q * i_q
    e_fd = eq + (p.x_d - p.xp_d) * i_d
    t_m = electric_torque(np.array([delta, 0.0, eq, ed]), (i_d, i_q), p)

    def split(y):
        x = np.array([y[0], 0.0, y[1], y[2]])
        i_R, i_I, e = solve_stator_network(x, v_inf, x_e, p)
        return x, np.array([y[4], y[3], i_R, i_I]), e

    def residual(y):
        x, u, e = split(y)
        rates = state_derivative(x, u, p)[1:]
        power = e[0] * u[2] + e[1] * u[3]
        return np.concatenate([rates, [power - P, math.hypot(*e) - V_t]])

    solution = optimize.root(residual, [delta, eq, ed, e_fd, t_m], method='hybr',
                             options={'xtol': tol, 'maxfev': max_iter})
    if not solution.success or np.max(np.abs(residual(solution.x))) > 1e-8:
        raise ScenarioError(f'infeasible operating point P={P}, V_t={V_t}: {solution.message}')
    x0, u0, _ = split(solution.x)
    return x0, u0
