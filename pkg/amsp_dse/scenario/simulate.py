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

r"""Ground-truth trajectories of a machine on an infinite bus with a staged fault."""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..model.machine import DOMEGA, E_FD, T_M
from ..model.machine import state_derivative
from ..utils.errors import ConfigError
from ..utils.errors import InstabilityError
from ..utils.logger import logger
from .network import solve_stator_network
from .network import steady_state_init

DAMPING_PROFILES = ('lightly_damped', 'well_damped')


@dataclass(frozen=True)
class ScenarioConfig:
    r"""Fault scenario of the single machine, infinite bus system.

    Args:
        duration (float): Simulated time (s).
        fault_start (float): Fault inception (s).
        dt_sim (float, optional): Integration step (s). Defaults to 0.001.
        fault_clear_near (float, optional): Near-end clearing after inception (s).
            Defaults to 0.050.
        fault_clear_remote (float, optional): Remote-end clearing after inception (s).
            Defaults to 0.100.
        v_inf (float, optional): Infinite-bus voltage (pu). Defaults to 1.0.
        x_e_pre (float, optional): External reactance before the fault (pu).
        x_e_fault (float, optional): Reactance from the terminal to the fault (pu).
        x_e_post (float, optional): External reactance after clearing (pu).
        v_fault (float, optional): Fraction of ``v_inf`` behind ``x_e_fault`` while
            the fault is on. Defaults to 0 (bolted fault).
        v_partial (float, optional): Fraction of ``v_inf`` retained while only the
            near end is cleared. Defaults to 0.5.
        operating_point (tuple, optional): ``(P, V_t)`` before the fault.
        damping_profile (str, optional): Key of ``damping_values``.
        damping_values (dict, optional): ``K_D`` of each damping profile.
        instability_limit (float, optional): ``|domega|`` (pu) beyond which the
            machine is declared unstable. Defaults to 0.5.
    """
    duration: float
    fault_start: float
    dt_sim: float = 0.001
    fault_clear_near: float = 0.050
    fault_clear_remote: float = 0.100
    v_inf: float = 1.0
    x_e_pre: float = 0.4
    x_e_fault: float = 0.05
    x_e_post: float = 0.5
    v_fault: float = 0.0
    v_partial: float = 0.5
    operating_point: Tuple[float, float] = (0.8, 1.0)
    damping_profile: str = 'lightly_damped'
    damping_values: Dict[str, float] = field(
        default_factory=lambda: {'lightly_damped': 0.0, 'well_damped': 40.0})
    instability_limit: float = 0.5

    def __post_init__(self):
        # a fault_start beyond the duration gives an undisturbed run
        if self.duration <= 0 or self.fault_start < 0:
            raise ConfigError('need duration > 0 and fault_start >= 0')
        if self.dt_sim <= 0:
            raise ConfigError('dt_sim must be positive')
        if not 0 <= self.fault_clear_near <= self.fault_clear_remote:
            raise ConfigError('need 0 <= fault_clear_near <= fault_clear_remote')
        if min(self.x_e_pre, self.x_e_post) <= 0 or self.x_e_fault < 0 or self.v_inf <= 0:
            raise ConfigError('reactances must be positive (x_e_fault >= 0) and v_inf > 0')
        if self.damping_profile not in self.damping_values:
            raise ConfigError(f'unknown damping profile `{self.damping_profile}`')
        object.__setattr__(self, 'operating_point', tuple(self.operating_point))
        object.__setattr__(self, 'damping_values', dict(self.damping_values))

    @property
    def K_D(self):
        return float(self.damping_values[self.damping_profile])

    @property
    def n_steps(self):
        return int(round(self.duration / self.dt_sim))

    def stage_bounds(self):
        r"""Step indexes at which the fault starts, the near end and the remote end clear."""
        start = self.fault_start / self.dt_sim
        return (int(round(start)),
                int(round(start + self.fault_clear_near / self.dt_sim)),
                int(round(start + self.fault_clear_remote / self.dt_sim)))

    def network_at(self, k):
        r"""``(v, x_e)`` seen by the machine during step ``k``."""
        k_fault, k_near, k_remote = self.stage_bounds()
        if k < k_fault:
            return self.v_inf, self.x_e_pre
        if k < k_near:
            return self.v_fault * self.v_inf, self.x_e_fault
        if k < k_remote:
            return self.v_partial * self.v_inf, self.x_e_post
        return self.v_inf, self.x_e_post


@dataclass
class TruthTrajectory:
    r"""Noise-free samples on a uniform time grid."""
    times: np.ndarray
    states: np.ndarray
    inputs: np.ndarray
    measurements: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float).reshape(-1, 4)
        self.inputs = np.asarray(self.inputs, dtype=float).reshape(-1, 4)
        self.measurements = np.asarray(self.measurements, dtype=float).reshape(-1, 2)
        lengths = {len(self.times), len(self.states), len(self.inputs), len(self.measurements)}
        if len(lengths) != 1:
            raise ValueError(f'trajectory columns have different lengths: {sorted(lengths)}')

    def __len__(self):
        return len(self.times)

    @property
    def dt(self):
        return float(self.times[1] - self.times[0]) if len(self) > 1 else 0.0

    def take(self, index):
        r"""Returns the rows selected by ``index`` as a new trajectory."""
        return TruthTrajectory(self.times[index], self.states[index],
                               self.inputs[index], self.measurements[index])


def simulate(cfg, p):
    r"""Integrates the machine through the staged fault with classical RK4.

    Mechanical torque and field voltage stay at their pre-fault equilibrium
    values; currents and terminal voltage are solved from the network at
    every stage evaluation.

    Args:
        cfg (ScenarioConfig): Scenario.
        p (MachineParams): Machine constants; ``K_D`` is taken from the
            scenario's damping profile.

    Returns:
        TruthTrajectory: One row per ``dt_sim``.

    Raises:
        InstabilityError: If the speed deviation exceeds the limit.
    """
    p = p.with_damping(cfg.K_D)
    x, u0 = steady_state_init(cfg.operating_point, cfg.v_inf, cfg.x_e_pre, p)
    t_m, e_fd = u0[T_M], u0[E_FD]
    dt = cfg.dt_sim
    n = cfg.n_steps + 1
    logger.info(f'Simulating {cfg.duration} s ({n} rows, profile={cfg.damping_profile}, K_D={p.K_D})')

    def rates(state, v, x_e):
        i_R, i_I, _ = solve_stator_network(state, v, x_e, p)
        return state_derivative(state, np.array([t_m, e_fd, i_R, i_I]), p)

    states = np.empty((n, 4))
    inputs = np.empty((n, 4))
    measurements = np.empty((n, 2))
    for k in range(n):
        v, x_e = cfg.network_at(k)
        i_R, i_I, e = solve_stator_network(x, v, x_e, p)
        states[k], inputs[k], measurements[k] = x, (t_m, e_fd, i_R, i_I), e
        if abs(x[DOMEGA]) > cfg.instability_limit or not np.all(np.isfinite(x)):
            raise InstabilityError(
                f'machine lost synchronism at t={k * dt:.3f} s (domega={x[DOMEGA]:.3g} pu)')
        if k == n - 1:
            break
        k1 = rates(x, v, x_e)
        k2 = rates(x + 0.5 * dt * k1, v, x_e)
        k3 = rates(x + 0.5 * dt * k2, v, x_e)
        k4 = rates(x + dt * k3, v, x_e)
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    return TruthTrajectory(np.arange(n) * dt, states, inputs, measurements)
