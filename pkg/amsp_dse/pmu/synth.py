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

r"""PMU-like measurement streams from noise-free trajectories."""

from dataclasses import dataclass

import numpy as np

from ..estimator.belief import NoiseModel
from ..model.machine import E_FD, E_I, E_R, I_I, I_R, T_M
from ..utils.errors import ConfigError
from ..utils.logger import logger


@dataclass(frozen=True)
class SynthConfig:
    r"""Settings of the measurement synthesis.

    Args:
        pmu_rate (float, optional): Reporting rate (samples/s). Defaults to 25.
        tve (float, optional): RMS total vector error of the phasors. Defaults to 0.04.
        input_noise (float, optional): Relative noise on ``E_fd`` and ``T_m``.
            Defaults to 0.04.
        noisy_current_inputs (bool, optional): Whether the current phasor used
            as input is noisy too. Defaults to True.
        seed (int, optional): Seed of the noise generator. Defaults to 0.
    """
    pmu_rate: float = 25.0
    tve: float = 0.04
    input_noise: float = 0.04
    noisy_current_inputs: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.pmu_rate <= 0:
            raise ConfigError('pmu_rate must be positive')
        if not (0 <= self.tve < 1 and 0 <= self.input_noise < 1):
            raise ConfigError('tve and input_noise must lie in [0, 1)')
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError('seed must be an unsigned 64-bit integer')


@dataclass
class MeasurementSeries:
    r"""Noisy measurements and inputs at the PMU rate, with the decimated truth."""
    times: np.ndarray
    z_seq: np.ndarray
    u_seq: np.ndarray
    truth_ref: np.ndarray

    def __len__(self):
        return len(self.times)

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])


def decimation_ratio(dt_sim, rate):
    r"""Number of simulation rows per PMU sample.

    Raises:
        ConfigError: If the ratio is not an integer.
    """
    ratio = 1.0 / (rate * dt_sim)
    if ratio < 1 - 1e-9 or abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
        raise ConfigError(f'rate {rate} samples/s does not divide the simulation rate {1 / dt_sim:g}')
    return int(round(ratio))


def decimate(traj, rate):
    r"""Keeps every ``1 / (rate dt_sim)``-th row, starting with the first."""
    return traj.take(slice(None, None, decimation_ratio(traj.dt, rate)))


def add_phasor_noise(re, im, tve, rng):
    r"""Adds Gaussian noise whose RMS total vector error equals ``tve``.

    Each component gets an independent deviation ``tve |Z| / sqrt(2)``.

    Args:
        re (float or numpy.ndarray): Real part.
        im (float or numpy.ndarray): Imaginary part.
        tve (float): RMS total vector error (fraction).
        rng (numpy.random.Generator): Noise source.

    Returns:
        tuple: Noisy ``(re, im)``.
    """
    if tve < 0:
        raise ValueError('tve must be non-negative')
    re, im = np.asarray(re, dtype=float), np.asarray(im, dtype=float)
    sigma = tve * np.hypot(re, im) / np.sqrt(2.0)
    noise = rng.standard_normal((2,) + re.shape)
    return re + sigma * noise[0], im + sigma * noise[1]


def synthesize(traj, cfg):
    r"""Decimates a truth trajectory and adds PMU and input noise.

    Args:
        traj (TruthTrajectory): Noise-free trajectory.
        cfg (SynthConfig): Synthesis settings.

    Returns:
        MeasurementSeries: Fully determined by ``cfg.seed``.
    """
    dec = decimate(traj, cfg.pmu_rate)
    rng = np.random.default_rng(int(cfg.seed))
    z = dec.measurements.copy()
    u = dec.inputs.copy()
    z[:, E_R], z[:, E_I] = add_phasor_noise(z[:, E_R], z[:, E_I], cfg.tve, rng)
    if cfg.noisy_current_inputs:
        u[:, I_R], u[:, I_I] = add_phasor_noise(u[:, I_R], u[:, I_I], cfg.tve, rng)
    for col in (E_FD, T_M):
        u[:, col] *= 1.0 + cfg.input_noise * rng.standard_normal(len(u))
    return MeasurementSeries(dec.times, z, u, dec.states)


def derive_noise_model(traj, q_fraction=0.04, r_std=0.04, p0_factor=10.0, squared=True):
    r"""Noise covariances and initial covariance from the largest state changes.

    With ``s_i`` the largest change of state ``i`` between consecutive
    samples, ``Q = diag((q_fraction s)^2)``, ``P0 = diag((p0_factor s)^2)``
    and ``R = diag(r_std^2, r_std^2)``. ``squared=False`` uses ``q_fraction s``
    and ``p0_factor s`` directly as the diagonals.

    Args:
        traj (TruthTrajectory or MeasurementSeries): Decimated truth.

    Returns:
        tuple: ``(NoiseModel, P0)``.
    """
    states = traj.truth_ref if isinstance(traj, MeasurementSeries) else traj.states
    if len(states) < 2:
        raise ConfigError('need at least two samples to derive the noise model')
    s = np.max(np.abs(np.diff(states, axis=0)), axis=0)
    if np.any(s < 1e-12):
        logger.warning(f'degenerate scenario: constant states {np.flatnonzero(s < 1e-12).tolist()} '
                       'floored at 1e-12 in the noise model')
        s = np.maximum(s, 1e-12)
    power = 2 if squared else 1
    Q = np.diag((q_fraction * s) ** power)
    P0 = np.diag((p0_factor * s) ** power)
    R = np.diag([r_std ** 2, r_std ** 2])
    return NoiseModel(Q, R), P0
