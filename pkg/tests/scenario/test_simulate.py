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

from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from omegaconf import OmegaConf
from scipy import signal

import amsp_dse
from amsp_dse.model import MachineParams
from amsp_dse.scenario import ScenarioConfig, TruthTrajectory, simulate
from amsp_dse.utils.errors import ConfigError, InstabilityError

PARAMS = MachineParams.from_frequency(60.0, H=6.5, K_D=0.0, x_d=1.8, x_q=1.7, xp_d=0.3,
                                      xp_q=0.55, Tp_d0=8.0, Tp_q0=0.4)


def test_undisturbed_run_holds_equilibrium():
    truth = simulate(ScenarioConfig(duration=5.0, fault_start=100.0), PARAMS)
    assert len(truth) == 5001
    assert truth.dt == pytest.approx(0.001)
    assert np.max(np.abs(truth.states[:, 1])) < 1e-9
    np.testing.assert_allclose(truth.states, truth.states[0], atol=1e-8)
    np.testing.assert_allclose(truth.measurements, truth.measurements[0], atol=1e-8)


def test_stages():
    cfg = ScenarioConfig(duration=1.0, fault_start=0.5, v_partial=0.5)
    assert cfg.stage_bounds() == (500, 550, 600)
    assert cfg.network_at(499) == (1.0, 0.4)
    assert cfg.network_at(500) == (0.0, 0.05)
    assert cfg.network_at(549) == (0.0, 0.05)
    assert cfg.network_at(550) == (0.5, 0.5)
    assert cfg.network_at(600) == (1.0, 0.5)


def test_fault_disturbs_the_machine():
    truth = simulate(ScenarioConfig(duration=2.0, fault_start=0.5), PARAMS)
    before, after = truth.states[:500], truth.states[600:]
    assert np.max(np.abs(before[:, 1])) < 1e-9
    assert np.max(np.abs(after[:, 1])) > 1e-3
    # the terminal voltage collapses while the fault is on
    assert np.hypot(*truth.measurements[520]) < 0.5 * np.hypot(*truth.measurements[0])


def test_damping_profiles():
    kargs = dict(duration=9.0, fault_start=1.0)
    light = simulate(ScenarioConfig(damping_profile='lightly_damped', **kargs), PARAMS)
    well = simulate(ScenarioConfig(damping_profile='well_damped', **kargs), PARAMS)
    window = slice(6000, 8000)
    assert np.max(np.abs(light.states[window, 1])) > 10 * np.max(np.abs(well.states[window, 1]))


def test_well_damped_settles():
    truth = simulate(ScenarioConfig(duration=21.0, fault_start=1.0,
                                    damping_profile='well_damped'), PARAMS)
    assert np.max(np.abs(truth.states[-2000:, 1])) < 1e-4


def test_instability_is_reported():
    with pytest.raises(InstabilityError):
        simulate(ScenarioConfig(duration=1.0, fault_start=0.2, instability_limit=1e-3), PARAMS)


@pytest.mark.parametrize('kargs', [
    dict(duration=0.0, fault_start=1.0),
    dict(duration=1.0, fault_start=-1.0),
    dict(duration=1.0, fault_start=0.5, dt_sim=0.0),
    dict(duration=1.0, fault_start=0.5, fault_clear_near=0.2, fault_clear_remote=0.1),
    dict(duration=1.0, fault_start=0.5, x_e_post=0.0),
    dict(duration=1.0, fault_start=0.5, damping_profile='pss'),
])
def test_invalid_scenario(kargs):
    with pytest.raises(ConfigError):
        ScenarioConfig(**kargs)


def test_trajectory_take():
    truth = TruthTrajectory(np.arange(5) * 0.1, np.zeros((5, 4)), np.ones((5, 4)), np.zeros((5, 2)))
    part = truth.take(slice(None, None, 2))
    assert len(part) == 3
    assert part.dt == pytest.approx(0.2)
    with pytest.raises(ValueError):
        TruthTrajectory(np.arange(5), np.zeros((4, 4)), np.zeros((5, 4)), np.zeros((5, 2)))


def shipped_scenario(name):
    conf = OmegaConf.load(Path(amsp_dse.__file__).parent / 'conf' / 'scenario' / f'{name}.yaml')
    return ScenarioConfig(**OmegaConf.to_container(conf))


@pytest.fixture(scope='module')
def lightly_damped():
    cfg = shipped_scenario('lightly_damped')
    return cfg, simulate(cfg, PARAMS)


def test_lightly_damped_oscillation_persists(lightly_damped):
    cfg, truth = lightly_damped
    after = truth.times > cfg.fault_start + 2.0
    times, domega = truth.times[after] - cfg.fault_start, truth.states[after, 1]
    peaks, _ = signal.find_peaks(domega, distance=int(0.4 / cfg.dt_sim))
    peak_times, amplitudes = times[peaks], domega[peaks]

    # still swinging more than 10 s after the fault
    assert peak_times[-1] > 10.0
    assert amplitudes[-1] > 1e-4

    assert len(amplitudes) >= 5
    per_cycle = (amplitudes[-1] / amplitudes[0]) ** (1.0 / (len(amplitudes) - 1))
    assert per_cycle > 0.8


def test_lightly_damped_keeps_synchronism(lightly_damped):
    cfg, truth = lightly_damped
    assert np.max(np.abs(truth.states[:, 1])) < 0.05
    # the rotor swings back instead of slipping a pole
    assert np.ptp(truth.states[truth.times > cfg.fault_start, 0]) < np.pi


def test_shipped_well_damped_settles():
    cfg = replace(shipped_scenario('well_damped'), duration=81.0)
    truth = simulate(cfg, PARAMS)
    late = truth.times > cfg.fault_start + 20.0
    assert np.max(np.abs(truth.states[late, 1])) < 1e-4
