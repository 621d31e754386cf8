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

import numpy as np
import pytest

from amsp_dse.dataset import pivot_mmse, read_mmse, read_rows, write_report
from amsp_dse.estimator import EstimatorMode, NoiseModel
from amsp_dse.model import MachineParams
from amsp_dse.pmu import SynthConfig
from amsp_dse.runner import McConfig, run_mc
from amsp_dse.scenario import ScenarioConfig
from amsp_dse.utils.errors import ConfigError, NumericalError, TrialError

PARAMS = MachineParams.from_frequency(60.0, H=6.5, K_D=0.0, x_d=1.8, x_q=1.7, xp_d=0.3,
                                      xp_q=0.55, Tp_d0=8.0, Tp_q0=0.4)
FAULT = ScenarioConfig(duration=3.0, fault_start=1.0)
STEADY = ScenarioConfig(duration=2.0, fault_start=100.0)
MODES = (EstimatorMode('ekf'), EstimatorMode('cmsp', m_fixed=2), EstimatorMode('amsp'))


def batch(**kargs):
    kargs.setdefault('trials', 3)
    kargs.setdefault('segment_length', 1.0)
    kargs.setdefault('modes', MODES)
    kargs.setdefault('base_seed', 42)
    return McConfig(**kargs)


@pytest.fixture(scope='module')
def report():
    return run_mc(FAULT, SynthConfig(), batch(), PARAMS, quiet=True)


def test_report_layout(report):
    assert report.modes == ['ekf', 'cmsp2', 'amsp']
    assert report.trials == 3
    assert len(report.times) == 75
    assert report.times[0] == pytest.approx(0.04)
    assert report.segments == [(0, 25), (25, 50), (50, 75)]
    for label in report.modes:
        assert report.mse[label].shape == (75, 4)
        assert np.all(report.mse[label] >= 0)
        assert len(report.wall_times[label]) == 3
        assert report.step_times[label].shape == (75,)
    np.testing.assert_array_equal(report.mp_mean['cmsp2'], 2.0)
    np.testing.assert_array_equal(report.mp_mean['ekf'], 0.0)


def test_segments_average_to_whole(report):
    for label in report.modes:
        segments = [(stop - start) * report.mmse(label, s)
                    for s, (start, stop) in enumerate(report.segments, start=1)]
        np.testing.assert_allclose(sum(segments) / 75, report.mmse(label), rtol=1e-12)


def test_report_files(tmp_path, report):
    paths = write_report(report, tmp_path)
    header, rows = read_rows(paths['mmse'])
    assert header == ['mode', 'state', 'segment', 'mMSE']
    assert len(rows) == 3 * 4 * (3 + 1)
    header, rows = read_rows(paths['timing'])
    assert header == ['mode', 'mean_s', 'min_s', 'max_s']
    assert [row[0] for row in rows] == report.modes
    header, rows = read_rows(paths['segment_timing'])
    assert len(rows) == 3 * 3
    header, rows = read_rows(paths['mse_curves'])
    assert len(rows) == 3 * 75

    records = read_mmse(paths['mmse'])
    assert records == list(report.mmse_rows())
    header, rows = pivot_mmse(records)
    assert header == ['state', 'mode', 'whole', 'seg1', 'seg2', 'seg3']
    assert len(rows) == 4 * 3
    assert rows[0][:2] == ['delta', 'ekf']


def test_same_seed_same_report(tmp_path, report):
    again = run_mc(FAULT, SynthConfig(), batch(), PARAMS, quiet=True)
    for label in report.modes:
        np.testing.assert_array_equal(again.mse[label], report.mse[label])
        np.testing.assert_array_equal(again.mp_mean[label], report.mp_mean[label])
    first = write_report(report, tmp_path / 'a')
    second = write_report(again, tmp_path / 'b')
    for name in ('mmse', 'mse_curves', 'mc_traces'):
        assert first[name].read_bytes() == second[name].read_bytes()


def test_other_seed_other_report(report):
    other = run_mc(FAULT, SynthConfig(), batch(base_seed=43), PARAMS, quiet=True)
    assert not np.array_equal(other.mse['ekf'], report.mse['ekf'])


def test_parallel_trials_match_sequential(report):
    parallel = run_mc(FAULT, SynthConfig(), batch(workers=2, timed=False), PARAMS, quiet=True)
    for label in report.modes:
        np.testing.assert_array_equal(parallel.mse[label], report.mse[label])


def test_noise_free_equilibrium_is_tracked():
    steady = run_mc(STEADY, SynthConfig(tve=0.0, input_noise=0.0),
                    batch(trials=1, modes=(EstimatorMode('ekf'),)), PARAMS, quiet=True)
    assert steady.mmse('ekf')[0] < 1e-10


def test_amsp_is_cheaper_on_steady_state():
    noise = NoiseModel(np.diag([1e-6, 1e-8, 1e-6, 1e-6]), np.diag([1.6e-3, 1.6e-3]))
    steady = run_mc(STEADY, SynthConfig(tve=0.0, input_noise=0.0),
                    batch(trials=2, modes=(EstimatorMode('cmsp', m_fixed=5),
                                           EstimatorMode('amsp'))),
                    PARAMS, noise=noise, P0=np.diag([1e-4, 1e-6, 1e-4, 1e-4]), quiet=True)
    np.testing.assert_array_equal(steady.mp_mean['amsp'], 0.0)
    assert steady.total_time('amsp') < steady.total_time('cmsp5')


def test_failing_trial(monkeypatch):
    def failing(*args, **kargs):
        raise NumericalError('innovation covariance is singular', step=4)

    monkeypatch.setattr('amsp_dse.runner.montecarlo.run_filter', failing)
    with pytest.raises(TrialError) as info:
        run_mc(FAULT, SynthConfig(), batch(), PARAMS, quiet=True)
    assert info.value.trial == 0
    assert info.value.mode == 'ekf'
    assert info.value.exit_code == 4
    assert 'step 4' in str(info.value)


@pytest.mark.parametrize('kargs', [
    dict(trials=0), dict(segment_length=0.0), dict(modes=()), dict(workers=0),
    dict(modes=(EstimatorMode('ekf'), EstimatorMode('cmsp', m_fixed=0), EstimatorMode('ekf'))),
    dict(base_seed=2 ** 64),
])
def test_invalid_batch(kargs):
    with pytest.raises(ConfigError):
        batch(**kargs)


def test_seed_derivation():
    mc = batch(base_seed=0b1010)
    assert [mc.seed(n) for n in range(4)] == [10, 11, 8, 9]
