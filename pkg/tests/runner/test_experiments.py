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

import numpy as np
import pytest
from omegaconf import OmegaConf

from amsp_dse.estimator import AmspConfig, EstimatorMode, run_filter
from amsp_dse.pmu import decimate, synthesize
from amsp_dse.runner import McConfig, run_mc
from amsp_dse.scenario import simulate
from amsp_dse.utils.cli.args import Configuration
from amsp_dse.utils.cli.cli import build_parser, compose_config


def configuration(*argv):
    cfg = compose_config(build_parser().parse_args(['mc', *argv]))
    return Configuration(OmegaConf.to_container(cfg, resolve=True))


@pytest.fixture(scope='module')
def experiment():
    conf = configuration('experiment=lightly_damped')
    truth = simulate(conf.scenario, conf.machine_params.with_damping(conf.scenario.K_D))
    return conf, truth


def test_experiment_settings(experiment):
    conf, _ = experiment
    assert conf.scenario.fault_start == pytest.approx(10.1)
    assert conf.scenario.duration == pytest.approx(30.0)
    assert (conf.amsp.U, conf.amsp.L, conf.amsp.M_max) == (0.3, 0.005, 5)
    assert conf.amsp.q_substep_mode == 'scaled'


@pytest.mark.parametrize('seed', [0, 1, 2])
def test_amsp_adapts_to_the_fault(experiment, seed):
    conf, truth = experiment
    series = synthesize(truth, replace(conf.synth, seed=seed))
    noise, P0 = conf.noise_model(decimate(truth, conf.synth.pmu_rate))
    run = run_filter(series.z_seq, series.u_seq, conf.model, noise, P0, conf.mode, series.dt,
                     n_init=conf.n_init)
    fault = int(np.searchsorted(series.times, conf.scenario.fault_start))
    mp_trace = np.asarray(run.mp_trace)

    # quiet before the fault once the first five steps are over
    assert np.all(mp_trace[5:fault] == 0)
    assert np.max(mp_trace[fault:fault + 11]) >= 2
    # and back to a single step while the swings fade
    assert mp_trace[-1] < conf.amsp.M_max


def modes(*factors, q_substep_mode='scaled'):
    amsp = AmspConfig(q_substep_mode=q_substep_mode)
    return tuple(EstimatorMode('cmsp', m_fixed=m, amsp=amsp) for m in factors)


@pytest.mark.slow
def test_cmsp_accuracy_improves_with_the_factor(experiment):
    conf, truth = experiment
    mc = McConfig(trials=10, base_seed=5, segment_length=10.0, modes=modes(0, 1, 3, 5),
                  timed=False)
    report = run_mc(conf.scenario, conf.synth, mc, conf.machine_params, truth=truth,
                    noise_options=conf.noise_options, quiet=True)
    delta = [report.mmse(label)[0] for label in ('cmsp0', 'cmsp1', 'cmsp3', 'cmsp5')]
    for coarse, fine in zip(delta[:-1], delta[1:]):
        assert fine <= 1.05 * coarse


@pytest.mark.slow
def test_amsp_matches_cmsp_for_less_time(experiment):
    conf, truth = experiment
    amsp = EstimatorMode('amsp', amsp=conf.amsp)
    mc = McConfig(trials=100, base_seed=conf.mc.base_seed, segment_length=10.0,
                  modes=modes(5) + (amsp,))
    report = run_mc(conf.scenario, conf.synth, mc, conf.machine_params, truth=truth,
                    noise_options=conf.noise_options, quiet=True)

    cmsp, adaptive = report.mmse('cmsp5'), report.mmse('amsp')
    np.testing.assert_array_less(np.abs(adaptive - cmsp), 0.25 * cmsp)
    assert report.total_time('amsp') <= 0.7 * report.total_time('cmsp5')

    # the first segment ends before the fault
    steps = dict(((label, s), t) for label, s, t in report.segment_timing_rows())
    assert steps['amsp', 1] <= 0.5 * steps['cmsp5', 1]
