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

from ..dataset import ingest_trajectory, write_measurements, write_trajectory
from ..pmu.synth import decimate, synthesize
from ..scenario.simulate import simulate
from ..utils.errors import ConfigError
from .runner import Runner


class Simulator(Runner):
    r"""Simulates the configured scenario and exports the truth trajectory."""

    def run(self):
        conf = self.conf
        truth = simulate(conf.scenario, conf.machine_params)
        path = write_trajectory(truth, self.output_path / 'truth.csv')
        self.monitor.info(f'Truth trajectory of {len(truth)} rows written to {path}')
        return {'truth': path}


class Synthesizer(Runner):
    r"""Turns a truth trajectory into a noisy PMU measurement series.

    The decimated truth is written next to the measurements so that the
    estimate command can derive its noise model and errors from it.
    """

    def run(self):
        truth_path = self.conf.paths['truth']
        if truth_path is None:
            raise ConfigError('synth needs a truth trajectory (--truth or paths.truth)')
        truth = ingest_trajectory(truth_path)
        series = synthesize(truth, self.conf.synth)
        paths = {
            'measurements': write_measurements(series, self.output_path / 'measurements.csv'),
            'truth_decimated': write_trajectory(decimate(truth, self.conf.synth.pmu_rate),
                                                self.output_path / 'truth_decimated.csv'),
        }
        self.monitor.info(f'{len(series)} measurements written to {paths["measurements"]} '
                          f'(seed {self.conf.synth.seed})')
        return paths
