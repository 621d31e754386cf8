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

from ..dataset import ingest_trajectory, read_mmse, write_report, write_table
from ..pmu.synth import decimate
from ..scenario.simulate import simulate
from .montecarlo import run_mc
from .runner import Runner


class MonteCarlo(Runner):
    r"""Paired Monte-Carlo comparison of the configured estimator modes.

    Writes ``mmse.csv``, ``timing.csv``, ``segment_timing.csv`` and, unless
    disabled, the per-step ``mse_curves.csv`` and ``mc_traces.csv``.
    """

    def __init__(self, conf, output_path):
        super().__init__(conf, output_path, num_steps=conf.mc.trials)

    def simulate(self):
        r"""Runs the batch and returns its report."""
        conf = self.conf
        if conf.paths['truth'] is not None:
            truth = ingest_trajectory(conf.paths['truth'])
        else:
            truth = simulate(conf.scenario, conf.machine_params)
        noise, P0 = conf.noise_model(decimate(truth, conf.synth.pmu_rate))
        return run_mc(conf.scenario, conf.synth, conf.mc, conf.machine_params,
                      integrator=conf.integrator, jacobian=conf.jacobian,
                      noise=noise, P0=P0, n_init=conf.n_init, truth=truth,
                      monitor=self.monitor, quiet=conf.args['quiet'])

    def summarize(self, report):
        for label in report.modes:
            whole = report.mmse(label)
            self.monitor.info(f'{label}: total {report.total_time(label):.3f}s, '
                              f'mMSE delta {whole[0]:.3e}')
            self.monitor.add_scalar(f'{label}/mMSE_delta', whole[0], report.trials)
        self.monitor.display(report.trials)

    def run(self):
        report = self.simulate()
        self.summarize(report)
        paths = write_report(report, self.output_path, curves=self.conf.export_curves)
        self.monitor.info(f'Report written to {self.output_path}')
        return paths


class Comparer(MonteCarlo):
    r"""Renders the mode-by-state mMSE table.

    The table is built from an existing ``mmse.csv`` (``paths.report``, a file
    or the directory holding it) or from a fresh Monte-Carlo batch.
    """

    def run(self):
        report_path = self.conf.paths['report']
        if report_path is not None:
            if report_path.is_dir():
                report_path = report_path / 'mmse.csv'
            records = read_mmse(report_path)
            paths = {}
        else:
            report = self.simulate()
            self.summarize(report)
            paths = write_report(report, self.output_path, curves=self.conf.export_curves)
            records = list(report.mmse_rows())
        paths['table'] = write_table(records, self.output_path / 'table.csv')
        self.monitor.info(f'Comparison table written to {paths["table"]}')
        return paths
