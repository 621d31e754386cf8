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

from ..dataset import (ingest_trajectory, read_measurements, write_estimates, write_rows,
                       write_traces)
from ..estimator.filter import run_filter
from ..model.machine import STATE_NAMES
from ..pmu.synth import decimate
from ..utils.errors import ConfigError
from .metrics import mmse
from .runner import Runner

COMPANION_TRUTH = 'truth_decimated.csv'


class Estimator(Runner):
    r"""Runs one estimator mode over a measurement series.

    The truth companion is taken from ``paths.truth`` or, when absent, from a
    ``truth_decimated.csv`` next to the measurements. A truth sampled faster
    than the measurements is decimated onto their grid.
    """

    def load(self):
        paths = self.conf.paths
        if paths['measurements'] is None:
            raise ConfigError('estimate needs a measurement series (--measurements)')
        series = read_measurements(paths['measurements'])
        truth_path = paths['truth']
        if truth_path is None and (paths['measurements'].parent / COMPANION_TRUTH).is_file():
            truth_path = paths['measurements'].parent / COMPANION_TRUTH
        if truth_path is None:
            return series
        truth = ingest_trajectory(truth_path)
        if len(truth) != len(series):
            truth = decimate(truth, 1.0 / series.dt)
        return read_measurements(paths['measurements'], truth)

    def run(self):
        conf = self.conf
        series = self.load()
        has_truth = series.truth_ref is not None
        noise, P0 = conf.noise_model(series if has_truth else None)
        mode = conf.mode

        def callback(k, belief, m_p, idx):
            self.monitor.add_scalar(f'{mode.label}/M_p', m_p, k)
            self.monitor.add_scalar(f'{mode.label}/n_phi', idx.n_phi, k)
            self.monitor.add_scalar(f'{mode.label}/n_h', idx.n_h, k)

        run = run_filter(series.z_seq, series.u_seq, conf.model, noise, P0, mode, series.dt,
                         n_init=conf.n_init, callback=callback)
        paths = {
            'estimates': write_estimates(series.times, run, self.output_path / 'estimates.csv'),
            'traces': write_traces(series.times, run, self.output_path / 'traces.csv'),
        }
        self.monitor.info(f'{mode.label}: {len(series)} measurements filtered in '
                          f'{run.wall_time:.4f}s, mean M_p {np.mean(run.mp_trace):.3f}')
        if has_truth:
            errors = mmse((run.means[1:] - series.truth_ref[1:]) ** 2)
            paths['errors'] = write_rows(self.output_path / 'errors.csv',
                                         ('mode', 'state', 'squared_error'),
                                         ((mode.label, s, e) for s, e in zip(STATE_NAMES, errors)))
            self.monitor.info('time-averaged squared error: ' + ', '.join(
                f'{s} {e:.3e}' for s, e in zip(STATE_NAMES, errors)))
        return paths
