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

from dataclasses import fields

import numpy as np

from ...estimator.amsp import AmspConfig, EstimatorMode
from ...estimator.belief import NoiseModel
from ...model.machine import MachineModel, MachineParams
from ...pmu.synth import SynthConfig, derive_noise_model
from ...runner.montecarlo import McConfig
from ...scenario.simulate import ScenarioConfig
from ..errors import ConfigError
from ..helper import to_absolute_path


def _build(cls, group, kwargs):
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(kwargs) - names)
    if unknown:
        raise ConfigError(f'unknown keys {unknown} in `{group}`')
    try:
        return cls(**kwargs)
    except TypeError as e:
        raise ConfigError(f'invalid `{group}` configuration: {e}') from None


class Configuration(object):
    r"""Domain objects built from the composed configuration.

    Args:
        conf (dict): The resolved configuration tree.

    Raises:
        ConfigError: If a group holds unknown keys or invalid values.
    """

    def __init__(self, conf):
        self.tree = conf
        self.command = conf['command']
        self.args = dict(conf['args'])
        self.paths = {k: to_absolute_path(v) for k, v in conf['paths'].items()}
        self.machine_params, self.integrator, self.jacobian = self.get_machine(conf)
        self.scenario = self.get_scenario(conf)
        self.synth = _build(SynthConfig, 'synth', dict(conf['synth']))
        self.amsp = self.get_amsp(conf['estimator'])
        self.mode = self.get_mode(conf['estimator'])
        self.n_init = int(conf['estimator']['n_init'])
        if self.n_init < 1:
            raise ConfigError('estimator.n_init must be at least 1')
        self.noise = dict(conf['estimator']['noise'])
        self.mc = self.get_mc(conf['mc'])
        self.export_curves = bool(conf['mc']['export_curves'])

    def get_machine(self, conf):
        r"""Machine constants and the filter's discrete model options."""
        machine = dict(conf['machine'])
        integrator = machine.pop('integrator')
        jacobian = machine.pop('jacobian')
        machine.pop('damping')
        f0 = machine.pop('f0')
        try:
            params = MachineParams.from_frequency(f0, K_D=0.0, **machine)
        except TypeError as e:
            raise ConfigError(f'invalid `machine` configuration: {e}') from None
        return params, integrator, jacobian

    def get_scenario(self, conf):
        scenario = dict(conf['scenario'])
        scenario['damping_values'] = dict(conf['machine']['damping'])
        return _build(ScenarioConfig, 'scenario', scenario)

    def get_amsp(self, est):
        return AmspConfig(U=float(est['upper']), L=float(est['lower']),
                          M_max=int(est['mmax']), M_init=int(est['m_init']),
                          q_substep_mode=est['q_substep'])

    def get_mode(self, est):
        return EstimatorMode(est['mode'], m_fixed=int(est['mp']), amsp=self.amsp)

    def get_mc(self, mc):
        modes = []
        for entry in mc['modes']:
            entry = dict(entry)
            unknown = sorted(set(entry) - {'mode', 'mp'})
            if 'mode' not in entry or unknown:
                raise ConfigError(f'mc.modes entries need `mode` and optionally `mp`, got {entry}')
            modes.append(EstimatorMode(entry['mode'], m_fixed=int(entry.get('mp', 0)),
                                       amsp=self.amsp))
        return McConfig(trials=int(mc['trials']), base_seed=int(mc['base_seed']),
                        segment_length=float(mc['segment_length']), modes=tuple(modes),
                        workers=int(mc['workers']), timed=bool(mc['timed']))

    @property
    def model(self):
        r"""Filter model with the damping of the configured scenario."""
        return MachineModel(self.machine_params.with_damping(self.scenario.K_D),
                            self.integrator, self.jacobian)

    @property
    def noise_options(self):
        r"""Keyword arguments of :func:`~amsp_dse.pmu.synth.derive_noise_model`."""
        return {k: self.noise[k] for k in ('q_fraction', 'r_std', 'p0_factor', 'squared')}

    def has_explicit_noise(self):
        return all(self.noise[k] is not None for k in ('q_diag', 'r_diag', 'p0_diag'))

    def noise_model(self, truth=None):
        r"""Noise model and initial covariance.

        Values derived from ``truth`` are replaced by the explicit diagonals
        ``q_diag``, ``r_diag`` and ``p0_diag`` when these are set.

        Args:
            truth (TruthTrajectory or MeasurementSeries, optional): Decimated truth.

        Returns:
            tuple: ``(NoiseModel, P0)``.

        Raises:
            ConfigError: If neither a truth nor all explicit diagonals are given.
        """
        if truth is None and not self.has_explicit_noise():
            raise ConfigError('the noise model needs a truth companion or explicit '
                              'estimator.noise.{q_diag,r_diag,p0_diag}')
        if truth is not None and not self.has_explicit_noise():
            noise, P0 = derive_noise_model(truth, **self.noise_options)
            Q, R = noise.Q, noise.R
        else:
            Q = R = P0 = None
        if self.noise['q_diag'] is not None:
            Q = np.diag(np.asarray(self.noise['q_diag'], dtype=float))
        if self.noise['r_diag'] is not None:
            R = np.diag(np.asarray(self.noise['r_diag'], dtype=float))
        if self.noise['p0_diag'] is not None:
            P0 = np.diag(np.asarray(self.noise['p0_diag'], dtype=float))
        if Q.shape != (4, 4) or R.shape != (2, 2) or P0.shape != (4, 4):
            raise ConfigError('q_diag and p0_diag need 4 entries, r_diag needs 2')
        if np.any(np.diag(P0) <= 0):
            raise ConfigError('the initial covariance must have a positive diagonal')
        return NoiseModel(Q, R), P0
