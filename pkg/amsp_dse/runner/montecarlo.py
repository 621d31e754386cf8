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

r"""Seeded Monte-Carlo comparison of estimator modes."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Dict, List, Tuple

import numpy as np
from tqdm import tqdm

from ..estimator.amsp import EstimatorMode
from ..estimator.filter import run_filter
from ..model.machine import DELTA, MachineModel, STATE_NAMES
from ..pmu.synth import decimate, derive_noise_model, synthesize
from ..scenario.simulate import simulate
from ..utils.errors import AmspDseError, ConfigError, TrialError
from ..utils.logger import logger
from .metrics import mmse, segment_bounds, steps_per_segment


def _default_modes():
    return (EstimatorMode('ekf'), EstimatorMode('cmsp', m_fixed=5), EstimatorMode('amsp'))


@dataclass(frozen=True)
class McConfig:
    r"""Settings of a Monte-Carlo batch.

    Args:
        trials (int, optional): Number of trials. Defaults to 100.
        base_seed (int, optional): Trial ``n`` uses seed ``base_seed ^ n``.
            Defaults to 0.
        segment_length (float, optional): Length of the report segments (s).
            Defaults to 10.
        modes (tuple of EstimatorMode, optional): Modes run on every trial.
            Defaults to ekf, cmsp5 and amsp.
        workers (int, optional): Processes used when ``timed`` is off.
            Defaults to 1.
        timed (bool, optional): Runs trials one at a time so wall times are
            uncontended. Defaults to True.
    """
    trials: int = 100
    base_seed: int = 0
    segment_length: float = 10.0
    modes: Tuple[EstimatorMode, ...] = field(default_factory=_default_modes)
    workers: int = 1
    timed: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'modes', tuple(self.modes))
        if self.trials < 1:
            raise ConfigError('trials must be at least 1')
        if self.segment_length <= 0:
            raise ConfigError('segment_length must be positive')
        if not 0 <= int(self.base_seed) < 2 ** 64:
            raise ConfigError('base_seed must be an unsigned 64-bit integer')
        if self.workers < 1:
            raise ConfigError('workers must be at least 1')
        labels = [m.label for m in self.modes]
        if not labels:
            raise ConfigError('at least one estimator mode is required')
        if len(set(labels)) != len(labels):
            raise ConfigError(f'duplicate estimator modes: {labels}')

    def seed(self, n):
        return int(self.base_seed) ^ n


@dataclass
class McReport:
    r"""Accumulated Monte-Carlo statistics, keyed by mode label.

    Every per-step array covers the filtered steps only (the initial belief
    is excluded), so ``times[0]`` is the time of the first correction.
    """
    times: np.ndarray
    trials: int
    segments: List[Tuple[int, int]]
    mse: Dict[str, np.ndarray] = field(default_factory=dict)
    wall_times: Dict[str, List[float]] = field(default_factory=dict)
    step_times: Dict[str, np.ndarray] = field(default_factory=dict)
    mp_mean: Dict[str, np.ndarray] = field(default_factory=dict)
    index_mean: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def modes(self):
        return list(self.mse)

    def mmse(self, label, segment=None):
        r"""Per-state mMSE of a mode.

        Args:
            label (str): Mode label.
            segment (int, optional): 1-based segment, or None for the whole run.
        """
        if segment is None:
            return mmse(self.mse[label])
        start, stop = self.segments[segment - 1]
        return mmse(self.mse[label], range(start, stop))

    def mmse_rows(self):
        r"""Rows ``(mode, state, segment, mMSE)``; segment is ``whole`` or 1-based."""
        for label in self.modes:
            whole = self.mmse(label)
            per_segment = [self.mmse(label, s) for s in range(1, len(self.segments) + 1)]
            for i, state in enumerate(STATE_NAMES):
                yield label, state, 'whole', whole[i]
                for s, values in enumerate(per_segment, start=1):
                    yield label, state, s, values[i]

    def timing_rows(self):
        r"""Rows ``(mode, mean_s, min_s, max_s)`` of the per-trial wall time."""
        for label, times in self.wall_times.items():
            yield label, float(np.mean(times)), float(np.min(times)), float(np.max(times))

    def segment_timing_rows(self):
        r"""Rows ``(mode, segment, mean_s)``: mean time per filter step in each segment."""
        for label, times in self.step_times.items():
            for s, (start, stop) in enumerate(self.segments, start=1):
                yield label, s, float(np.mean(times[start:stop]))

    def total_time(self, label):
        return float(np.sum(self.wall_times[label]))


@dataclass(frozen=True)
class TrialContext:
    r"""Everything shared by the trials of a batch."""
    truth: object
    synth: object
    model: MachineModel
    noise: object
    P0: np.ndarray
    modes: Tuple[EstimatorMode, ...]
    base_seed: int
    n_init: int = 1


@dataclass
class TrialResult:
    r"""Squared errors and timings of one mode on one trial."""
    sq_err: np.ndarray
    wall_time: float
    step_times: np.ndarray
    mp_trace: np.ndarray
    indexes: np.ndarray


def run_trial(ctx, n):
    r"""Synthesizes the noisy series of trial ``n`` and runs every mode on it.

    Returns:
        dict: Mode label to :class:`TrialResult`.

    Raises:
        TrialError: With the trial index and the mode label.
    """
    series = synthesize(ctx.truth, replace(ctx.synth, seed=int(ctx.base_seed) ^ n))
    results = {}
    for mode in ctx.modes:
        try:
            run = run_filter(series.z_seq, series.u_seq, ctx.model, ctx.noise, ctx.P0,
                             mode, series.dt, n_init=ctx.n_init)
        except AmspDseError as e:
            raise TrialError(n, mode.label, str(e), e.exit_code) from e
        results[mode.label] = TrialResult(
            (run.means[1:] - series.truth_ref[1:]) ** 2,
            run.wall_time,
            np.asarray(run.step_times[1:]),
            np.asarray(run.mp_trace[1:], dtype=float),
            run.indexes[1:])
    return results


def run_mc(scenario, synth, mc, params, integrator='euler', jacobian='analytic',
           noise_options=None, noise=None, P0=None, n_init=1, truth=None,
           monitor=None, quiet=False):
    r"""Runs a paired Monte-Carlo comparison of estimator modes.

    The truth is simulated once. Trial ``n`` draws its noise from seed
    ``mc.base_seed ^ n`` and every mode filters the same noisy series.

    Args:
        scenario (ScenarioConfig): Truth scenario.
        synth (SynthConfig): Measurement synthesis; its seed is replaced per trial.
        mc (McConfig): Batch settings.
        params (MachineParams): Machine constants; the damping comes from the scenario.
        integrator (str, optional): Discrete model of the filter.
        jacobian (str, optional): Jacobian evaluation of the filter.
        noise_options (dict, optional): Keyword arguments of
            :func:`~amsp_dse.pmu.synth.derive_noise_model`.
        noise (NoiseModel, optional): Explicit noise model, derived if None.
        P0 (numpy.ndarray, optional): Explicit initial covariance, derived if None.
        n_init (int, optional): Samples averaged by the initial back-solve.
        truth (TruthTrajectory, optional): Precomputed truth at the simulation rate.
        monitor (ProgressMeter, optional): Receives per-trial wall time and
            mean squared delta error of each mode.
        quiet (bool, optional): Hides the progress bar.

    Returns:
        McReport: The accumulated statistics.

    Raises:
        TrialError: If any trial fails; the batch is aborted.
    """
    params = params.with_damping(scenario.K_D)
    if truth is None:
        truth = simulate(scenario, params)
    decimated = decimate(truth, synth.pmu_rate)
    if noise is None or P0 is None:
        derived, derived_P0 = derive_noise_model(decimated, **(noise_options or {}))
        noise = derived if noise is None else noise
        P0 = derived_P0 if P0 is None else P0

    ctx = TrialContext(truth, synth, MachineModel(params, integrator, jacobian),
                       noise, np.asarray(P0, dtype=float), mc.modes, mc.base_seed, n_init)
    n_steps = len(decimated) - 1
    dt = float(decimated.times[1] - decimated.times[0])
    report = McReport(decimated.times[1:],
                      mc.trials,
                      segment_bounds(n_steps, steps_per_segment(mc.segment_length, dt)))
    sums = {m.label: None for m in mc.modes}

    logger.info(f'Running {mc.trials} trials of {[m.label for m in mc.modes]} '
                f'over {n_steps} steps')
    trial = partial(run_trial, ctx)
    if mc.timed or mc.workers == 1:
        if mc.workers > 1:
            logger.warning('timed Monte-Carlo runs are sequential, ignoring workers')
        _accumulate(map(trial, range(mc.trials)), report, sums, mc, monitor, quiet)
    else:
        with ProcessPoolExecutor(max_workers=mc.workers) as pool:
            chunksize = max(1, mc.trials // (4 * mc.workers))
            _accumulate(pool.map(trial, range(mc.trials), chunksize=chunksize),
                        report, sums, mc, monitor, quiet)

    for label, acc in sums.items():
        report.mse[label] = acc['sq_err'] / mc.trials
        report.step_times[label] = acc['step_times'] / mc.trials
        report.mp_mean[label] = acc['mp'] / mc.trials
        report.index_mean[label] = acc['indexes'] / mc.trials
    logger.info('Monte-Carlo batch done: ' + ', '.join(
        f'{label} {report.total_time(label):.3f}s' for label in report.modes))
    return report


def _accumulate(results, report, sums, mc, monitor, quiet):
    for n, result in enumerate(tqdm(results, total=mc.trials, disable=quiet, desc='trials')):
        for label, r in result.items():
            acc = sums[label]
            if acc is None:
                sums[label] = acc = {'sq_err': np.zeros_like(r.sq_err),
                                     'step_times': np.zeros_like(r.step_times),
                                     'mp': np.zeros_like(r.mp_trace),
                                     'indexes': np.zeros_like(r.indexes)}
                report.wall_times[label] = []
            acc['sq_err'] += r.sq_err
            acc['step_times'] += r.step_times
            acc['mp'] += r.mp_trace
            acc['indexes'] += r.indexes
            report.wall_times[label].append(r.wall_time)
            if monitor is not None:
                monitor.update(f'{label}/wall_s', r.wall_time)
                monitor.update(f'{label}/mse_delta', float(np.mean(r.sq_err[:, DELTA])))
                monitor.add_scalar(f'{label}/wall_s', r.wall_time, n)
