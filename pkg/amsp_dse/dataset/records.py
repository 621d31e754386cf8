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

r"""CSV readers and writers of trajectories, measurement series and results.

Floats are written with ``repr`` so that every file reads back bit-exact.
"""

import csv
from pathlib import Path

import numpy as np

from ..model.machine import INPUT_NAMES, MEASUREMENT_NAMES, STATE_NAMES
from ..pmu.synth import MeasurementSeries
from ..scenario.simulate import TruthTrajectory
from ..utils.errors import IngestionError

TRAJECTORY_COLUMNS = ('t',) + STATE_NAMES + INPUT_NAMES + MEASUREMENT_NAMES
MEASUREMENT_COLUMNS = ('t', 'e_R', 'e_I', 'i_R', 'i_I', 'T_m', 'E_fd')
ESTIMATE_COLUMNS = ('t',) + STATE_NAMES + tuple(f'P_{name}' for name in STATE_NAMES)
TRACE_COLUMNS = ('t', 'n_phi', 'n_h', 'M_p')

GRID_TOLERANCE = 1e-9


def _fmt(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_rows(path, header, rows):
    r"""Writes a header and rows; numbers are formatted losslessly.

    Args:
        path (str or Path): Output file, parent directories are created.
        header (sequence of str): Column names.
        rows (iterable): Row sequences.

    Returns:
        Path: The written file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as file:
        writer = csv.writer(file, delimiter=',', lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def read_rows(path):
    r"""Reads a CSV file into its header and list of string rows."""
    path = Path(path)
    if not path.is_file():
        raise IngestionError(f'file not found: {path}')
    with path.open('r', newline='') as file:
        reader = csv.reader(file)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise IngestionError(f'empty file: {path}') from None
        return header, [row for row in reader if row]


def read_columns(path, columns):
    r"""Reads the named numeric columns, validating the schema and values.

    Raises:
        IngestionError: Naming the missing column, or the row and column of
            an unparsable or non-finite value.
    """
    header, rows = read_rows(path)
    for name in columns:
        if name not in header:
            raise IngestionError(f'missing column in {path}', column=name)
    position = [header.index(name) for name in columns]
    data = np.empty((len(rows), len(columns)))
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise IngestionError(f'expected {len(header)} fields, got {len(row)}', row=r + 1)
        for c, (name, i) in enumerate(zip(columns, position)):
            try:
                value = float(row[i])
            except ValueError:
                raise IngestionError(f'not a number: {row[i]!r}', row=r + 1, column=name) from None
            if not np.isfinite(value):
                raise IngestionError(f'non-finite value {row[i]!r}', row=r + 1, column=name)
            data[r, c] = value
    return {name: data[:, c] for c, name in enumerate(columns)}


def check_time_grid(times, tolerance=GRID_TOLERANCE):
    r"""Raises if ``times`` is not strictly increasing on a uniform grid."""
    if len(times) < 2:
        raise IngestionError('need at least two rows')
    steps = np.diff(times)
    if steps[0] <= 0:
        raise IngestionError('time must be strictly increasing', row=2, column='t')
    bad = np.flatnonzero(np.abs(steps - steps[0]) > tolerance)
    if bad.size:
        raise IngestionError('non-uniform time grid', row=int(bad[0]) + 2, column='t')


def write_trajectory(traj, path):
    r"""Exports a truth trajectory (``t,delta,...,e_I``)."""
    rows = np.column_stack([traj.times, traj.states, traj.inputs, traj.measurements])
    return write_rows(path, TRAJECTORY_COLUMNS, rows)


def ingest_trajectory(path):
    r"""Reads and validates a truth trajectory CSV.

    Returns:
        TruthTrajectory: The parsed trajectory.

    Raises:
        IngestionError: On schema mismatch, non-uniform grid or bad values.
    """
    cols = read_columns(path, TRAJECTORY_COLUMNS)
    check_time_grid(cols['t'])
    return TruthTrajectory(
        cols['t'],
        np.column_stack([cols[n] for n in STATE_NAMES]),
        np.column_stack([cols[n] for n in INPUT_NAMES]),
        np.column_stack([cols[n] for n in MEASUREMENT_NAMES]))


def write_measurements(series, path):
    r"""Exports the noisy measurement series (``t,e_R,e_I,i_R,i_I,T_m,E_fd``)."""
    z, u = series.z_seq, series.u_seq
    rows = np.column_stack([series.times, z[:, 0], z[:, 1], u[:, 2], u[:, 3], u[:, 0], u[:, 1]])
    return write_rows(path, MEASUREMENT_COLUMNS, rows)


def read_measurements(path, truth=None):
    r"""Reads a measurement series, optionally attaching the decimated truth.

    Args:
        path (str or Path): Measurement CSV.
        truth (TruthTrajectory, optional): Companion truth on the same grid.

    Returns:
        MeasurementSeries: ``truth_ref`` is ``None`` without a companion.
    """
    cols = read_columns(path, MEASUREMENT_COLUMNS)
    check_time_grid(cols['t'])
    z = np.column_stack([cols['e_R'], cols['e_I']])
    u = np.column_stack([cols['T_m'], cols['E_fd'], cols['i_R'], cols['i_I']])
    truth_ref = None
    if truth is not None:
        if len(truth) != len(cols['t']) or np.max(np.abs(truth.times - cols['t'])) > GRID_TOLERANCE:
            raise IngestionError(f'truth companion does not share the time grid of {path}')
        truth_ref = truth.states
    return MeasurementSeries(cols['t'], z, u, truth_ref)


def write_estimates(times, run, path):
    r"""Posterior means and covariance diagonals, one row per measurement."""
    return write_rows(path, ESTIMATE_COLUMNS, np.column_stack([times, run.means, run.variances]))


def write_traces(times, run, path):
    r"""Nonlinearity indexes and prediction factor, one row per measurement."""
    rows = ((t, idx.n_phi, idx.n_h, m) for t, idx, m in zip(times, run.index_trace, run.mp_trace))
    return write_rows(path, TRACE_COLUMNS, rows)
