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

r"""CSV exports of Monte-Carlo reports."""

from pathlib import Path

import numpy as np

from ..model.machine import STATE_NAMES
from ..utils.errors import IngestionError
from .records import read_rows, write_rows

MMSE_COLUMNS = ('mode', 'state', 'segment', 'mMSE')
TIMING_COLUMNS = ('mode', 'mean_s', 'min_s', 'max_s')
SEGMENT_TIMING_COLUMNS = ('mode', 'segment', 'mean_s')
CURVE_COLUMNS = ('mode', 't') + STATE_NAMES
MC_TRACE_COLUMNS = ('mode', 't', 'M_p', 'n_phi', 'n_h')


def write_report(report, out_dir, curves=True):
    r"""Writes the report tables of a Monte-Carlo batch.

    ``mmse.csv`` and the curve files only depend on the seeds, the timing
    files depend on the machine.

    Args:
        report (McReport): The batch statistics.
        out_dir (str or Path): Output directory.
        curves (bool, optional): Also write the per-step curves. Defaults to True.

    Returns:
        dict: File role to written path.
    """
    out_dir = Path(out_dir)
    paths = {
        'mmse': write_rows(out_dir / 'mmse.csv', MMSE_COLUMNS, report.mmse_rows()),
        'timing': write_rows(out_dir / 'timing.csv', TIMING_COLUMNS, report.timing_rows()),
        'segment_timing': write_rows(out_dir / 'segment_timing.csv', SEGMENT_TIMING_COLUMNS,
                                     report.segment_timing_rows()),
    }
    if curves:
        paths['mse_curves'] = write_rows(out_dir / 'mse_curves.csv', CURVE_COLUMNS, (
            (label, t, *mse) for label in report.modes
            for t, mse in zip(report.times, report.mse[label])))
        paths['mc_traces'] = write_rows(out_dir / 'mc_traces.csv', MC_TRACE_COLUMNS, (
            (label, t, m, idx[0], idx[1]) for label in report.modes
            for t, m, idx in zip(report.times, report.mp_mean[label], report.index_mean[label])))
    return paths


def read_mmse(path):
    r"""Reads ``mmse.csv`` back.

    Returns:
        list of tuple: ``(mode, state, segment, value)`` with segment ``whole``
            or an int.
    """
    header, rows = read_rows(path)
    if tuple(header) != MMSE_COLUMNS:
        raise IngestionError(f'expected columns {MMSE_COLUMNS} in {path}, got {tuple(header)}')
    records = []
    for r, row in enumerate(rows, start=1):
        if len(row) != len(MMSE_COLUMNS):
            raise IngestionError(f'expected {len(MMSE_COLUMNS)} fields, got {len(row)}', row=r)
        mode, state, segment, value = row
        if state not in STATE_NAMES:
            raise IngestionError(f'unknown state {state!r}', row=r, column='state')
        try:
            value = float(value)
            segment = segment if segment == 'whole' else int(segment)
        except ValueError:
            raise IngestionError('not a number', row=r, column='mMSE') from None
        if not np.isfinite(value) or value < 0:
            raise IngestionError(f'invalid mMSE {value!r}', row=r, column='mMSE')
        records.append((mode, state, segment, value))
    return records


def pivot_mmse(records):
    r"""Lays mMSE records out as a mode-by-state table.

    Returns:
        tuple: ``(header, rows)`` with header ``state,mode,whole,seg1..segS``.
    """
    modes = list(dict.fromkeys(rec[0] for rec in records))
    segments = sorted({rec[2] for rec in records if rec[2] != 'whole'})
    values = {(mode, state, segment): v for mode, state, segment, v in records}
    header = ['state', 'mode', 'whole'] + [f'seg{s}' for s in segments]
    rows = []
    for state in STATE_NAMES:
        for mode in modes:
            if (mode, state, 'whole') not in values:
                continue
            rows.append([state, mode] + [values.get((mode, state, s), float('nan'))
                                         for s in ['whole'] + segments])
    return header, rows


def write_table(records, path):
    r"""Writes the pivoted mMSE table to ``path``."""
    header, rows = pivot_mmse(records)
    return write_rows(path, header, rows)
