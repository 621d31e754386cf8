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

"""Figures from the CSV files written by the ``amsp_dse`` commands.

Needs the ``plot`` extra (matplotlib).

    python scripts/plot_results.py mc log/default/mc --out figures
    python scripts/plot_results.py estimate log/default/estimate --truth truth_decimated.csv
"""

import argparse
from collections import defaultdict
from pathlib import Path

import matplotlib
import numpy as np

from amsp_dse.dataset import read_columns, read_rows
from amsp_dse.model.machine import STATE_NAMES

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

UNITS = {'delta': 'rad', 'domega': 'rad/s', 'eq_p': 'p.u.', 'ed_p': 'p.u.'}


def by_mode(path, columns):
    header, rows = read_rows(path)
    position = [header.index(c) for c in columns]
    data = defaultdict(list)
    for row in rows:
        data[row[header.index('mode')]].append([float(row[i]) for i in position])
    return {mode: np.asarray(values) for mode, values in data.items()}


def plot_mse_curves(result_dir, out_dir):
    curves = by_mode(result_dir / 'mse_curves.csv', ('t',) + STATE_NAMES)
    fig, axes = plt.subplots(len(STATE_NAMES), 1, figsize=(10, 12), sharex=True)
    for ax, (i, name) in zip(axes, enumerate(STATE_NAMES, start=1)):
        for mode, values in curves.items():
            ax.semilogy(values[:, 0], values[:, i], label=mode, linewidth=1)
        ax.set_ylabel(f'MSE {name} ({UNITS[name]}$^2$)')
        ax.grid(True)
    axes[0].legend(loc='upper right')
    axes[-1].set_xlabel('t (s)')
    return save(fig, out_dir / 'mse_curves.png')


def plot_mc_traces(result_dir, out_dir):
    traces = by_mode(result_dir / 'mc_traces.csv', ('t', 'M_p', 'n_phi', 'n_h'))
    fig, axes = plt.subplots(3, 1, figsize=(10, 9), sharex=True)
    for mode, values in traces.items():
        axes[0].step(values[:, 0], values[:, 1], where='post', label=mode, linewidth=1)
        axes[1].semilogy(values[:, 0], values[:, 2], label=mode, linewidth=1)
        axes[2].semilogy(values[:, 0], values[:, 3], label=mode, linewidth=1)
    for ax, label in zip(axes, ('mean M_p', 'mean n_phi', 'mean n_h')):
        ax.set_ylabel(label)
        ax.grid(True)
    axes[0].legend(loc='upper right')
    axes[-1].set_xlabel('t (s)')
    return save(fig, out_dir / 'mc_traces.png')


def plot_segment_timing(result_dir, out_dir):
    header, rows = read_rows(result_dir / 'segment_timing.csv')
    timing = defaultdict(dict)
    for mode, segment, mean_s in rows:
        timing[mode][int(segment)] = float(mean_s)
    segments = sorted({s for values in timing.values() for s in values})
    width = 0.8 / len(timing)
    fig, ax = plt.subplots(figsize=(10, 4))
    for i, (mode, values) in enumerate(timing.items()):
        x = np.arange(len(segments)) + i * width
        ax.bar(x, [1e3 * values.get(s, np.nan) for s in segments], width, label=mode)
    ax.set_xticks(np.arange(len(segments)) + 0.4 - width / 2)
    ax.set_xticklabels([str(s) for s in segments])
    ax.set_xlabel('segment')
    ax.set_ylabel('mean step time (ms)')
    ax.legend(loc='upper right')
    ax.grid(True, axis='y')
    return save(fig, out_dir / 'segment_timing.png')


def plot_estimate(result_dir, out_dir, truth=None):
    est = read_columns(result_dir / 'estimates.csv', ('t',) + STATE_NAMES +
                       tuple(f'P_{name}' for name in STATE_NAMES))
    ref = read_columns(truth, ('t',) + STATE_NAMES) if truth is not None else None
    fig, axes = plt.subplots(len(STATE_NAMES) + 1, 1, figsize=(10, 14), sharex=True)
    for ax, name in zip(axes, STATE_NAMES):
        std = np.sqrt(est[f'P_{name}'])
        ax.plot(est['t'], est[name], label='estimate', linewidth=1)
        ax.fill_between(est['t'], est[name] - 3 * std, est[name] + 3 * std, alpha=0.2)
        if ref is not None:
            ax.plot(ref['t'], ref[name], '--', label='truth', linewidth=1)
        ax.set_ylabel(f'{name} ({UNITS[name]})')
        ax.grid(True)
    axes[0].legend(loc='upper right')
    traces = read_columns(result_dir / 'traces.csv', ('t', 'M_p'))
    axes[-1].step(traces['t'], traces['M_p'], where='post', linewidth=1)
    axes[-1].set_ylabel('M_p')
    axes[-1].set_xlabel('t (s)')
    axes[-1].grid(True)
    return save(fig, out_dir / 'estimate.png')


def save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=200, bbox_inches='tight')
    plt.close(fig)
    print(f'wrote {path}')
    return path


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument('kind', choices=('mc', 'estimate'))
    parser.add_argument('results', type=Path, help='output directory of the command')
    parser.add_argument('--truth', type=Path, help='decimated truth CSV (estimate only)')
    parser.add_argument('--out', type=Path, help='figure directory, defaults to RESULTS')
    args = parser.parse_args()

    out_dir = args.out or args.results
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.kind == 'mc':
        plot_mse_curves(args.results, out_dir)
        plot_mc_traces(args.results, out_dir)
        plot_segment_timing(args.results, out_dir)
    else:
        plot_estimate(args.results, out_dir, args.truth)


if __name__ == '__main__':
    main()
