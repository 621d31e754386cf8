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

import argparse
import logging
import sys
from pathlib import Path

import colorlog
from hydra import compose, initialize_config_dir
from hydra.errors import HydraException
from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from ... import runner
from ..errors import AmspDseError, ConfigError
from ..helper import get_output_path
from ..logger import logger
from .args import Configuration

CONFIG_DIR = Path(__file__).resolve().parents[2] / 'conf'

# flag destination to configuration key
FLAGS = {
    'seed': 'seed',
    'out': 'out',
    'truth': 'paths.truth',
    'measurements': 'paths.measurements',
    'report': 'paths.report',
    'mode': 'estimator.mode',
    'mp': 'estimator.mp',
    'upper': 'estimator.upper',
    'lower': 'estimator.lower',
    'mmax': 'estimator.mmax',
    'q_substep': 'estimator.q_substep',
    'trials': 'mc.trials',
    'segment': 'mc.segment_length',
}


def main(cfg: DictConfig):
    r"""Runs the command named by ``cfg.command``.

    Args:
        cfg (DictConfig): The composed configuration.

    Returns:
        int: The process exit code.
    """
    try:
        config = OmegaConf.to_container(cfg, resolve=True)
        if config.get('command') not in runner.RUNNERS:
            raise ConfigError(f"unknown command `{config.get('command')}`, "
                              f'expected one of {list(runner.RUNNERS)}')
        objects = Configuration(config)

        output_path = get_output_path(cfg)
        logger.info("Saving experiment results to %s" % output_path)

        runner.__dict__[runner.RUNNERS[objects.command]](objects, output_path)()
    except AmspDseError as e:
        logger.error(f'{type(e).__name__}: {e}')
        return e.exit_code
    except OmegaConfBaseException as e:
        logger.error(f'invalid configuration: {e}')
        return ConfigError.exit_code
    return 0


def setup_logging(level=logging.INFO):
    r"""Installs the colored console handler used outside of hydra runs."""
    handler = colorlog.StreamHandler()
    handler.setFormatter(colorlog.ColoredFormatter(
        '[%(cyan)s%(asctime)s%(reset)s][%(blue)s%(name)s%(reset)s]'
        '[%(log_color)s%(levelname)s%(reset)s] - %(message)s'))
    logger.handlers[:] = [handler]
    logger.setLevel(level)
    logger.propagate = False


def build_parser():
    r"""Argument parser of the ``amsp_dse`` console script."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, help='YAML file merged on top of the defaults')
    common.add_argument('--seed', type=int, help='base seed (u64)')
    common.add_argument('--out', help='output directory')
    common.add_argument('overrides', nargs='*', help='hydra overrides, e.g. scenario=well_damped')

    estimator = argparse.ArgumentParser(add_help=False)
    estimator.add_argument('--mode', choices=('ekf', 'cmsp', 'amsp'))
    estimator.add_argument('--mp', type=int, help='constant prediction factor of cmsp')
    estimator.add_argument('--upper', type=float, help='upper threshold U of amsp')
    estimator.add_argument('--lower', type=float, help='lower threshold L of amsp')
    estimator.add_argument('--mmax', type=int, help='largest prediction factor of amsp')
    estimator.add_argument('--q-substep', dest='q_substep', choices=('paper', 'scaled'))

    batch = argparse.ArgumentParser(add_help=False)
    batch.add_argument('--trials', type=int, help='number of Monte-Carlo trials')
    batch.add_argument('--segment', type=float, help='report segment length (s)')

    parser = argparse.ArgumentParser(
        prog='amsp_dse',
        description='Dynamic state estimation of a synchronous machine with an '
                    'adaptive multi-step prediction EKF.')
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('simulate', parents=[common], help='simulate the truth trajectory')
    synth = commands.add_parser('synth', parents=[common], help='synthesize PMU measurements')
    synth.add_argument('--truth', type=Path, help='truth trajectory CSV')
    estimate = commands.add_parser('estimate', parents=[common, estimator],
                                   help='run one estimator over a measurement series')
    estimate.add_argument('--measurements', type=Path, help='measurement series CSV')
    estimate.add_argument('--truth', type=Path, help='decimated truth CSV')
    mc = commands.add_parser('mc', parents=[common, estimator, batch],
                             help='paired Monte-Carlo comparison')
    mc.add_argument('--truth', type=Path, help='truth trajectory CSV (simulated if absent)')
    compare = commands.add_parser('compare', parents=[common, estimator, batch],
                                  help='mode-by-state mMSE table')
    compare.add_argument('--report', type=Path, help='existing mmse.csv or its directory')
    compare.add_argument('--truth', type=Path, help='truth trajectory CSV (simulated if absent)')
    return parser


def compose_config(args):
    r"""Composes the configuration of a parsed command line.

    Defaults come from the package's config tree, then the hydra overrides,
    then ``--config``, then the flags.

    Raises:
        ConfigError: If composing or merging fails.
    """
    try:
        with initialize_config_dir(config_dir=str(CONFIG_DIR), version_base='1.1'):
            cfg = compose(config_name='config',
                          overrides=[f'command={args.command}'] + list(args.overrides))
        if args.config is not None:
            if not args.config.is_file():
                raise ConfigError(f'config file not found: {args.config}')
            cfg = OmegaConf.merge(cfg, OmegaConf.load(args.config))
        for dest, key in FLAGS.items():
            value = getattr(args, dest, None)
            if value is not None:
                OmegaConf.update(cfg, key, str(value) if isinstance(value, Path) else value,
                                 merge=False)
    except (HydraException, OmegaConfBaseException) as e:
        raise ConfigError(f'invalid configuration: {e}') from None
    return cfg


def console_main(argv=None):
    r"""Entry point of the ``amsp_dse`` console script."""
    args = build_parser().parse_args(argv)
    setup_logging()
    try:
        cfg = compose_config(args)
    except ConfigError as e:
        logger.error(str(e))
        return e.exit_code
    return main(cfg)


if __name__ == '__main__':
    sys.exit(console_main())
