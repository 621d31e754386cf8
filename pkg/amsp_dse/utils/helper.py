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

from collections import OrderedDict
import json
import os
from pathlib import Path

from hydra import utils

from .logger import logger
from .tensorboard import SummaryWriter


class ProgressMeter(object):
    r"""A Progress Meter.

        Args:
            num_batches (int): The number of steps of the monitored loop.
            path (str, optional): Path to save the log file and tensorboard
                events. Defaults to None (nothing is written to disk).
            quiet (bool, optional): Silences the meter. Defaults to False.
            filename (str, optional): Name of the log file. Defaults to 'log.txt'.
            tensorboard (bool, optional): Also write scalars to tensorboard.
                Defaults to False.
    """

    def __init__(self, num_batches, path=None, quiet=False, filename='log.txt',
                 tensorboard=False):
        self.batch_fmtstr = self._get_batch_fmtstr(num_batches)
        self.meters = OrderedDict()
        self.quiet = quiet
        self.file = None
        self.tb = None
        if path is None or quiet:
            return
        os.makedirs(path, exist_ok=True)
        filename = os.path.join(path, filename)
        if os.path.isfile(filename):
            name, ext = os.path.splitext(filename)
            i = 1
            while os.path.isfile("{}.{}{}".format(name, i, ext)):
                i += 1
            # new file incremental name like "log.1.txt"
            filename = "{}.{}{}".format(name, i, ext)
        self.file = open(filename, 'w')
        if tensorboard:
            self.tb = SummaryWriter(os.path.join(path, 'tensorboard'))

    def info(self, message):
        r"""Logs a message and appends it to the log file.

        Args:
            message (str): The message.
        """
        if self.quiet:
            return
        logger.info(message)
        if self.file is not None:
            self.file.write(message + '\n')
            self.file.flush()

    def display(self, batch, key=None):
        r"""Displays current values for meters.

        Args:
            batch (int): The current step.
            key (list of str, optional): Meters to show. Defaults to all.
        """
        entries = [self.batch_fmtstr.format(batch)]
        key = key or [m.name for m in self.meters.values()]
        entries += [str(meter) for meter in self.meters.values()
                    if meter.name in key]
        self.info('\t'.join(entries))

    def __getitem__(self, key):
        return self.meters[key]

    def write(self, n_iter):
        r"""Writes the meter averages to tensorboard.

        Args:
            n_iter (int): The step.
        """
        if self.tb is None:
            return
        for m in self.meters.values():
            self.tb.add_scalar(m.name, m.avg, n_iter)

    def add_scalar(self, tag, value, n_iter):
        r"""Writes a single scalar to tensorboard, if enabled."""
        if self.tb is not None:
            self.tb.add_scalar(tag, value, n_iter)

    def update(self, tag, value, n=1, fmt=':.4g'):
        r"""Updates the meter.

        Args:
            tag (str): The tag name.
            value (number): The value to update.
            n (int, optional): Weight of the value. Defaults to 1.
        """
        if tag not in self.meters:
            self.meters[tag] = AverageMeter(tag, fmt=fmt)
        self.meters[tag].update(value, n)

    def close(self):
        r"""Closes all the file descriptors."""
        if self.tb is not None:
            self.tb.close()
        if self.file is not None:
            self.file.close()

    def _get_batch_fmtstr(self, num_batches):
        num_digits = len(str(num_batches // 1))
        fmt = '{:' + str(num_digits) + 'd}'
        return '[' + fmt + '/' + fmt.format(num_batches) + ']'

    def reset(self):
        r"""Resets the ProgressMeter."""
        for m in self.meters.values():
            m.reset()


class AverageMeter(object):
    r"""Computes and stores the average, extremes and current value."""

    def __init__(self, name, fmt=':f'):
        self.name = name
        self.fmt = fmt
        self.reset()

    def reset(self):
        self.val = 0
        self.avg = 0
        self.sum = 0
        self.count = 0
        self.min = float('inf')
        self.max = float('-inf')

    def update(self, val, n=1):
        self.val = val
        self.sum += val * n
        self.count += n
        self.avg = self.sum / self.count
        self.min = min(self.min, val)
        self.max = max(self.max, val)

    def __str__(self):
        fmtstr = '{name} {val' + self.fmt + '} ({avg' + self.fmt + '})'
        return fmtstr.format(**self.__dict__)


def write_to_json_file(content, file_path):
    r"""Saves a dictionary to a json file.

    Args:
        content (dict): The content to save.
        file_path (str): The file path.
    """
    with open(file_path, 'w+') as file:
        json.dump(content, file,
                  ensure_ascii=False, indent=4,
                  default=lambda o: o.__class__.__name__)


def to_absolute_path(path):
    r"""Resolves ``path`` against the original working directory.

    Under a hydra run the working directory is the run directory, so
    relative input paths are taken relative to where the job was launched.
    """
    if path is None:
        return None
    return Path(utils.to_absolute_path(str(path)))


def get_output_path(cfg):
    r"""Directory receiving the results of a command.

    Args:
        cfg (DictConfig): The composed configuration.

    Returns:
        Path: ``cfg.out`` when set, otherwise the current working directory
            (the run directory when launched through hydra).
    """
    out = cfg.get('out')
    path = to_absolute_path(out) if out else Path.cwd()
    path.mkdir(parents=True, exist_ok=True)
    return path
