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

from abc import ABC, abstractmethod
from pathlib import Path

from ..utils.helper import ProgressMeter, write_to_json_file


class Runner(ABC):
    r"""Runner is the base class of the command runners.

    You can adapt this class for your own command by reimplementing
    :meth:`run`.

    Args:
        conf (Configuration): Domain objects built from the configuration.
        output_path (str or Path): Directory receiving the results.
        num_steps (int, optional): Length of the monitored loop. Defaults to 1.
    """

    def __init__(self, conf, output_path, num_steps=1):
        self.conf = conf
        self.output_path = Path(output_path)
        self.output_path.mkdir(parents=True, exist_ok=True)
        args = conf.args
        self.monitor = ProgressMeter(num_steps, str(self.output_path),
                                     quiet=args['quiet'], tensorboard=args['tensorboard'])

    @abstractmethod
    def run(self):
        r"""Runs the command and returns what it wrote."""
        pass

    def callback_on_start(self):
        r"""Saves the resolved configuration next to the results."""
        write_to_json_file(self.conf.tree, str(self.output_path / 'config.json'))

    def callback_on_finish(self):
        r"""Closes the monitor."""
        self.monitor.close()

    def __call__(self):
        self.callback_on_start()
        try:
            return self.run()
        finally:
            self.callback_on_finish()
