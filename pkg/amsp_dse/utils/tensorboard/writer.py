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

import time

from tensorboard.compat.proto.event_pb2 import Event
from tensorboard.compat.proto.summary_pb2 import Summary
from tensorboard.summary.writer.event_file_writer import EventFileWriter


class SummaryWriter(object):
    r"""Writes scalar summaries of estimator runs to a tensorboard event file.

    Args:
        log_dir (str): Directory where the event file is written.
        max_queue (int, optional): Size of the queue for pending events before
            one of the 'add' calls forces a flush to disk. Defaults to 10.
        flush_secs (int, optional): How often, in seconds, to flush pending
            events to disk. Defaults to 120.
        filename_suffix (str, optional): Suffix added to event filenames.
    """

    def __init__(self, log_dir, max_queue=10, flush_secs=120, filename_suffix=''):
        self.log_dir = str(log_dir)
        self.max_queue = max_queue
        self.flush_secs = flush_secs
        self.filename_suffix = filename_suffix
        self.event_writer = None

    def _get_event_writer(self):
        """Returns the event writer, recreating it if closed."""
        if self.event_writer is None:
            self.event_writer = EventFileWriter(
                self.log_dir, self.max_queue, self.flush_secs, self.filename_suffix)
        return self.event_writer

    def add_scalar(self, tag, scalar_value, global_step=None, walltime=None):
        r"""Adds a scalar value.

        Args:
            tag (str): Name of the scalar, e.g. ``amsp/M_p``.
            scalar_value (float): The value.
            global_step (int, optional): Step recorded with the value.
            walltime (float, optional): Overrides the event time.
        """
        summary = Summary(value=[Summary.Value(tag=tag, simple_value=float(scalar_value))])
        event = Event(summary=summary)
        event.wall_time = time.time() if walltime is None else walltime
        if global_step is not None:
            event.step = int(global_step)
        self._get_event_writer().add_event(event)

    def add_scalars(self, main_tag, values, global_step=None, walltime=None):
        r"""Adds several scalars sharing a prefix, one tag per key of ``values``."""
        for name, value in values.items():
            self.add_scalar(f'{main_tag}/{name}', value, global_step, walltime)

    def flush(self):
        r"""Flushes pending events to disk."""
        if self.event_writer is not None:
            self.event_writer.flush()

    def close(self):
        r"""Flushes and closes the event file."""
        if self.event_writer is None:
            return
        self.event_writer.close()
        self.event_writer = None
