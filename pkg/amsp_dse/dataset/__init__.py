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

from .records import ingest_trajectory
from .records import read_columns
from .records import read_measurements
from .records import read_rows
from .records import write_estimates
from .records import write_measurements
from .records import write_rows
from .records import write_traces
from .records import write_trajectory
from .report import pivot_mmse
from .report import read_mmse
from .report import write_report
from .report import write_table

__all__ = ['ingest_trajectory', 'read_columns', 'read_measurements', 'read_rows',
           'write_estimates', 'write_measurements', 'write_rows', 'write_traces',
           'write_trajectory', 'pivot_mmse', 'read_mmse', 'write_report', 'write_table']
