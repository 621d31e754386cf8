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

from .machine import DqPair
from .machine import MachineModel
from .machine import MachineParams
from .machine import STATE_NAMES, INPUT_NAMES, MEASUREMENT_NAMES
from .nonlinearity import NonlinearityIndexes

__all__ = ['DqPair', 'MachineModel', 'MachineParams', 'NonlinearityIndexes',
           'STATE_NAMES', 'INPUT_NAMES', 'MEASUREMENT_NAMES']
