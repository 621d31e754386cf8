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

from .network import solve_stator_network
from .network import steady_state_init
from .simulate import ScenarioConfig
from .simulate import TruthTrajectory
from .simulate import simulate

__all__ = ['ScenarioConfig', 'TruthTrajectory', 'simulate',
           'solve_stator_network', 'steady_state_init']
