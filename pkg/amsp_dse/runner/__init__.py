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

from .comparer import Comparer
from .comparer import MonteCarlo
from .filtering import Estimator
from .montecarlo import McConfig
from .montecarlo import McReport
from .montecarlo import run_mc
from .simulator import Simulator
from .simulator import Synthesizer

# command name to runner class
RUNNERS = {
    'simulate': 'Simulator',
    'synth': 'Synthesizer',
    'estimate': 'Estimator',
    'mc': 'MonteCarlo',
    'compare': 'Comparer',
}

__all__ = ['Comparer', 'Estimator', 'McConfig', 'McReport', 'MonteCarlo', 'RUNNERS',
           'Simulator', 'Synthesizer', 'run_mc']
