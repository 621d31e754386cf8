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

from .amsp import AmspConfig
from .amsp import EstimatorMode
from .amsp import amsp_update
from .belief import GaussianBelief
from .belief import NoiseModel
from .ekf import correct
from .ekf import init_belief
from .ekf import multi_step_predict
from .ekf import predict_substep
from .filter import FilterRun
from .filter import run_filter

__all__ = ['AmspConfig', 'EstimatorMode', 'GaussianBelief', 'NoiseModel', 'FilterRun',
           'amsp_update', 'correct', 'init_belief', 'multi_step_predict',
           'predict_substep', 'run_filter']
