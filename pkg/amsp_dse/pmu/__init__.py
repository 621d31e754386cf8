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

from .synth import MeasurementSeries
from .synth import SynthConfig
from .synth import add_phasor_noise
from .synth import decimate
from .synth import derive_noise_model
from .synth import synthesize

__all__ = ['MeasurementSeries', 'SynthConfig', 'add_phasor_noise', 'decimate',
           'derive_noise_model', 'synthesize']
