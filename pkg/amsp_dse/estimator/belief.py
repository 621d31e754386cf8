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

from dataclasses import dataclass

import numpy as np

from ..utils.errors import ConfigError


def symmetrize(cov):
    r"""Returns ``(cov + cov^T) / 2``."""
    return 0.5 * (cov + cov.T)


@dataclass(frozen=True)
class GaussianBelief:
    r"""Mean and covariance of the state estimate."""
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'mean', np.asarray(self.mean, dtype=float))
        object.__setattr__(self, 'cov', np.asarray(self.cov, dtype=float))

    @property
    def std(self):
        return np.sqrt(np.clip(np.diag(self.cov), 0.0, None))


@dataclass(frozen=True)
class NoiseModel:
    r"""Process (``Q``) and measurement (``R``) noise covariances.

    Raises:
        ConfigError: If a diagonal entry is not strictly positive.
    """
    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        for name in ('Q', 'R'):
            value = np.atleast_2d(np.asarray(getattr(self, name), dtype=float))
            if value.shape[0] != value.shape[1]:
                raise ConfigError(f'{name} must be square, got shape {value.shape}')
            if not np.all(np.isfinite(value)) or np.any(np.diag(value) <= 0):
                raise ConfigError(f'{name} must have a finite, strictly positive diagonal')
            if not np.allclose(value, value.T):
                raise ConfigError(f'{name} must be symmetric')
            object.__setattr__(self, name, value)
