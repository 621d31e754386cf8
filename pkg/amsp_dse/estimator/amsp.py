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

r"""Adaptive multi-step prediction (AMSP) controller and estimator modes."""

from dataclasses import dataclass, field

from ..utils.errors import ConfigError

Q_SUBSTEP_MODES = ('paper', 'scaled')
MODES = ('ekf', 'cmsp', 'amsp')


def _q_substep_mode(value):
    if value not in Q_SUBSTEP_MODES:
        raise ConfigError(f'q_substep_mode `{value}` is not one of {Q_SUBSTEP_MODES}')
    return value


@dataclass(frozen=True)
class AmspConfig:
    r"""Thresholds and limits of the adaptive controller.

    Args:
        U (float, optional): Upper threshold. Defaults to 0.3.
        L (float, optional): Lower threshold. Defaults to 0.005.
        M_max (int, optional): Largest prediction factor. Defaults to 5.
        M_init (int, optional): Factor used for the first interval. Defaults to 0.
        q_substep_mode (str, optional): ``paper`` adds the whole ``Q`` at every
            sub-step, ``scaled`` adds ``Q / 2**M_p``. Defaults to ``paper``.
    """
    U: float = 0.3
    L: float = 0.005
    M_max: int = 5
    M_init: int = 0
    q_substep_mode: str = 'paper'

    def __post_init__(self):
        if not 0 < self.L < self.U:
            raise ConfigError(f'thresholds must satisfy 0 < L < U, got L={self.L}, U={self.U}')
        if not 0 <= self.M_init <= self.M_max:
            raise ConfigError(f'need 0 <= M_init <= M_max, got {self.M_init}, {self.M_max}')
        object.__setattr__(self, 'q_substep_mode', _q_substep_mode(self.q_substep_mode))


def amsp_update(m_p, idx, cfg):
    r"""Next prediction factor given the latest nonlinearity indexes.

    One index above ``U`` raises the factor by one, both below ``L`` lower it
    by one, otherwise it is kept. The result is clamped to ``[0, M_max]``.

    Args:
        m_p (int): Current factor.
        idx (NonlinearityIndexes): Latest indexes.
        cfg (AmspConfig): Thresholds.

    Returns:
        int: The new factor.
    """
    if idx.n_phi > cfg.U or idx.n_h > cfg.U:
        return min(m_p + 1, cfg.M_max)
    if idx.n_phi < cfg.L and idx.n_h < cfg.L:
        return max(m_p - 1, 0)
    return m_p


@dataclass(frozen=True)
class EstimatorMode:
    r"""How the prediction factor is chosen during a run.

    Args:
        kind (str): ``ekf`` (always 0), ``cmsp`` (constant ``m_fixed``) or
            ``amsp`` (adapted by :func:`amsp_update`).
        m_fixed (int, optional): Constant factor of ``cmsp``. Defaults to 0.
        amsp (AmspConfig, optional): Controller settings; its ``q_substep_mode``
            is used by every kind.
    """
    kind: str
    m_fixed: int = 0
    amsp: AmspConfig = field(default_factory=AmspConfig)

    def __post_init__(self):
        if self.kind not in MODES:
            raise ConfigError(f'mode `{self.kind}` is not one of {MODES}')
        if self.m_fixed < 0:
            raise ConfigError('the constant prediction factor must be non-negative')

    @property
    def label(self):
        if self.kind == 'cmsp':
            return f'cmsp{self.m_fixed}'
        return self.kind

    @property
    def q_substep_mode(self):
        return self.amsp.q_substep_mode

    def initial_factor(self):
        return {'ekf': 0, 'cmsp': self.m_fixed, 'amsp': self.amsp.M_init}[self.kind]

    def next_factor(self, m_p, idx):
        if self.kind == 'amsp':
            return amsp_update(m_p, idx, self.amsp)
        return self.initial_factor()
