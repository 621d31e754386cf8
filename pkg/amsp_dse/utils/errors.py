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


class AmspDseError(Exception):
    r"""Base class of all errors raised by amsp_dse.

    Every error carries the process exit code used by the command line.
    """
    exit_code = 1


class ConfigError(AmspDseError, ValueError):
    r"""Invalid configuration, parameters or noise model."""
    exit_code = 2


class IngestionError(ConfigError):
    r"""A CSV file does not match its schema.

    Args:
        message (str): What is wrong.
        row (int, optional): 1-based data row of the offending value.
        column (str, optional): Name of the offending column.
    """

    def __init__(self, message, row=None, column=None):
        where = []
        if column is not None:
            where.append(f'column `{column}`')
        if row is not None:
            where.append(f'row {row}')
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class ScenarioError(AmspDseError):
    r"""The truth scenario cannot be built (degenerate network, infeasible point)."""
    exit_code = 3


class InstabilityError(ScenarioError):
    r"""The simulated machine lost synchronism."""


class NumericalError(AmspDseError):
    r"""A numerical failure inside the filter.

    Args:
        message (str): What failed.
        step (int, optional): Index of the measurement being processed.
    """
    exit_code = 4

    def __init__(self, message, step=None):
        if step is not None:
            message = f'step {step}: {message}'
        super().__init__(message)
        self.step = step


class InitializationError(NumericalError):
    r"""The initial state back-solve failed."""


class TrialError(AmspDseError):
    r"""A Monte-Carlo trial failed.

    Args:
        trial (int): Index of the failed trial.
        mode (str): Label of the estimator mode.
        detail (str): Message of the original error.
        exit_code (int, optional): Exit code of the original error.
    """

    def __init__(self, trial, mode, detail, exit_code=NumericalError.exit_code):
        super().__init__(f'trial {trial}, mode {mode}: {detail}')
        self.trial = trial
        self.mode = mode
        self.detail = detail
        self.exit_code = exit_code

    def __reduce__(self):
        return self.__class__, (self.trial, self.mode, self.detail, self.exit_code)
