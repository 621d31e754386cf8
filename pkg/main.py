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

import sys

import hydra
from omegaconf import DictConfig


@hydra.main(config_path="amsp_dse/conf", config_name="config", version_base="1.1")
def app(cfg: DictConfig) -> None:
    sys.path.append('.')
    from amsp_dse.utils.cli.cli import main
    code = main(cfg)
    if code:
        sys.exit(code)


if __name__ == "__main__":
    app()
