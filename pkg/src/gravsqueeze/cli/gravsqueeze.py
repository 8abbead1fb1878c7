# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze main CLI command."""

import logging
from typing import ClassVar

from pydantic_settings import (
    BaseSettings,
    CliApp,
    CliSubCommand,
    SettingsConfigDict,
)

from gravsqueeze.cli.compile import Compile
from gravsqueeze.cli.physics import Physics
from gravsqueeze.cli.sample import Sample
from gravsqueeze.cli.simulate import Simulate
from gravsqueeze.cli.verify import Verify

logger: logging.Logger = logging.getLogger(name=__name__)


class Gravsqueeze(BaseSettings):
    """Gravsqueeze - compile, simulate and analyse gravitational squeezing circuits."""

    model_config: ClassVar[SettingsConfigDict] = SettingsConfigDict(
        cli_parse_args=True,
        cli_kebab_case=True,
        env_prefix="GRAVSQUEEZE_",
        env_nested_delimiter="__",
    )

    compile: CliSubCommand[Compile]
    simulate: CliSubCommand[Simulate]
    sample: CliSubCommand[Sample]
    verify: CliSubCommand[Verify]
    physics: CliSubCommand[Physics]

    def cli_cmd(self) -> None:
        """Gravsqueeze CLI command.

        Run the selected sub-command.
        """
        _ = CliApp.run_subcommand(self)
