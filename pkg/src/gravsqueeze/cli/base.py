# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze cli base commands."""

import json
import logging
import logging.config
from pathlib import Path
from typing import Any, Literal

from pydantic import (
    AliasChoices,
    BaseModel,
    Field,
    FilePath,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    model_validator,
)

from gravsqueeze.constants import BACKENDS
from gravsqueeze.experiment import ExperimentConfig
from gravsqueeze.util import get_default_output_dir

logger = logging.getLogger(__name__)


class BaseCommand(BaseModel):
    """Base command model."""

    log_level: Literal[
        "CRITICAL",
        "FATAL",
        "ERROR",
        "WARN",
        "WARNING",
        "INFO",
        "DEBUG",
        "NOTSET",
    ] = "INFO"

    def configure_logging(self) -> None:
        """Configure logging for the CLI."""
        logging_config: dict[
            str,
            int
            | bool
            | dict[str, dict[str, str]]
            | dict[str, dict[str, str | list[str]]],
        ] = {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "simple": {
                    "format": "%(levelname)s: %(message)s",
                },
                "detailed": {
                    "format": "[%(levelname)s|%(module)s|L%(lineno)d] %(asctime)s: %(message)s",  # noqa: E501
                    "datefmt": "%Y-%m-%dT%H:%M:%S%z",
                },
            },
            "handlers": {
                "stdout": {
                    "class": "logging.StreamHandler",
                    "level": self.log_level,
                    "formatter": "simple",
                    "stream": "ext://sys.stdout",
                },
            },
            "loggers": {"root": {"level": "DEBUG", "handlers": ["stdout"]}},
        }
        logging.config.dictConfig(logging_config)


class ExperimentCommand(BaseCommand):
    """Base command, containing arguments shared by every pipeline command."""

    config: FilePath | None = Field(
        default=None,
        description="Flat JSON config file. Flags given on the command line win.",
    )
    epsilon: float | None = Field(
        default=None,
        description="Single evolution parameter eps = g*t",
        validation_alias=AliasChoices("epsilon", "e"),
    )
    sweep: str | None = Field(
        default=None,
        description="Log-spaced eps sweep as start:stop:points",
    )
    omega: PositiveFloat | None = Field(
        default=None,
        description="Mechanical angular frequency in Hz (physical mode)",
    )
    distance: PositiveFloat | None = Field(
        default=None,
        description="Separation of the oscillators in m (physical mode)",
    )
    time: NonNegativeFloat | None = Field(
        default=None,
        description="Evolution time in s (physical mode)",
    )
    backend: BACKENDS = Field(
        default="peephole",
        description="Compiler backend",
        validation_alias=AliasChoices("backend", "b"),
    )
    seed: NonNegativeInt = Field(default=0, description="Master random seed")
    workers: PositiveInt = Field(
        default=4,
        description="Sweep points compiled and simulated at once",
    )
    out: Path = Field(
        default_factory=get_default_output_dir,
        description="Run output directory",
        validation_alias=AliasChoices("out", "o"),
    )

    @model_validator(mode="before")
    @classmethod
    def merge_config_file(cls, data: Any) -> Any:  # noqa: ANN401
        """Fill in values from the --config file that were not given as flags."""
        if not isinstance(data, dict) or not data.get("config"):
            return data

        path = Path(data["config"])
        try:
            values = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            msg = f"Could not read config file '{path}': {e}"
            logger.exception(msg)
            raise ValueError(msg) from e

        if not isinstance(values, dict):
            msg = f"Config file '{path}' must hold a flat JSON object"
            logger.error(msg)
            raise ValueError(msg)  # noqa: TRY004
        return {**values, **data}

    def experiment_config(self, **overrides: Any) -> ExperimentConfig:  # noqa: ANN401
        """Resolve the flags into an experiment config."""
        return ExperimentConfig(
            epsilon=self.epsilon,
            sweep=self.sweep,
            omega_m=self.omega,
            d=self.distance,
            t=self.time,
            backend=self.backend,
            seed=self.seed,
            workers=self.workers,
            out=self.out,
            **overrides,
        )
