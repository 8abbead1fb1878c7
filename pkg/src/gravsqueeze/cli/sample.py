# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze sample CLI command."""

import logging

from pydantic import Field, PositiveInt
from pydantic_settings import CliImplicitFlag

from gravsqueeze.cli.base import ExperimentCommand
from gravsqueeze.constants import (
    GATE_ERROR_RATE_1Q,
    GATE_ERROR_RATE_2Q,
    READOUT_ERROR_RATE,
)
from gravsqueeze.experiment import run_experiment, write_bundle

logger = logging.getLogger(__name__)


class Sample(ExperimentCommand):
    """Run the noisy pipeline: sample, mitigate, post-select and estimate P0."""

    shots: PositiveInt = Field(default=100_000, description="Shots per eps")
    trajectories: PositiveInt = Field(
        default=2048,
        description="Gate-noise trajectories per eps",
    )
    readout_error: float = Field(
        default=READOUT_ERROR_RATE,
        description="Readout assignment error per qubit",
    )
    gate_error_1q: float = Field(
        default=GATE_ERROR_RATE_1Q,
        description="Depolarizing probability per single-qubit gate",
    )
    gate_error_2q: float = Field(
        default=GATE_ERROR_RATE_2Q,
        description="Depolarizing probability per CNOT",
    )
    mitigate: CliImplicitFlag[bool] = Field(
        default=True,
        description="Invert the readout calibration matrices",
    )
    postselect: CliImplicitFlag[bool] = Field(
        default=True,
        description="Keep only the ground and pair codewords",
    )
    postselect_first: CliImplicitFlag[bool] = Field(
        default=False,
        description="Post-select before mitigating",
    )

    def cli_cmd(self) -> None:
        """Sample every eps with noise."""
        self.configure_logging()
        config = self.experiment_config(
            sampling=True,
            shots=self.shots,
            trajectories=self.trajectories,
            readout_error=self.readout_error,
            gate_error_1q=self.gate_error_1q,
            gate_error_2q=self.gate_error_2q,
            mitigate=self.mitigate,
            postselect=self.postselect,
            postselect_first=self.postselect_first,
        )
        result = run_experiment(config)
        for record in result.records:
            logger.info(
                "eps=%.6e P0=%.6f +- %.6f (exact %.6f), discarded %s",
                record.epsilon,
                record.p0_estimate,
                record.p0_stderr,
                record.p0_exact,
                record.discard_fraction,
            )
        _ = write_bundle(result)
