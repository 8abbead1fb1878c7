# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze simulate CLI command."""

import logging

from gravsqueeze.cli.base import ExperimentCommand
from gravsqueeze.experiment import run_experiment, write_bundle

logger = logging.getLogger(__name__)


class Simulate(ExperimentCommand):
    """Run a noiseless eps sweep and write the result bundle."""

    def cli_cmd(self) -> None:
        """Simulate every eps exactly."""
        self.configure_logging()
        result = run_experiment(self.experiment_config(sampling=False))
        for record in result.records:
            logger.info(
                "eps=%.6e P0=%.12f concurrence=%.6e fidelity=%.12f",
                record.epsilon,
                record.p0_exact,
                record.concurrence,
                record.reference_fidelity,
            )
        _ = write_bundle(result)
