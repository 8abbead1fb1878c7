# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze verify CLI command."""

import logging

from gravsqueeze.cli.base import ExperimentCommand
from gravsqueeze.errors import VerificationFailedError
from gravsqueeze.experiment import verify

logger = logging.getLogger(__name__)


class Verify(ExperimentCommand):
    """Run the invariant suite and report every check."""

    def cli_cmd(self) -> None:
        """Log the report, raising if any check failed."""
        self.configure_logging()
        report = verify(self.experiment_config())
        for line in report.lines():
            logger.info(line)
        logger.info("Max unitary deviation: %.3e", report.max_unitary_deviation)

        if not report.passed:
            failed = [check.name for check in report.checks if not check.passed]
            msg = f"{len(failed)} checks failed: {', '.join(failed)}"
            logger.error(msg)
            raise VerificationFailedError(msg)
