# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze CLI.

Compiles the truncated gravitational double squeezing Hamiltonian into qubit
circuits, simulates them and runs the noisy measurement pipeline. For usage, install
the program with uv, pipx or similar and run `gravsqueeze --help`
"""

import logging
import sys

from pydantic import ValidationError
from pydantic_settings import CliApp, SettingsError

from gravsqueeze.cli.gravsqueeze import Gravsqueeze
from gravsqueeze.errors import DegeneratePostSelectionError, VerificationFailedError

logger = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 2
EXIT_VERIFICATION_FAILED = 3
EXIT_DEGENERATE_POSTSELECTION = 4


def main() -> None:
    """Main entry point for the CLI."""
    try:
        _ = CliApp.run(Gravsqueeze)
    except (ValidationError, SettingsError) as e:
        logger.error("Invalid configuration: %s", e)  # noqa: TRY400
        sys.exit(EXIT_CONFIG_ERROR)
    except VerificationFailedError:
        sys.exit(EXIT_VERIFICATION_FAILED)
    except DegeneratePostSelectionError:
        sys.exit(EXIT_DEGENERATE_POSTSELECTION)


if __name__ == "__main__":
    main()
