# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze verify CLI and entry point tests."""

import os
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest
from pydantic_settings import CliApp

from gravsqueeze import (
    EXIT_CONFIG_ERROR,
    EXIT_DEGENERATE_POSTSELECTION,
    EXIT_VERIFICATION_FAILED,
    main,
)
from gravsqueeze.cli.gravsqueeze import Gravsqueeze
from gravsqueeze.errors import DegeneratePostSelectionError, VerificationFailedError
from gravsqueeze.experiment import CheckResult, VerificationReport

FAILING_REPORT = VerificationReport(
    checks=(
        CheckResult(name="commutation", passed=True),
        CheckResult(name="theory-state", passed=False, deviation=0.5),
    ),
)


def test_verify_passes(
    mock_env: os._Environ[str],
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Test that every check passes for the mapped Hamiltonian."""
    _ = CliApp().run(Gravsqueeze, cli_args=["verify", "--sweep", "0.5e-6:0.5:3"])
    out = capsys.readouterr().out
    assert "[PASS]" in out
    assert "[FAIL]" not in out
    assert "Max unitary deviation" in out


@patch("gravsqueeze.cli.verify.verify")
def test_verify_fails(
    mock_verify: MagicMock,
    mock_env: os._Environ[str],
) -> None:
    """Test that a failing report raises and names the failed check."""
    mock_verify.return_value = FAILING_REPORT
    with pytest.raises(VerificationFailedError, match="theory-state"):
        _ = CliApp().run(Gravsqueeze, cli_args=["verify"])


@patch("gravsqueeze.cli.verify.verify")
def test_main_verification_exit_code(
    mock_verify: MagicMock,
    mock_env: os._Environ[str],
) -> None:
    """Test the exit code of a failed verification."""
    mock_verify.return_value = FAILING_REPORT
    with (
        patch("sys.argv", ["gravsqueeze", "verify"]),
        pytest.raises(SystemExit) as exc_info,
    ):
        main()
    assert exc_info.value.code == EXIT_VERIFICATION_FAILED


def test_main_config_exit_code(mock_env: os._Environ[str]) -> None:
    """Test the exit code of an invalid configuration."""
    with (
        patch("sys.argv", ["gravsqueeze", "verify", "--backend", "qiskit"]),
        pytest.raises(SystemExit) as exc_info,
    ):
        main()
    assert exc_info.value.code == EXIT_CONFIG_ERROR


@patch("gravsqueeze.cli.sample.run_experiment")
def test_main_degenerate_exit_code(
    mock_run: MagicMock,
    mock_env: os._Environ[str],
    tmp_path: Path,
) -> None:
    """Test the exit code when post-selection keeps no shots."""
    mock_run.side_effect = DegeneratePostSelectionError("no shots kept")
    argv = ["gravsqueeze", "sample", "--epsilon", "0.1", "--out", str(tmp_path)]
    with patch("sys.argv", argv), pytest.raises(SystemExit) as exc_info:
        main()
    assert exc_info.value.code == EXIT_DEGENERATE_POSTSELECTION
