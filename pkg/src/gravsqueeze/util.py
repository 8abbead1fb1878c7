# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze utilities.

Bit ordering is bridged here and nowhere else. Internally, bit k of a basis index is
qubit k (qubit 0 least significant). Rendered bitstrings put qubit 0 leftmost, so the
ground state of two modes reads "011011".
"""

from pathlib import Path

from gravsqueeze.constants import OUTPUT_DIR_NAME


def index_to_bitstring(index: int, n_qubits: int) -> str:
    """Render a basis index as a bitstring with qubit 0 leftmost."""
    return "".join("1" if (index >> k) & 1 else "0" for k in range(n_qubits))


def bitstring_to_index(bits: str) -> int:
    """Convert a qubit-0-leftmost bitstring to a basis index."""
    if any(c not in "01" for c in bits):
        msg = f"Bitstring '{bits}' may only contain the characters 0 and 1"
        raise ValueError(msg)
    return sum(1 << k for k, c in enumerate(bits) if c == "1")


def get_run_dir(root: Path) -> Path:
    """Get the run output dir, creating it if it doesn't exist."""
    if not root.exists():
        root.mkdir(parents=True)
    return root


def get_default_output_dir() -> Path:
    """Get the default run output dir below the current working directory."""
    return Path.cwd() / OUTPUT_DIR_NAME
