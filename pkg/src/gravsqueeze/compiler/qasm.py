# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""OpenQASM 2.0 export and the matching reader.

Angles are written with `repr`, so parsing an exported program gives back the exact
gate list. A nonzero global phase is kept in a comment line.
"""

from __future__ import annotations

import logging
import re

from gravsqueeze.compiler.circuit import PARAMETRIC_KINDS, Circuit, Gate, GateKind

logger = logging.getLogger(__name__)

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";'
PHASE_COMMENT = "// global phase: "

_QREG = re.compile(r"^qreg\s+q\[(\d+)\];$")
_GATE = re.compile(
    r"^(?P<name>[a-z0-9]+)(?:\((?P<angle>[^)]*)\))?\s+"
    r"q\[(?P<first>\d+)\](?:\s*,\s*q\[(?P<second>\d+)\])?;$",
)


def _gate_line(gate: Gate) -> str:
    angle = f"({gate.angle!r})" if gate.kind in PARAMETRIC_KINDS else ""
    if gate.control is not None:
        return f"{gate.kind.value}{angle} q[{gate.control}],q[{gate.target}];"
    return f"{gate.kind.value}{angle} q[{gate.target}];"


def export_qasm(circuit: Circuit) -> str:
    """Render a circuit as an OpenQASM 2.0 program."""
    lines = [HEADER, f"qreg q[{circuit.n_qubits}];"]
    if circuit.global_phase != 0:
        lines.append(f"{PHASE_COMMENT}{circuit.global_phase!r}")
    lines.extend(_gate_line(gate) for gate in circuit.gates)
    return "\n".join(lines) + "\n"


def parse_qasm(text: str) -> Circuit:
    """Read a program written by `export_qasm` back into a circuit.

    Raises:
        ValueError: On any line outside the exported subset.
    """
    n_qubits: int | None = None
    phase = 0.0
    gates: list[Gate] = []
    kinds = {kind.value: kind for kind in GateKind}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line in HEADER.splitlines():
            continue
        if line.startswith(PHASE_COMMENT):
            phase = float(line.removeprefix(PHASE_COMMENT))
            continue
        if line.startswith("//"):
            continue
        if match := _QREG.match(line):
            n_qubits = int(match.group(1))
            continue

        match = _GATE.match(line)
        if match is None or match["name"] not in kinds:
            msg = f"Line {number}: cannot parse '{line}'"
            logger.error(msg)
            raise ValueError(msg)
        kind = kinds[match["name"]]
        first = int(match["first"])
        angle = float(match["angle"]) if match["angle"] is not None else None
        if match["second"] is not None:
            gates.append(Gate(kind=kind, control=first, target=int(match["second"])))
        else:
            gates.append(Gate(kind=kind, target=first, angle=angle))

    if n_qubits is None:
        msg = "Program declares no qreg"
        logger.error(msg)
        raise ValueError(msg)
    return Circuit(n_qubits=n_qubits, gates=tuple(gates), global_phase=phase)
