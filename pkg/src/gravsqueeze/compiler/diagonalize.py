# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Simultaneous diagonalization of commuting Pauli strings.

Gaussian elimination on the symplectic rows finds a Clifford V with V·P_i·V†
diagonal for every term. Then exp(iεH) = V†·exp(iε·Σ c_i D_i)·V, and the diagonal
layer is a product of CNOT-ladder phase rotations ordered along a Gray code so that
neighbouring ladders cancel in the peephole pass.
"""

from __future__ import annotations

import logging
import math
from typing import ClassVar

from pydantic import BaseModel, ConfigDict

from gravsqueeze.compiler.circuit import Circuit, Gate, GateCounts, GateKind
from gravsqueeze.compiler.decompose import (
    check_pairwise_commuting,
    compile_z_rotation,
    term_angles,
)
from gravsqueeze.compiler.peephole import peephole_optimize
from gravsqueeze.pauli import PauliString, PauliSum, clifford_image

logger = logging.getLogger(__name__)


def _single(qubit: int, n: int, label: str, phase: int = 0) -> PauliString:
    return PauliString.from_factors({qubit: label}, n, phase=phase)


def gate_images(gate: Gate, n: int) -> dict[int, tuple[PauliString, PauliString]]:
    """Images of X_q and Z_q under conjugation G·P·G† for the Clifford gates."""
    q = gate.target
    match gate.kind:
        case GateKind.S:
            return {q: (_single(q, n, "Y"), _single(q, n, "Z"))}
        case GateKind.S_DAGGER:
            return {q: (_single(q, n, "Y", phase=2), _single(q, n, "Z"))}
        case GateKind.SQRT_X:
            return {q: (_single(q, n, "X"), _single(q, n, "Y", phase=2))}
        case GateKind.X:
            return {q: (_single(q, n, "X"), _single(q, n, "Z", phase=2))}
        case GateKind.CNOT if gate.control is not None:
            c = gate.control
            return {
                c: (
                    PauliString.from_factors({c: "X", q: "X"}, n),
                    _single(c, n, "Z"),
                ),
                q: (
                    _single(q, n, "X"),
                    PauliString.from_factors({c: "Z", q: "Z"}, n),
                ),
            }
    msg = f"Gate {gate} is not a Clifford gate with a known Pauli image"
    raise ValueError(msg)


def hadamard(qubit: int) -> tuple[list[Gate], float]:
    """H = e^{-iπ/4}·S·√X·S."""
    return [Gate.s(qubit), Gate.sqrt_x(qubit), Gate.s(qubit)], -math.pi / 4


def gray_rank(mask: int) -> int:
    """Position of `mask` in the binary reflected Gray code sequence."""
    rank = mask
    while mask:
        mask >>= 1
        rank ^= mask
    return rank


class DiagonalizationReport(BaseModel):
    """What the elimination produced, for logs and verification."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    original: tuple[str, ...]
    diagonalized: tuple[str, ...]
    all_diagonal: bool
    prefix_counts: GateCounts


class DiagonalizedSum(BaseModel):
    """Clifford prefix V with the rotation layer it leaves behind."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    prefix: Circuit
    rotations: tuple[tuple[int, float], ...]
    report: DiagonalizationReport


def diagonalize_commuting_set(h: PauliSum) -> DiagonalizedSum:
    """Find a Clifford prefix that maps every term of `h` to a Z-type string.

    The rotation layer lists (z_mask, coefficient) pairs in Gray-code order, with
    the sign picked up under conjugation folded into the coefficient.

    Raises:
        NonCommutingError: If two terms anticommute.
    """
    check_pairwise_commuting(h)
    coefficients = [theta for _, theta in term_angles(h, 1.0)]
    n = h.n_qubits
    rows = list(h.strings)
    gates: list[Gate] = []
    phase = 0.0

    def apply(new_gates: list[Gate]) -> None:
        for gate in new_gates:
            images = gate_images(gate, n)
            rows[:] = [clifford_image(row, images) for row in rows]
            gates.append(gate)

    while True:
        index = next((i for i, row in enumerate(rows) if not row.is_diagonal), None)
        if index is None:
            break
        pending = rows[index]
        pivot = (pending.x_mask & -pending.x_mask).bit_length() - 1
        apply(
            [
                Gate.cnot(pivot, q)
                for q in range(n)
                if q != pivot and (pending.x_mask >> q) & 1
            ],
        )
        # the pivot row now has X or Y on the pivot only; S† turns Y into X
        if rows[index].factor(pivot) == "Y":
            apply([Gate.s_dagger(pivot)])
        h_gates, delta = hadamard(pivot)
        apply(h_gates)
        phase += delta

    prefix = Circuit.from_gates(n, gates, phase)
    rotations = sorted(
        (
            (row.z_mask, coefficient * (1 if row.phase == 0 else -1))
            for row, coefficient in zip(rows, coefficients)
        ),
        key=lambda item: gray_rank(item[0]),
    )
    report = DiagonalizationReport(
        original=tuple(s.label() for s in h.strings),
        diagonalized=tuple(row.label() for row in rows),
        all_diagonal=all(row.is_diagonal for row in rows),
        prefix_counts=prefix.counts(),
    )
    logger.debug(
        "Diagonalized %d terms: %s",
        len(rows),
        ", ".join(report.diagonalized),
    )
    return DiagonalizedSum(prefix=prefix, rotations=tuple(rotations), report=report)


def compile_diagonalized_unitary(result: DiagonalizedSum, eps: float) -> Circuit:
    """Compile V†·exp(iε·Σ c_i D_i)·V and run the peephole pass over it."""
    n = result.prefix.n_qubits
    circuit = result.prefix
    for z_mask, coefficient in result.rotations:
        if z_mask == 0:
            circuit = circuit.with_phase(eps * coefficient)
            continue
        circuit += compile_z_rotation(z_mask, eps * coefficient, n)
    circuit += result.prefix.inverse()
    return peephole_optimize(circuit)


def compile_via_diagonalization(h: PauliSum, eps: float) -> Circuit:
    """Diagonalize `h` and compile exp(iε·H) from the result."""
    return compile_diagonalized_unitary(diagonalize_commuting_set(h), eps)
