# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Commutation-aware peephole optimization.

Each gate looks forward for a partner it can cancel or merge with, passing over any
gate it commutes with. Commutation is decided per shared qubit from the axis a gate
acts along: diagonal gates and CNOT controls act along Z, X rotations and CNOT
targets along X. Two gates commute when they agree on every qubit they share.

Rules, applied until nothing changes:

    CNOT·CNOT, X·X, S·S†        -> nothing
    Z family (U1, RZ, S, S†)    -> one U1 (S or S† at ±π/2, dropped at 0)
    X family (X, √X, RX)        -> one RX (X at π, √X at π/2, dropped at 0 or 2π)

The merged gate takes the partner's place. Gate counts never grow and the unitary,
global phase included, is preserved.
"""

from __future__ import annotations

import logging
import math

from gravsqueeze.compiler.circuit import (
    DIAGONAL_KINDS,
    X_AXIS_KINDS,
    Circuit,
    Gate,
    GateKind,
)

logger = logging.getLogger(__name__)

ANGLE_ATOL = 1e-12

Merge = tuple[list[Gate], float]


def _axes(gate: Gate) -> dict[int, str]:
    if gate.kind is GateKind.CNOT and gate.control is not None:
        return {gate.control: "z", gate.target: "x"}
    if gate.kind in DIAGONAL_KINDS:
        return {gate.target: "z"}
    return {gate.target: "x"}


def gates_commute(a: Gate, b: Gate) -> bool:
    """True if a and b act along the same axis on every shared qubit."""
    axes_a, axes_b = _axes(a), _axes(b)
    return all(axes_a[q] == axes_b[q] for q in axes_a.keys() & axes_b.keys())


def _near(value: float, target: float) -> bool:
    return math.isclose(value, target, abs_tol=ANGLE_ATOL)


def _as_u1(gate: Gate) -> tuple[float, float]:
    """(λ, phase) with gate = e^{i·phase}·U1(λ)."""
    match gate.kind:
        case GateKind.S:
            return math.pi / 2, 0.0
        case GateKind.S_DAGGER:
            return -math.pi / 2, 0.0
        case GateKind.RZ:
            angle = gate.angle or 0.0
            return angle, -angle / 2
        case _:
            return gate.angle or 0.0, 0.0


def _as_rx(gate: Gate) -> tuple[float, float]:
    """(θ, phase) with gate = e^{i·phase}·RX(θ)."""
    match gate.kind:
        case GateKind.X:
            return math.pi, math.pi / 2
        case GateKind.SQRT_X:
            return math.pi / 2, math.pi / 4
        case _:
            return gate.angle or 0.0, 0.0


def _merge_diagonal(a: Gate, b: Gate) -> Merge:
    qubit = a.target
    if a.kind is GateKind.RZ and b.kind is GateKind.RZ:
        # RZ has period 4π
        angle = math.remainder((a.angle or 0.0) + (b.angle or 0.0), 4 * math.pi)
        if _near(angle, 0.0):
            return [], 0.0
        return [Gate.rz(qubit, angle)], 0.0

    lam_a, phase_a = _as_u1(a)
    lam_b, phase_b = _as_u1(b)
    lam = math.remainder(lam_a + lam_b, 2 * math.pi)
    phase = phase_a + phase_b
    if _near(lam, 0.0):
        return [], phase
    if _near(lam, math.pi / 2):
        return [Gate.s(qubit)], phase
    if _near(lam, -math.pi / 2):
        return [Gate.s_dagger(qubit)], phase
    return [Gate.u1(qubit, lam)], phase


def _merge_x_axis(a: Gate, b: Gate) -> Merge:
    qubit = a.target
    theta_a, phase_a = _as_rx(a)
    theta_b, phase_b = _as_rx(b)
    theta = math.remainder(theta_a + theta_b, 4 * math.pi)
    phase = phase_a + phase_b
    if _near(theta, 0.0):
        return [], phase
    # RX(±2π) = -1
    if _near(abs(theta), 2 * math.pi):
        return [], phase + math.pi
    if _near(theta, math.pi):
        return [Gate.x(qubit)], phase - math.pi / 2
    if _near(theta, math.pi / 2):
        return [Gate.sqrt_x(qubit)], phase - math.pi / 4
    return [Gate.rx(qubit, theta)], phase


def combine(a: Gate, b: Gate) -> Merge | None:
    """Cancel or merge a with b, or None if no rule applies."""
    if a.kind is GateKind.CNOT or b.kind is GateKind.CNOT:
        if a == b:
            return [], 0.0
        return None
    if a.target != b.target:
        return None
    if a.kind in DIAGONAL_KINDS and b.kind in DIAGONAL_KINDS:
        return _merge_diagonal(a, b)
    if a.kind in X_AXIS_KINDS and b.kind in X_AXIS_KINDS:
        return _merge_x_axis(a, b)
    return None


def _find_partner(gates: list[Gate], start: int) -> tuple[int, Merge] | None:
    gate = gates[start]
    qubits = set(gate.qubits)
    for position in range(start + 1, len(gates)):
        other = gates[position]
        if qubits.isdisjoint(other.qubits):
            continue
        merged = combine(gate, other)
        if merged is not None:
            return position, merged
        if not gates_commute(gate, other):
            return None
    return None


def peephole_optimize(circuit: Circuit) -> Circuit:
    """Cancel and merge gates to a fixpoint."""
    gates = list(circuit.gates)
    phase = circuit.global_phase
    changed = True
    while changed:
        changed = False
        position = 0
        while position < len(gates):
            found = _find_partner(gates, position)
            if found is None:
                position += 1
                continue
            partner, (replacement, delta) = found
            gates[partner : partner + 1] = replacement
            del gates[position]
            phase += delta
            changed = True

    optimized = Circuit.from_gates(circuit.n_qubits, gates, phase)
    before, after = circuit.counts(), optimized.counts()
    logger.debug(
        "Peephole: CNOTs %d -> %d, single-qubit gates %d -> %d",
        before.cnot,
        after.cnot,
        before.single_qubit,
        after.single_qubit,
    )
    return optimized
