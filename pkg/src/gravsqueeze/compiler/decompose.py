# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Lower Pauli exponentials exp(iθP) into the fixed gate set.

A weight-w string P with anchor a (its lowest support qubit) is rotated onto Z_a by
the chain

    U = e^{iπ/4 X_a} · Π_j e^{iπ/4 Z_a X_j}

over the remaining support qubits j, plus single-qubit quarter turns W that turn the
chain's X/Y factors into P's factors. Then exp(iθP) = W†U†·exp(iθsZ_a)·U W with a
sign s fixed by Pauli algebra. Each ZX factor becomes one CNOT through

    e^{iπ/4 Z_c X_t} = e^{iπ/4 X_t} · e^{iπ/4 Z_c} · e^{-iπ/4} · CNOT(c, t)

and the finished per-term circuit goes through the peephole pass, which collapses
the S† chain left on the anchor.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence

from gravsqueeze.bosonmap import BosonQubitMap
from gravsqueeze.compiler.circuit import Circuit, Gate
from gravsqueeze.compiler.peephole import peephole_optimize
from gravsqueeze.errors import DimensionError, NonCommutingError, NonHermitianError
from gravsqueeze.pauli import (
    PauliString,
    PauliSum,
    commutes,
    conjugate_by_quarter_turn,
)

logger = logging.getLogger(__name__)

QUARTER_TURN = math.pi / 4

# Third Pauli on a qubit, used to rotate one factor into another
_ROTATION_AXIS = {
    frozenset("XY"): "Z",
    frozenset("XZ"): "Y",
    frozenset("YZ"): "X",
}


def quarter_turn(axis: str, qubit: int, sign: int = 1) -> tuple[list[Gate], float]:
    """Gates and phase realizing e^{±iπ/4 σ} for σ in {X, Y, Z} on one qubit."""
    match axis, sign > 0:
        case "X", True:
            return [Gate.rx(qubit, -math.pi / 2)], 0.0
        case "X", False:
            return [Gate.rx(qubit, math.pi / 2)], 0.0
        case "Z", True:
            return [Gate.s_dagger(qubit)], QUARTER_TURN
        case "Z", False:
            return [Gate.s(qubit)], -QUARTER_TURN
        # Y = S·X·S†
        case "Y", True:
            return [
                Gate.s_dagger(qubit),
                Gate.rx(qubit, -math.pi / 2),
                Gate.s(qubit),
            ], 0.0
        case "Y", False:
            return [
                Gate.s_dagger(qubit),
                Gate.rx(qubit, math.pi / 2),
                Gate.s(qubit),
            ], 0.0
    msg = f"Unknown rotation axis '{axis}'"
    raise ValueError(msg)


def z_rotation(qubit: int, theta: float) -> tuple[list[Gate], float]:
    """e^{iθZ} = e^{iθ}·U1(-2θ)."""
    return [Gate.u1(qubit, -2 * theta)], theta


def decompose_zx(control: int, target: int, n_qubits: int | None = None) -> Circuit:
    """Circuit for e^{iπ/4 Z_control X_target} with exactly one CNOT.

    The sequence is three gates long, CNOT, S† on the control and RX(-π/2) on the
    target, with no extra global phase: the e^{-iπ/4} of the CNOT form cancels
    against the phase of the S†, so no separate phase gate is needed.

    Raises:
        DimensionError: If control and target coincide.
    """
    if control == target:
        msg = f"ZX rotation needs two distinct qubits, got {control} twice"
        logger.error(msg)
        raise DimensionError(msg)

    width = n_qubits if n_qubits is not None else max(control, target) + 1
    # CNOT carries e^{-iπ/4}; the S† realizing e^{iπ/4 Z} returns it
    gates = [
        Gate.cnot(control, target),
        Gate.s_dagger(control),
        Gate.rx(target, -math.pi / 2),
    ]
    return Circuit.from_gates(width, gates, 0.0)


def compile_z_rotation(z_mask: int, theta: float, n_qubits: int) -> Circuit:
    """exp(iθ·Z_S) for the Z-type string with support mask `z_mask`.

    The parity of the support is gathered onto its lowest qubit by a CNOT ladder,
    rotated there and uncomputed.
    """
    support = [q for q in range(n_qubits) if (z_mask >> q) & 1]
    if not support:
        msg = "Z rotation needs a non-empty support"
        raise ValueError(msg)

    anchor, *others = support
    ladder = [Gate.cnot(q, anchor) for q in others]
    rotation, phase = z_rotation(anchor, theta)
    return Circuit.from_gates(n_qubits, [*ladder, *rotation, *reversed(ladder)], phase)


def _chain_image(anchor: int, targets: Sequence[int], n_qubits: int) -> PauliString:
    """U†·Z_a·U for the conjugation chain U."""
    image = PauliString.from_factors({anchor: "Z"}, n_qubits)
    image = conjugate_by_quarter_turn(
        image,
        PauliString.from_factors({anchor: "X"}, n_qubits),
    )
    for target in targets:
        generator = PauliString.from_factors({anchor: "Z", target: "X"}, n_qubits)
        image = conjugate_by_quarter_turn(image, generator)
    return image


def compile_pauli_exponential(p: PauliString, theta: float) -> Circuit:
    """Compile exp(iθP) for a Hermitian, non-identity Pauli string P.

    Raises:
        ValueError: If P is the identity.
        NonHermitianError: If P carries a phase of ±i.
    """
    if p.is_identity:
        msg = "Cannot compile the exponential of an identity string"
        logger.error(msg)
        raise ValueError(msg)
    if not p.is_hermitian:
        msg = f"Pauli string '{p}' is not Hermitian"
        logger.error(msg)
        raise NonHermitianError(msg)

    n = p.n_qubits
    sign = 1 if p.phase == 0 else -1

    if p.is_diagonal:
        return compile_z_rotation(p.z_mask, sign * theta, n)

    anchor, *targets = p.support
    image = _chain_image(anchor, targets, n)

    # W: one quarter turn per qubit whose chain factor differs from P's factor
    basis_gates: list[Gate] = []
    phase = 0.0
    for qubit in p.support:
        have, want = image.factor(qubit), p.factor(qubit)
        if have == want:
            continue
        axis = _ROTATION_AXIS[frozenset((have, want))]
        image = conjugate_by_quarter_turn(
            image,
            PauliString.from_factors({qubit: axis}, n),
        )
        gates, delta = quarter_turn(axis, qubit)
        basis_gates.extend(gates)
        phase += delta

    # W†U†·Z_a·U W now equals ±P
    if (image.x_mask, image.z_mask) != (p.x_mask, p.z_mask):
        msg = f"Conjugation chain produced '{image}' instead of '{p}'"
        raise RuntimeError(msg)
    s = sign * (1 if image.phase == 0 else -1)

    forward = Circuit.from_gates(n, basis_gates, phase)
    for target in targets:
        forward += decompose_zx(anchor, target, n)
    anchor_turn, delta = quarter_turn("X", anchor)
    forward += Circuit.from_gates(n, anchor_turn, delta)

    rotation, delta = z_rotation(anchor, s * theta)
    middle = Circuit.from_gates(n, rotation, delta)

    circuit = forward + middle + forward.inverse()
    logger.debug("exp(i·%s·%s): %d gates before peephole", theta, p, len(circuit))
    return peephole_optimize(circuit)


def check_pairwise_commuting(h: PauliSum) -> None:
    """Raise NonCommutingError naming the first anticommuting pair of terms."""
    for (i, a), (j, b) in itertools.combinations(enumerate(h.strings), 2):
        if not commutes(a, b):
            msg = f"Terms {i} ('{a}') and {j} ('{b}') do not commute"
            logger.error(msg)
            raise NonCommutingError(msg)


def term_angles(h: PauliSum, eps: float) -> list[tuple[PauliString, float]]:
    """Pair each string with its rotation angle θ_i = ε·c_i.

    Raises:
        NonHermitianError: If a coefficient has an imaginary part.
    """
    if not h.is_hermitian:
        msg = "Generator has complex coefficients and is not Hermitian"
        logger.error(msg)
        raise NonHermitianError(msg)
    return [(string, eps * coefficient.real) for coefficient, string in h.terms]


def compile_full_unitary(
    h: PauliSum,
    eps: float,
    order: Sequence[int] | None = None,
) -> Circuit:
    """Compile exp(iε·H) for a sum of pairwise commuting strings.

    The per-term circuits are concatenated as is; `order` permutes the factors,
    which changes the circuit but not its unitary.

    Raises:
        NonCommutingError: If two terms anticommute.
    """
    check_pairwise_commuting(h)
    terms = term_angles(h, eps)
    if order is not None:
        if sorted(order) != list(range(len(terms))):
            msg = f"Order {list(order)} is not a permutation of {len(terms)} terms"
            raise ValueError(msg)
        terms = [terms[i] for i in order]

    circuit = Circuit(n_qubits=h.n_qubits)
    for string, theta in terms:
        if string.is_identity:
            # exp(iθ·I) is a global phase; sum strings carry no phase of their own
            circuit = circuit.with_phase(theta)
            continue
        circuit += compile_pauli_exponential(string, theta)
    counts = circuit.counts()
    logger.info(
        "Compiled %d terms at eps=%s: %d CNOTs, %d single-qubit gates",
        len(terms),
        eps,
        counts.cnot,
        counts.single_qubit,
    )
    return circuit


def prepare_ground_state(boson_map: BosonQubitMap) -> Circuit:
    """X gates taking |0...0> to the encoded two-mode ground state."""
    boson_map.require_pair_shape()
    codeword = boson_map.ground_codeword()
    gates = [Gate.x(q) for q, bit in enumerate(codeword) if bit == "1"]
    return Circuit.from_gates(boson_map.total_qubits, gates)
