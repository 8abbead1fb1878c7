# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Peephole optimizer tests."""

import math

import numpy as np
import pytest

from gravsqueeze.compiler.circuit import Circuit, Gate
from gravsqueeze.compiler.decompose import compile_full_unitary
from gravsqueeze.compiler.peephole import combine, gates_commute, peephole_optimize
from gravsqueeze.pauli import PauliSum
from gravsqueeze.simulator import circuit_unitary


def merged_gates(a: Gate, b: Gate) -> list[Gate]:
    """Gates left after combining a with b."""
    merged = combine(a, b)
    assert merged is not None
    return merged[0]


def assert_same_unitary(a: Circuit, b: Circuit) -> None:
    """Unitaries agree, global phase included."""
    np.testing.assert_allclose(circuit_unitary(a), circuit_unitary(b), atol=1e-12)


@pytest.mark.parametrize(
    ("a", "b", "expected"),
    [
        (Gate.cnot(0, 1), Gate.rz(0, 0.3), True),
        (Gate.cnot(0, 1), Gate.rx(0, 0.3), False),
        (Gate.cnot(0, 1), Gate.cnot(2, 1), True),
        (Gate.cnot(0, 1), Gate.cnot(1, 2), False),
        (Gate.sqrt_x(1), Gate.cnot(0, 1), True),
        (Gate.s(2), Gate.u1(2, 0.1), True),
        (Gate.x(0), Gate.rz(1, 0.1), True),
    ],
)
def test_gates_commute(a: Gate, b: Gate, expected: bool) -> None:  # noqa: FBT001
    """Test commutation decided from the per-qubit axes."""
    assert gates_commute(a, b) is expected
    assert gates_commute(b, a) is expected


def test_combine_rules() -> None:
    """Test cancellation and merging of neighbouring gates."""
    assert combine(Gate.cnot(0, 1), Gate.cnot(0, 1)) == ([], 0.0)
    assert combine(Gate.cnot(0, 1), Gate.cnot(1, 0)) is None
    assert combine(Gate.rz(0, 0.1), Gate.rz(1, 0.1)) is None
    assert combine(Gate.rz(0, 0.1), Gate.rx(0, 0.1)) is None

    assert merged_gates(Gate.s(0), Gate.s_dagger(0)) == []
    assert merged_gates(Gate.u1(0, math.pi / 4), Gate.u1(0, math.pi / 4)) == [Gate.s(0)]
    assert merged_gates(Gate.sqrt_x(0), Gate.sqrt_x(0)) == [Gate.x(0)]
    assert merged_gates(Gate.rz(0, 0.1), Gate.rz(0, 0.2)) == [Gate.rz(0, 0.1 + 0.2)]


@pytest.mark.parametrize(
    "gates",
    [
        [Gate.x(0), Gate.x(0)],
        [Gate.sqrt_x(0), Gate.sqrt_x(0), Gate.sqrt_x(0), Gate.sqrt_x(0)],
        [Gate.rz(0, 0.3), Gate.u1(0, 0.2), Gate.s(0)],
        [Gate.rx(0, 0.3), Gate.sqrt_x(0), Gate.rx(0, -0.3)],
        [Gate.cnot(0, 1), Gate.rz(0, 0.3), Gate.cnot(0, 1)],
        [Gate.cnot(0, 1), Gate.rx(0, 0.3), Gate.cnot(0, 1)],
    ],
)
def test_unitary_preserved(gates: list[Gate]) -> None:
    """Test that optimization keeps the unitary and never adds gates."""
    circuit = Circuit.from_gates(2, gates)
    optimized = peephole_optimize(circuit)
    assert len(optimized) <= len(circuit)
    assert_same_unitary(circuit, optimized)


def test_cancel_across_commuting_gate() -> None:
    """Test that a CNOT pair cancels around a rotation on the control."""
    circuit = Circuit.from_gates(
        2,
        [Gate.cnot(0, 1), Gate.rz(0, 0.3), Gate.cnot(0, 1)],
    )
    assert peephole_optimize(circuit).gates == (Gate.rz(0, 0.3),)


def test_blocked_by_non_commuting_gate() -> None:
    """Test that an X rotation on the control keeps both CNOTs."""
    circuit = Circuit.from_gates(
        2,
        [Gate.cnot(0, 1), Gate.rx(0, 0.3), Gate.cnot(0, 1)],
    )
    assert peephole_optimize(circuit) == circuit


def test_full_unitary_shrinks(hamiltonian: PauliSum) -> None:
    """Test fewer CNOTs and the same unitary for the mapped Hamiltonian."""
    naive = compile_full_unitary(hamiltonian, 0.1)
    optimized = peephole_optimize(naive)
    assert optimized.counts().cnot < naive.counts().cnot
    assert optimized.counts().single_qubit <= naive.counts().single_qubit
    assert_same_unitary(naive, optimized)
    assert peephole_optimize(optimized) == optimized
