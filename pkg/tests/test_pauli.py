# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Pauli string and Pauli sum tests."""

import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from gravsqueeze.errors import CapacityError, DimensionError
from gravsqueeze.pauli import (
    PauliString,
    PauliSum,
    clifford_image,
    commutes,
    conjugate_by_quarter_turn,
    multiply,
    to_dense_matrix,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1]).astype(complex)
I2 = np.eye(2, dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_label(label: str) -> np.ndarray:
    """Dense matrix of a label with qubit 0 leftmost (last Kronecker factor)."""
    matrix = np.array([[1.0 + 0j]])
    for factor in reversed(label):
        matrix = np.kron(matrix, SINGLE[factor])
    return matrix


def test_single_qubit_matrices() -> None:
    """Test that X, Y and Z expand to the textbook matrices."""
    for label, expected in (("X", X), ("Y", Y), ("Z", Z)):
        np.testing.assert_array_equal(
            to_dense_matrix(PauliString.from_label(label)),
            expected,
        )


@pytest.mark.parametrize("label", ["XIZ", "YYX", "IZY", "ZXXY"])
def test_dense_matrix_ordering(label: str) -> None:
    """Test that qubit 0 is the least significant bit of the basis index."""
    np.testing.assert_allclose(
        to_dense_matrix(PauliString.from_label(label)),
        kron_label(label),
    )


def test_multiply_phase() -> None:
    """Test that X·Y = iZ and Y·X = -iZ."""
    x, y = PauliString.from_label("X"), PauliString.from_label("Y")
    assert multiply(x, y) == PauliString.from_label("Z", phase=1)
    assert multiply(y, x) == PauliString.from_label("Z", phase=3)


def test_multiply_matches_dense() -> None:
    """Test that the symplectic product agrees with the matrix product."""
    labels = ["".join(p) for p in itertools.product("IXYZ", repeat=2)]
    for a, b in itertools.product(labels, repeat=2):
        pa, pb = PauliString.from_label(a), PauliString.from_label(b)
        np.testing.assert_allclose(
            to_dense_matrix(multiply(pa, pb)),
            to_dense_matrix(pa) @ to_dense_matrix(pb),
        )


def test_commutes_matches_dense() -> None:
    """Test that the symplectic commutation check agrees with the commutator."""
    labels = ["".join(p) for p in itertools.product("IXYZ", repeat=2)]
    for a, b in itertools.product(labels, repeat=2):
        ma = kron_label(a)
        mb = kron_label(b)
        dense = np.allclose(ma @ mb, mb @ ma)
        assert commutes(PauliString.from_label(a), PauliString.from_label(b)) == dense


def test_string_properties() -> None:
    """Test support, weight and the diagonal flag."""
    p = PauliString.from_label("XIYZII")
    assert p.support == (0, 2, 3)
    assert p.weight == 3
    assert not p.is_diagonal
    assert PauliString.from_label("ZIZ").is_diagonal
    assert PauliString.identity(4).is_identity
    assert p.label() == "X0 Y2 Z3"


def test_phase_normalized() -> None:
    """Test that the phase is kept modulo 4 and adjoint flips ±i."""
    p = PauliString.from_label("X", phase=5)
    assert p.phase == 1
    assert not p.is_hermitian
    assert p.adjoint().phase == 3


def test_mask_out_of_range() -> None:
    """Test that masks beyond n_qubits are rejected."""
    with pytest.raises(ValidationError):
        _ = PauliString(n_qubits=2, x_mask=4)


def test_from_factors_bad_qubit() -> None:
    """Test that a factor outside the register raises DimensionError."""
    with pytest.raises(DimensionError):
        _ = PauliString.from_factors({3: "X"}, 2)


def test_dimension_mismatch() -> None:
    """Test that strings on different registers cannot be multiplied."""
    with pytest.raises(DimensionError):
        _ = multiply(PauliString.from_label("X"), PauliString.from_label("XX"))


@pytest.mark.parametrize(
    ("p", "g"),
    [("X", "Z"), ("Y", "X"), ("ZX", "XI"), ("Z", "Z")],
)
def test_quarter_turn_conjugation(p: str, g: str) -> None:
    """Test e^{-iπ/4 G} P e^{iπ/4 G} against dense matrices."""
    mp, mg = kron_label(p), kron_label(g)
    u = (np.eye(len(mg)) + 1j * mg) / np.sqrt(2)
    expected = u.conj().T @ mp @ u
    result = conjugate_by_quarter_turn(
        PauliString.from_label(p),
        PauliString.from_label(g),
    )
    np.testing.assert_allclose(to_dense_matrix(result), expected, atol=1e-12)


def test_clifford_image_of_cnot() -> None:
    """Test that CNOT maps X on the control to X on both qubits."""
    images = {
        0: (PauliString.from_label("XX"), PauliString.from_label("ZI")),
        1: (PauliString.from_label("IX"), PauliString.from_label("ZZ")),
    }
    assert clifford_image(PauliString.from_label("XI"), images) == (
        PauliString.from_label("XX")
    )
    assert clifford_image(PauliString.from_label("IZ"), images) == (
        PauliString.from_label("ZZ")
    )
    # Y0 = i X0 Z0 -> i (X0 X1)(Z0) = Y0 X1
    assert clifford_image(PauliString.from_label("YI"), images) == (
        PauliString.from_label("YX")
    )


def test_sum_canonical_form() -> None:
    """Test that duplicates merge, phases fold in and zeros drop."""
    x = PauliString.from_label("XI")
    z = PauliString.from_label("IZ")
    total = PauliSum(
        n_qubits=2,
        terms=((1.0, z), (0.5, x), (0.5, x), (1.0, z.with_phase(2))),
    )
    assert total.terms == ((1.0, x),)


def test_sum_arithmetic_matches_dense() -> None:
    """Test +, - and * of sums against dense matrices."""
    label = PauliString.from_label
    a = PauliSum(n_qubits=2, terms=((0.5, label("XY")), (2.0, label("ZI"))))
    b = PauliSum(n_qubits=2, terms=((1j, label("YY")), (1.0, label("IX"))))
    ma, mb = to_dense_matrix(a), to_dense_matrix(b)
    np.testing.assert_allclose(to_dense_matrix(a + b), ma + mb)
    np.testing.assert_allclose(to_dense_matrix(a - b), ma - mb)
    np.testing.assert_allclose(to_dense_matrix(a * b), ma @ mb)
    np.testing.assert_allclose(to_dense_matrix(3 * a), 3 * ma)
    np.testing.assert_allclose(to_dense_matrix(b.adjoint()), mb.conj().T)


def test_sum_hermitian_flag() -> None:
    """Test that complex coefficients make a sum non-Hermitian."""
    p = PauliString.from_label("X")
    assert PauliSum.from_string(p, 0.5).is_hermitian
    assert not PauliSum.from_string(p, 0.5j).is_hermitian


def test_dense_capacity() -> None:
    """Test that dense expansion refuses more than 12 qubits."""
    with pytest.raises(CapacityError):
        _ = to_dense_matrix(PauliString.identity(13))
