# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Exact statevector simulation and the matrix-exponential oracle.

Basis index bit k is qubit k. Amplitude arrays are reshaped to one axis per qubit,
with qubit k on axis n-1-k, and may carry a leading batch axis so that a whole
unitary is built in one pass.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections.abc import Mapping
from typing import ClassVar

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, PositiveInt, model_validator

from gravsqueeze.bosonmap import BosonQubitMap
from gravsqueeze.compiler.circuit import Circuit, Gate, GateKind
from gravsqueeze.constants import MAX_DENSE_QUBITS, NORM_ATOL
from gravsqueeze.errors import (
    CapacityError,
    DegenerateProjectionError,
    DimensionError,
    NonHermitianError,
)
from gravsqueeze.pauli import PauliString, PauliSum, to_dense_matrix
from gravsqueeze.physics import QUTRIT_LEVELS, TwoQutritState
from gravsqueeze.util import bitstring_to_index, index_to_bitstring

logger = logging.getLogger(__name__)

_SQRT_X = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_FIXED_MATRICES: dict[GateKind, np.ndarray] = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.SQRT_X: _SQRT_X,
    GateKind.S: np.diag([1, 1j]),
    GateKind.S_DAGGER: np.diag([1, -1j]),
}


def gate_matrix(gate: Gate) -> np.ndarray:
    """2x2 matrix of a single-qubit gate."""
    if gate.kind in _FIXED_MATRICES:
        return _FIXED_MATRICES[gate.kind]
    angle = gate.angle or 0.0
    match gate.kind:
        case GateKind.RX:
            c, s = math.cos(angle / 2), math.sin(angle / 2)
            return np.array([[c, -1j * s], [-1j * s, c]])
        case GateKind.RZ:
            return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])
        case GateKind.U1:
            return np.diag([1, np.exp(1j * angle)])
    msg = f"Gate {gate} has no 2x2 matrix"
    raise ValueError(msg)


class Statevector(BaseModel):
    """Normalized pure state of n qubits."""

    model_config: ClassVar[ConfigDict] = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
    )

    n_qubits: PositiveInt
    amplitudes: np.ndarray

    @model_validator(mode="after")
    def check_amplitudes(self) -> Statevector:
        """Check shape and unit norm."""
        if self.amplitudes.shape != (1 << self.n_qubits,):
            msg = (
                f"Expected {1 << self.n_qubits} amplitudes for {self.n_qubits} "
                f"qubits, got shape {self.amplitudes.shape}"
            )
            raise ValueError(msg)
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > NORM_ATOL:
            msg = f"State has squared norm {norm!r}, expected 1"
            raise ValueError(msg)
        return self

    @classmethod
    def from_array(cls, amplitudes: np.ndarray) -> Statevector:
        """Wrap an amplitude array of length 2^n."""
        array = np.array(amplitudes, dtype=complex)
        n_qubits = int(array.size).bit_length() - 1
        array.flags.writeable = False
        return cls(n_qubits=max(n_qubits, 1), amplitudes=array)

    @classmethod
    def basis_state(cls, bits: str) -> Statevector:
        """Computational basis state from a qubit-0-leftmost bitstring."""
        array = np.zeros(1 << len(bits), dtype=complex)
        array[bitstring_to_index(bits)] = 1
        return cls.from_array(array)

    @classmethod
    def zero_state(cls, n_qubits: int) -> Statevector:
        """|0...0>."""
        return cls.basis_state("0" * n_qubits)

    def amplitude(self, bits: str) -> complex:
        """Amplitude of a qubit-0-leftmost bitstring."""
        return complex(self.amplitudes[bitstring_to_index(bits)])

    def probabilities(self) -> np.ndarray:
        """|amplitude|² per basis index."""
        return np.abs(self.amplitudes) ** 2

    def to_json(self) -> str:
        """Amplitudes as a list of {index, bits, real, imag} records."""
        records = [
            {
                "index": index,
                "bits": index_to_bitstring(index, self.n_qubits),
                "real": float(value.real),
                "imag": float(value.imag),
            }
            for index, value in enumerate(self.amplitudes)
        ]
        return json.dumps(records, indent=2)


def _axis(qubit: int, n_qubits: int) -> int:
    # leading batch axis
    return 1 + n_qubits - 1 - qubit


def _apply_kernel(psi: np.ndarray, gate: Gate, n_qubits: int) -> np.ndarray:
    """Apply one gate to a (batch, 2, ..., 2) array."""
    if gate.kind is GateKind.CNOT and gate.control is not None:
        c_axis, t_axis = _axis(gate.control, n_qubits), _axis(gate.target, n_qubits)
        out = psi.copy()
        select: list[slice | int] = [slice(None)] * psi.ndim
        select[c_axis] = 1
        flip_axis = t_axis - 1 if t_axis > c_axis else t_axis
        out[tuple(select)] = np.flip(psi[tuple(select)], axis=flip_axis)
        return out

    axis = _axis(gate.target, n_qubits)
    out = np.tensordot(gate_matrix(gate), psi, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _check_gate(gate: Gate, n_qubits: int) -> None:
    if max(gate.qubits) >= n_qubits:
        msg = f"Gate {gate} addresses a qubit beyond the {n_qubits}-qubit state"
        logger.error(msg)
        raise DimensionError(msg)


def apply_pauli(psi: np.ndarray, p: PauliString) -> np.ndarray:
    """Apply a Pauli string to a flat or batched amplitude array."""
    dim = 1 << p.n_qubits
    flat = psi.reshape(-1, dim)
    cols = np.arange(dim)
    parity = np.zeros(dim, dtype=np.int64)
    for q in range(p.n_qubits):
        if (p.z_mask >> q) & 1:
            parity ^= (cols >> q) & 1
    y_count = bin(p.x_mask & p.z_mask).count("1")
    scale = 1j ** ((p.phase + y_count) % 4) * (1 - 2 * parity)
    out = np.empty_like(flat)
    out[:, cols ^ p.x_mask] = flat * scale
    return out.reshape(psi.shape)


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    """Apply one gate.

    Raises:
        DimensionError: If the gate addresses a missing qubit.
    """
    n = state.n_qubits
    _check_gate(gate, n)
    psi = state.amplitudes.reshape((1,) + (2,) * n)
    return Statevector.from_array(_apply_kernel(psi, gate, n).reshape(-1))


def _evolve(
    psi: np.ndarray,
    circuit: Circuit,
    injections: Mapping[int, PauliString] | None = None,
    start: int = 0,
) -> np.ndarray:
    n = circuit.n_qubits
    injections = injections or {}
    shaped = psi.reshape((-1,) + (2,) * n)
    for position in range(start, len(circuit.gates)):
        if position in injections:
            shaped = apply_pauli(shaped, injections[position])
        shaped = _apply_kernel(shaped, circuit.gates[position], n)
    if len(circuit.gates) in injections:
        shaped = apply_pauli(shaped, injections[len(circuit.gates)])
    return shaped.reshape(psi.shape) * np.exp(1j * circuit.global_phase)


def _check_register(circuit: Circuit, state: Statevector) -> None:
    if circuit.n_qubits != state.n_qubits:
        msg = (
            f"Circuit acts on {circuit.n_qubits} qubits, "
            f"state has {state.n_qubits}"
        )
        logger.error(msg)
        raise DimensionError(msg)


def run(circuit: Circuit, initial: Statevector) -> Statevector:
    """Apply the gates in order, then the recorded global phase.

    Raises:
        DimensionError: If circuit and state sizes differ.
    """
    _check_register(circuit, initial)
    return Statevector.from_array(_evolve(initial.amplitudes, circuit))


def run_with_injections(
    circuit: Circuit,
    initial: Statevector,
    injections: Mapping[int, PauliString],
) -> Statevector:
    """Run with Pauli strings inserted into the gate sequence.

    A key k places its string after the first k gates, so 0 is before the first
    gate and len(circuit) after the last.
    """
    _check_register(circuit, initial)
    for position, string in injections.items():
        in_range = 0 <= position <= len(circuit.gates)
        if not in_range or string.n_qubits != circuit.n_qubits:
            msg = f"Cannot inject '{string}' at position {position}"
            logger.error(msg)
            raise DimensionError(msg)
    return Statevector.from_array(_evolve(initial.amplitudes, circuit, injections))


def prefix_states(circuit: Circuit, initial: Statevector) -> list[np.ndarray]:
    """Amplitudes after each prefix of the circuit, global phase excluded.

    Entry k holds the state after the first k gates.
    """
    _check_register(circuit, initial)
    n = circuit.n_qubits
    shaped = initial.amplitudes.reshape((1,) + (2,) * n)
    states = [initial.amplitudes.copy()]
    for gate in circuit.gates:
        shaped = _apply_kernel(shaped, gate, n)
        states.append(shaped.reshape(-1).copy())
    return states


def resume_with_injections(
    circuit: Circuit,
    prefix: np.ndarray,
    start: int,
    injections: Mapping[int, PauliString],
) -> np.ndarray:
    """Finish a run from the cached state after `start` gates."""
    return _evolve(prefix, circuit, injections, start=start)


def _check_capacity(n_qubits: int) -> None:
    if n_qubits > MAX_DENSE_QUBITS:
        msg = (
            f"Refusing to build a dense {n_qubits}-qubit unitary, the limit is "
            f"{MAX_DENSE_QUBITS} qubits"
        )
        logger.error(msg)
        raise CapacityError(msg)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a circuit, global phase included."""
    _check_capacity(circuit.n_qubits)
    dim = 1 << circuit.n_qubits
    # row j of the batch evolves basis state j
    columns = _evolve(np.eye(dim, dtype=complex), circuit)
    return columns.T


def exact_evolution_oracle(h: PauliSum, eps: float) -> np.ndarray:
    """exp(iε·H) by Hermitian eigendecomposition.

    Raises:
        NonHermitianError: If H is not Hermitian.
    """
    if not h.is_hermitian:
        msg = "Oracle generator has complex coefficients"
        logger.error(msg)
        raise NonHermitianError(msg)
    matrix = to_dense_matrix(h)
    if not np.allclose(matrix, matrix.conj().T, atol=1e-14):
        msg = "Oracle generator matrix is not Hermitian"
        logger.error(msg)
        raise NonHermitianError(msg)
    eigenvalues, eigenvectors = scipy.linalg.eigh(matrix)
    return (eigenvectors * np.exp(1j * eps * eigenvalues)) @ eigenvectors.conj().T


def unitary_deviation(actual: np.ndarray, expected: np.ndarray) -> float:
    """Largest entry-wise distance after removing the best global phase."""
    if actual.shape != expected.shape:
        msg = f"Shapes {actual.shape} and {expected.shape} differ"
        raise DimensionError(msg)
    overlap = np.trace(expected.conj().T @ actual)
    phase = np.exp(-1j * np.angle(overlap)) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(actual * phase - expected)))


def fidelity(reference: Statevector, state: Statevector) -> float:
    """|<reference|state>|²."""
    if reference.n_qubits != state.n_qubits:
        msg = f"States have {reference.n_qubits} and {state.n_qubits} qubits"
        logger.error(msg)
        raise DimensionError(msg)
    return float(abs(np.vdot(reference.amplitudes, state.amplitudes)) ** 2)


def p0_fidelity_proxy(state: Statevector, boson_map: BosonQubitMap) -> float:
    """Probability of the encoded two-mode ground state."""
    return abs(state.amplitude(boson_map.ground_codeword())) ** 2


def reduce_to_qutrits(
    state: Statevector,
    boson_map: BosonQubitMap,
) -> tuple[TwoQutritState, float]:
    """Project onto the nine codewords and renormalize.

    Returns:
        The codespace state and the discarded (leaked) probability.

    Raises:
        DegenerateProjectionError: If the codespace holds less than 1e-12.
    """
    boson_map.require_pair_shape()
    if state.n_qubits != boson_map.total_qubits:
        msg = (
            f"Expected a {boson_map.total_qubits}-qubit state, "
            f"got {state.n_qubits}"
        )
        logger.error(msg)
        raise DimensionError(msg)

    amplitudes = np.zeros((QUTRIT_LEVELS, QUTRIT_LEVELS), dtype=complex)
    for bits, fock in boson_map.codewords().items():
        n_a, n_b = fock.occupations
        amplitudes[n_a, n_b] = state.amplitude(bits)

    weight = float(np.sum(np.abs(amplitudes) ** 2))
    if weight < NORM_ATOL:
        msg = f"Codespace weight {weight!r} is too small to renormalize"
        logger.error(msg)
        raise DegenerateProjectionError(msg)
    leakage = max(0.0, 1.0 - weight)
    return TwoQutritState(amplitudes=amplitudes / math.sqrt(weight)), leakage


def embed_qutrits(qutrits: TwoQutritState, boson_map: BosonQubitMap) -> Statevector:
    """Place a two-mode state on its codewords."""
    boson_map.require_pair_shape()
    array = np.zeros(1 << boson_map.total_qubits, dtype=complex)
    for bits, fock in boson_map.codewords().items():
        array[bitstring_to_index(bits)] = qutrits.amplitude(*fock.occupations)
    return Statevector.from_array(array)


def codeword_probabilities_csv(state: Statevector, boson_map: BosonQubitMap) -> str:
    """Probability per codeword as CSV with a header row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    modes = [f"n_{m}" for m in range(boson_map.n_modes)]
    writer.writerow(["bitstring", *modes, "probability"])
    for bits, fock in boson_map.codewords().items():
        probability = abs(state.amplitude(bits)) ** 2
        writer.writerow([bits, *fock.occupations, repr(probability)])
    return buffer.getvalue()
