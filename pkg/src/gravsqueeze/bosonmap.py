# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Boson-qubit mapping of truncated Fock spaces.

Each mode with at most N_p excitations owns a contiguous block of N_p + 1 qubits.
Occupation n is encoded by a block where every bit is 1 except bit n, which is 0:

    |0> -> 011,  |1> -> 101,  |2> -> 110      (N_p = 2)

Bitstrings are rendered with qubit 0 leftmost, see `gravsqueeze.util`. The 0-bit at
block position n is the convention used for every cutoff; only N_p = 2 is pinned by
the published encoding table.
"""

from __future__ import annotations

import logging
import math
from typing import ClassVar

from pydantic import (
    BaseModel,
    ConfigDict,
    NonNegativeInt,
    PositiveInt,
    computed_field,
    model_validator,
)

from gravsqueeze.constants import DEFAULT_CUTOFF, DEFAULT_MODES
from gravsqueeze.errors import EncodingError, UnsupportedShapeError
from gravsqueeze.pauli import PauliString, PauliSum

logger = logging.getLogger(__name__)


class FockBasisState(BaseModel):
    """Occupation numbers per bosonic mode under a cutoff."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    occupations: tuple[NonNegativeInt, ...]
    cutoff: PositiveInt = DEFAULT_CUTOFF

    @model_validator(mode="after")
    def check_cutoff(self) -> FockBasisState:
        """Check that no occupation exceeds the cutoff."""
        for mode, n in enumerate(self.occupations):
            if n > self.cutoff:
                msg = f"Mode {mode} holds {n} excitations, cutoff is {self.cutoff}"
                raise ValueError(msg)
        return self


class BosonQubitMap(BaseModel):
    """Unary encoding of n_modes truncated modes into qubit blocks."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    n_modes: PositiveInt = DEFAULT_MODES
    cutoff: PositiveInt = DEFAULT_CUTOFF

    @computed_field
    @property
    def qubits_per_mode(self) -> int:
        """Qubits in each mode block."""
        return self.cutoff + 1

    @computed_field
    @property
    def total_qubits(self) -> int:
        """Qubits in the whole register."""
        return self.n_modes * self.qubits_per_mode

    def block(self, mode: int) -> range:
        """Qubit indices owned by `mode`."""
        self.check_mode(mode)
        start = mode * self.qubits_per_mode
        return range(start, start + self.qubits_per_mode)

    def check_mode(self, mode: int) -> None:
        """Raise unless `mode` exists in this map."""
        if not 0 <= mode < self.n_modes:
            msg = f"Mode {mode} does not exist in a {self.n_modes}-mode map"
            logger.error(msg)
            raise EncodingError(msg)

    def require_pair_shape(self) -> None:
        """Raise unless this is the two-mode, N_p = 2 map."""
        if (self.n_modes, self.cutoff) != (DEFAULT_MODES, DEFAULT_CUTOFF):
            msg = (
                f"Operation only defined for {DEFAULT_MODES} modes with cutoff "
                f"{DEFAULT_CUTOFF}, got {self.n_modes} modes with cutoff {self.cutoff}"
            )
            logger.error(msg)
            raise UnsupportedShapeError(msg)

    def codewords(self) -> dict[str, FockBasisState]:
        """Every codeword bitstring with the Fock state it encodes."""
        table: dict[str, FockBasisState] = {}
        states: list[tuple[int, ...]] = [()]
        for _ in range(self.n_modes):
            states = [(*s, n) for s in states for n in range(self.cutoff + 1)]
        for occupations in states:
            state = FockBasisState(occupations=occupations, cutoff=self.cutoff)
            table[encode_fock(self, state)] = state
        return table

    def ground_codeword(self) -> str:
        """Bitstring of the all-modes ground state."""
        return encode_fock(self, self.fock((0,) * self.n_modes))

    def pair_codeword(self) -> str:
        """Bitstring of the state with N_p excitations in every mode."""
        return encode_fock(self, self.fock((self.cutoff,) * self.n_modes))

    def fock(self, occupations: tuple[int, ...]) -> FockBasisState:
        """Fock state under this map's cutoff."""
        try:
            return FockBasisState(occupations=occupations, cutoff=self.cutoff)
        except ValueError as e:
            msg = f"Occupations {occupations} exceed cutoff {self.cutoff}"
            raise EncodingError(msg) from e


def encode_fock(boson_map: BosonQubitMap, state: FockBasisState) -> str:
    """Encode a Fock state as a bitstring (qubit 0 leftmost).

    Raises:
        EncodingError: If the state does not match the map's modes or cutoff.
    """
    if len(state.occupations) != boson_map.n_modes:
        msg = (
            f"State has {len(state.occupations)} modes, "
            f"map has {boson_map.n_modes}"
        )
        logger.error(msg)
        raise EncodingError(msg)
    if state.cutoff != boson_map.cutoff:
        msg = f"State cutoff {state.cutoff} differs from map cutoff {boson_map.cutoff}"
        logger.error(msg)
        raise EncodingError(msg)

    width = boson_map.qubits_per_mode
    return "".join(
        "".join("0" if k == n else "1" for k in range(width))
        for n in state.occupations
    )


def decode_bitstring(boson_map: BosonQubitMap, bits: str) -> FockBasisState | None:
    """Invert `encode_fock`; returns None for non-codewords."""
    if len(bits) != boson_map.total_qubits:
        msg = (
            f"Bitstring '{bits}' has {len(bits)} bits, "
            f"map needs {boson_map.total_qubits}"
        )
        logger.error(msg)
        raise EncodingError(msg)

    width = boson_map.qubits_per_mode
    occupations: list[int] = []
    for mode in range(boson_map.n_modes):
        block = bits[mode * width : (mode + 1) * width]
        if block.count("0") != 1 or block.count("1") != width - 1:
            return None
        occupations.append(block.index("0"))
    return FockBasisState(occupations=tuple(occupations), cutoff=boson_map.cutoff)


def sigma_plus(qubit: int, n_qubits: int) -> PauliSum:
    """σ₊ = (X + iY)/2, maps |1> to |0>."""
    return PauliSum(
        n_qubits=n_qubits,
        terms=(
            (0.5, PauliString.from_factors({qubit: "X"}, n_qubits)),
            (0.5j, PauliString.from_factors({qubit: "Y"}, n_qubits)),
        ),
    )


def sigma_minus(qubit: int, n_qubits: int) -> PauliSum:
    """σ₋ = (X - iY)/2, maps |0> to |1>."""
    return PauliSum(
        n_qubits=n_qubits,
        terms=(
            (0.5, PauliString.from_factors({qubit: "X"}, n_qubits)),
            (-0.5j, PauliString.from_factors({qubit: "Y"}, n_qubits)),
        ),
    )


def map_creation(boson_map: BosonQubitMap, mode: int) -> PauliSum:
    """Image of the creation operator of `mode`.

    a† -> Σ_{n<N_p} √(n+1) σ₋ⁿ σ₊ⁿ⁺¹ with block-local indices; for N_p = 2 and mode
    A this is σ₋⁰σ₊¹ + √2·σ₋¹σ₊².
    """
    boson_map.check_mode(mode)
    n_qubits = boson_map.total_qubits
    block = boson_map.block(mode)
    image = PauliSum.zero(n_qubits)
    for n in range(boson_map.cutoff):
        hop = sigma_minus(block[n], n_qubits) * sigma_plus(block[n + 1], n_qubits)
        image += hop.scaled(math.sqrt(n + 1))
    return image


def map_annihilation(boson_map: BosonQubitMap, mode: int) -> PauliSum:
    """Image of the annihilation operator of `mode`."""
    return map_creation(boson_map, mode).adjoint()


def number_operator(boson_map: BosonQubitMap, mode: int) -> PauliSum:
    """Image of a†a on the codespace: Σ n·(1 - σ_zⁿ)/2 over the block."""
    boson_map.check_mode(mode)
    n_qubits = boson_map.total_qubits
    block = boson_map.block(mode)
    image = PauliSum.zero(n_qubits)
    for n in range(1, boson_map.cutoff + 1):
        # qubit n of the block is 0 exactly when the mode holds n excitations
        projector = PauliSum(
            n_qubits=n_qubits,
            terms=(
                (0.5, PauliString.identity(n_qubits)),
                (0.5, PauliString.from_factors({block[n]: "Z"}, n_qubits)),
            ),
        )
        image += projector.scaled(n)
    return image


def squared_pair_generator(boson_map: BosonQubitMap) -> PauliSum:
    """Image of a†²b†² + a²b² built algebraically from `map_creation`.

    Valid for any two-mode map; for N_p = 2 it reduces to the eight-term sum
    returned by `map_squared_pair_hamiltonian`.
    """
    if boson_map.n_modes != DEFAULT_MODES:
        msg = f"Squared pair generator needs 2 modes, map has {boson_map.n_modes}"
        logger.error(msg)
        raise UnsupportedShapeError(msg)
    a_dag = map_creation(boson_map, 0)
    b_dag = map_creation(boson_map, 1)
    raising = a_dag * a_dag * b_dag * b_dag
    return raising + raising.adjoint()


def map_squared_pair_hamiltonian(boson_map: BosonQubitMap) -> PauliSum:
    """Eight-term Pauli image of a†²b†² + a²b² for two modes with cutoff 2.

    Returns ¼·(X⁰X²X³X⁵ + X⁰X²Y³Y⁵ − X⁰Y²X³Y⁵ + X⁰Y²Y³X⁵ + Y⁰X²X³Y⁵ − Y⁰X²Y³X⁵
    + Y⁰Y²X³X⁵ + Y⁰Y²Y³Y⁵).

    Raises:
        UnsupportedShapeError: For anything but two modes with cutoff 2.
    """
    boson_map.require_pair_shape()
    n_qubits = boson_map.total_qubits
    qubits = (0, 2, 3, 5)
    # 2(σ₋⁰σ₊²σ₋³σ₊⁵ + h.c.): each σ± contributes (X ± iY)/2, and a string with
    # Y on qubit set S survives with sign Re(Π_{q∈S} ∓i) for σ∓ on q
    y_weight = {0: -1j, 2: 1j, 3: -1j, 5: 1j}
    terms: list[tuple[complex, PauliString]] = []
    for pattern in range(1 << len(qubits)):
        y_qubits = [q for bit, q in enumerate(qubits) if (pattern >> bit) & 1]
        if len(y_qubits) % 2:
            continue
        weight = complex(1)
        for q in y_qubits:
            weight *= y_weight[q]
        factors = {q: "Y" if q in y_qubits else "X" for q in qubits}
        terms.append((0.25 * weight.real, PauliString.from_factors(factors, n_qubits)))
    hamiltonian = PauliSum(n_qubits=n_qubits, terms=tuple(terms))
    logger.debug("Mapped squared pair generator:\n%s", hamiltonian)
    return hamiltonian
