# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Exact algebra of n-qubit Pauli strings and sums.

A string is stored as two integer bit masks plus a phase exponent. Bit q of `x_mask`
and `z_mask` select the single-qubit factor on qubit q:

    (x, z) = (0, 0) -> I,  (1, 0) -> X,  (0, 1) -> Z,  (1, 1) -> Y

and the operator is ``i**phase`` times the tensor product of those factors. Since
Y = i·X·Z, products pick up powers of i that are tracked exactly in `phase`.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from typing import Any, ClassVar, TypeAlias

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    NonNegativeInt,
    PositiveInt,
    field_validator,
    model_validator,
)

from gravsqueeze.constants import COEFFICIENT_CUTOFF, MAX_DENSE_QUBITS
from gravsqueeze.errors import CapacityError, DimensionError

logger = logging.getLogger(__name__)

_FACTOR_BITS: dict[str, tuple[int, int]] = {
    "I": (0, 0),
    "X": (1, 0),
    "Y": (1, 1),
    "Z": (0, 1),
}
_BITS_FACTOR = {bits: label for label, bits in _FACTOR_BITS.items()}
_PHASE_PREFIX = ("+", "+i", "-", "-i")
_PHASE_VALUE = (1, 1j, -1, -1j)


def _popcount(value: int) -> int:
    return bin(value).count("1")


class PauliString(BaseModel):
    """Tensor product of single-qubit Pauli matrices with a phase in {±1, ±i}."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    n_qubits: PositiveInt
    x_mask: NonNegativeInt = 0
    z_mask: NonNegativeInt = 0
    phase: int = 0

    @field_validator("phase", mode="after")
    @classmethod
    def normalize_phase(cls, value: int) -> int:
        """Keep the phase as an exponent of i modulo 4."""
        return value % 4

    @model_validator(mode="after")
    def check_mask_lengths(self) -> PauliString:
        """Check that no mask addresses a qubit beyond n_qubits."""
        limit = 1 << self.n_qubits
        if self.x_mask >= limit or self.z_mask >= limit:
            msg = (
                f"Masks x={self.x_mask:#b}, z={self.z_mask:#b} do not fit in "
                f"{self.n_qubits} qubits"
            )
            raise ValueError(msg)
        return self

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        """Identity string on n_qubits."""
        return cls(n_qubits=n_qubits)

    @classmethod
    def from_factors(
        cls,
        factors: Mapping[int, str],
        n_qubits: int,
        phase: int = 0,
    ) -> PauliString:
        """Build a string from a {qubit: "X" | "Y" | "Z" | "I"} mapping."""
        x_mask = z_mask = 0
        for qubit, label in factors.items():
            if not 0 <= qubit < n_qubits:
                msg = f"Qubit {qubit} out of range for {n_qubits} qubits"
                raise DimensionError(msg)
            try:
                x, z = _FACTOR_BITS[label.upper()]
            except KeyError as e:
                msg = f"Unknown Pauli factor '{label}', expected one of I, X, Y, Z"
                raise ValueError(msg) from e
            x_mask |= x << qubit
            z_mask |= z << qubit
        return cls(n_qubits=n_qubits, x_mask=x_mask, z_mask=z_mask, phase=phase)

    @classmethod
    def from_label(cls, label: str, phase: int = 0) -> PauliString:
        """Build a string from a dense label such as "XIXXIX" (qubit 0 leftmost)."""
        return cls.from_factors(
            dict(enumerate(label)),
            n_qubits=len(label),
            phase=phase,
        )

    def factor(self, qubit: int) -> str:
        """Single-qubit factor on `qubit` as one of "I", "X", "Y", "Z"."""
        bits = ((self.x_mask >> qubit) & 1, (self.z_mask >> qubit) & 1)
        return _BITS_FACTOR[bits]

    @property
    def support(self) -> tuple[int, ...]:
        """Qubits carrying a non-identity factor, ascending."""
        mask = self.x_mask | self.z_mask
        return tuple(q for q in range(self.n_qubits) if (mask >> q) & 1)

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return _popcount(self.x_mask | self.z_mask)

    @property
    def is_identity(self) -> bool:
        """True if every factor is the identity (the phase may be anything)."""
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def is_diagonal(self) -> bool:
        """True for Z-type strings."""
        return self.x_mask == 0

    @property
    def is_hermitian(self) -> bool:
        """True if the phase is real."""
        return self.phase in (0, 2)

    @property
    def coefficient(self) -> complex:
        """Phase as a complex number."""
        return _PHASE_VALUE[self.phase]

    def with_phase(self, phase: int) -> PauliString:
        """Copy of this string with a different phase exponent."""
        return self.model_copy(update={"phase": phase % 4})

    def adjoint(self) -> PauliString:
        """Hermitian conjugate."""
        return self.with_phase(-self.phase)

    def label(self) -> str:
        """Compact rendering, e.g. "X0 X2 Y3 Y5" with identity factors omitted."""
        body = " ".join(f"{self.factor(q)}{q}" for q in self.support) or "I"
        prefix = "" if self.phase == 0 else _PHASE_PREFIX[self.phase]
        return f"{prefix}{body}"

    def __str__(self) -> str:
        return self.label()

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)


def _check_dimensions(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        msg = f"Pauli strings act on {a.n_qubits} and {b.n_qubits} qubits"
        logger.error(msg)
        raise DimensionError(msg)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Operator product a·b with the phase tracked exactly."""
    _check_dimensions(a, b)
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    # sigma(x, z) = i^(x z) X^x Z^z; moving Z_a past X_b costs (-1)^(z_a x_b)
    exponent = (
        a.phase
        + b.phase
        + _popcount(a.x_mask & a.z_mask)
        + _popcount(b.x_mask & b.z_mask)
        + 2 * _popcount(a.z_mask & b.x_mask)
        - _popcount(x & z)
    )
    return PauliString(n_qubits=a.n_qubits, x_mask=x, z_mask=z, phase=exponent)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True if ab = ba, i.e. the symplectic inner product is even."""
    _check_dimensions(a, b)
    return (_popcount(a.x_mask & b.z_mask) + _popcount(a.z_mask & b.x_mask)) % 2 == 0


def conjugate_by_quarter_turn(p: PauliString, generator: PauliString) -> PauliString:
    """Return e^{-iπ/4 G}·P·e^{iπ/4 G} for a Hermitian Pauli string G."""
    if commutes(p, generator):
        return p
    # anticommuting: e^{-iπ/4 G} P e^{iπ/4 G} = e^{-iπ/2 G} P = -i G P
    product = multiply(generator, p)
    return product.with_phase(product.phase - 1)


def clifford_image(
    p: PauliString,
    images: Mapping[int, tuple[PauliString, PauliString]],
) -> PauliString:
    """Image of P under a Clifford given by the images of X_q and Z_q.

    Qubits missing from `images` are left untouched.
    """
    result = PauliString.identity(p.n_qubits).with_phase(p.phase)
    for q in range(p.n_qubits):
        x, z = (p.x_mask >> q) & 1, (p.z_mask >> q) & 1
        if not (x or z):
            continue
        if q in images:
            x_image, z_image = images[q]
        else:
            x_image = PauliString(n_qubits=p.n_qubits, x_mask=1 << q)
            z_image = PauliString(n_qubits=p.n_qubits, z_mask=1 << q)
        factor = PauliString.identity(p.n_qubits).with_phase(x * z)
        if x:
            factor = multiply(factor, x_image)
        if z:
            factor = multiply(factor, z_image)
        result = multiply(result, factor)
    return result


Term: TypeAlias = tuple[complex, PauliString]


def _canonical_terms(terms: Iterable[Term]) -> tuple[Term, ...]:
    merged: dict[tuple[int, int], complex] = {}
    strings: dict[tuple[int, int], PauliString] = {}
    for coefficient, string in terms:
        key = (string.x_mask, string.z_mask)
        merged[key] = merged.get(key, 0j) + complex(coefficient) * string.coefficient
        strings.setdefault(key, string.with_phase(0))
    return tuple(
        (merged[key], strings[key])
        for key in sorted(merged)
        if abs(merged[key]) >= COEFFICIENT_CUTOFF
    )


class PauliSum(BaseModel):
    """Weighted sum of Pauli strings in canonical form.

    Canonical form: string phases are folded into the coefficients, duplicate
    strings are merged, coefficients below 1e-15 in magnitude are dropped and terms
    are ordered lexicographically on (x_mask, z_mask).
    """

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    n_qubits: PositiveInt
    terms: tuple[tuple[complex, PauliString], ...] = ()

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:  # noqa: ANN401
        """Bring raw terms into canonical form before field validation."""
        if not isinstance(data, dict) or "terms" not in data:
            return data
        raw: list[Term] = []
        for coefficient, string in data["terms"]:
            parsed = (
                string
                if isinstance(string, PauliString)
                else PauliString.model_validate(string)
            )
            raw.append((complex(coefficient), parsed))
        return {**data, "terms": _canonical_terms(raw)}

    @model_validator(mode="after")
    def check_qubit_counts(self) -> PauliSum:
        """Check that every string shares n_qubits."""
        for _, string in self.terms:
            if string.n_qubits != self.n_qubits:
                msg = (
                    f"Term '{string}' acts on {string.n_qubits} qubits, "
                    f"sum is on {self.n_qubits}"
                )
                raise ValueError(msg)
        return self

    @classmethod
    def from_string(cls, string: PauliString, coefficient: complex = 1) -> PauliSum:
        """Single-term sum."""
        return cls(n_qubits=string.n_qubits, terms=((coefficient, string),))

    @classmethod
    def zero(cls, n_qubits: int) -> PauliSum:
        """Empty sum on n_qubits."""
        return cls(n_qubits=n_qubits)

    @property
    def strings(self) -> tuple[PauliString, ...]:
        """Strings of the sum, in canonical order."""
        return tuple(string for _, string in self.terms)

    @property
    def coefficients(self) -> tuple[complex, ...]:
        """Coefficients of the sum, in canonical order."""
        return tuple(coefficient for coefficient, _ in self.terms)

    @property
    def is_hermitian(self) -> bool:
        """True if every coefficient is real (strings carry no phase)."""
        return all(abs(c.imag) < COEFFICIENT_CUTOFF for c in self.coefficients)

    def adjoint(self) -> PauliSum:
        """Hermitian conjugate."""
        return PauliSum(
            n_qubits=self.n_qubits,
            terms=tuple((c.conjugate(), s) for c, s in self.terms),
        )

    def scaled(self, factor: complex) -> PauliSum:
        """Multiply every coefficient by `factor`."""
        return PauliSum(
            n_qubits=self.n_qubits,
            terms=tuple((factor * c, s) for c, s in self.terms),
        )

    def lines(self) -> list[str]:
        """Render one term per line, e.g. "+0.25·X0 X2 X3 X5"."""
        rendered: list[str] = []
        for coefficient, string in self.terms:
            if coefficient.imag == 0:
                value = f"{coefficient.real:+.12g}"
            else:
                value = f"+({coefficient.real:.12g}{coefficient.imag:+.12g}j)"
            rendered.append(f"{value}·{string.label()}")
        return rendered

    def __str__(self) -> str:
        return "\n".join(self.lines()) or "0"

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: PauliSum) -> PauliSum:
        if self.n_qubits != other.n_qubits:
            msg = f"Pauli sums act on {self.n_qubits} and {other.n_qubits} qubits"
            raise DimensionError(msg)
        return PauliSum(n_qubits=self.n_qubits, terms=self.terms + other.terms)

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + other.scaled(-1)

    def __mul__(self, other: PauliSum | PauliString | complex) -> PauliSum:
        if isinstance(other, PauliString):
            other = PauliSum.from_string(other)
        if not isinstance(other, PauliSum):
            return self.scaled(other)
        if self.n_qubits != other.n_qubits:
            msg = f"Pauli sums act on {self.n_qubits} and {other.n_qubits} qubits"
            raise DimensionError(msg)
        return PauliSum(
            n_qubits=self.n_qubits,
            terms=tuple(
                (ca * cb, multiply(sa, sb))
                for ca, sa in self.terms
                for cb, sb in other.terms
            ),
        )

    def __rmul__(self, other: complex) -> PauliSum:
        return self.scaled(other)


def _string_matrix(p: PauliString) -> np.ndarray:
    dim = 1 << p.n_qubits
    cols = np.arange(dim)
    rows = cols ^ p.x_mask
    parity = np.zeros(dim, dtype=np.int64)
    for q in range(p.n_qubits):
        if (p.z_mask >> q) & 1:
            parity ^= (cols >> q) & 1
    # <c^x| sigma |c> = i^(x z) (-1)^(z . c), qubit 0 least significant
    scale = 1j ** ((p.phase + _popcount(p.x_mask & p.z_mask)) % 4)
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[rows, cols] = scale * (1 - 2 * parity)
    return matrix


def to_dense_matrix(p: PauliSum | PauliString) -> np.ndarray:
    """Expand a string or sum into a 2^n x 2^n matrix.

    Basis index bit k is qubit k, so the result equals kron(P_{n-1}, ..., P_0).

    Raises:
        CapacityError: If the operator acts on more than 12 qubits.
    """
    if p.n_qubits > MAX_DENSE_QUBITS:
        msg = (
            f"Refusing to expand a {p.n_qubits}-qubit operator densely, "
            f"the limit is {MAX_DENSE_QUBITS} qubits"
        )
        logger.error(msg)
        raise CapacityError(msg)

    if isinstance(p, PauliString):
        return _string_matrix(p)

    dim = 1 << p.n_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    for coefficient, string in p.terms:
        matrix += coefficient * _string_matrix(string)
    return matrix
