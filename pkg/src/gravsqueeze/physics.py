# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Coupling strength, reference states and entanglement of the squeezed modes.

Two-mode states truncated at two excitations per mode are stored as a 3x3 amplitude
matrix indexed by (n_A, n_B).
"""

from __future__ import annotations

import logging
import math
from typing import ClassVar

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    field_validator,
)

from gravsqueeze.constants import (
    GRAVITATIONAL_CONSTANT,
    HBAR,
    NORM_ATOL,
    QUOTED_COUPLING_HZ,
    SPEED_OF_LIGHT,
)

logger = logging.getLogger(__name__)

QUTRIT_LEVELS = 3


class PhysicalParams(BaseModel):
    """Oscillator frequency, separation and evolution time."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    omega_m: PositiveFloat = Field(description="Mechanical angular frequency in Hz")
    d: PositiveFloat = Field(description="Separation of the oscillators in m")
    t: NonNegativeFloat = Field(default=0.0, description="Evolution time in s")

    gravitational_constant: PositiveFloat = GRAVITATIONAL_CONSTANT
    hbar: PositiveFloat = HBAR
    speed_of_light: PositiveFloat = SPEED_OF_LIGHT


class TwoQutritState(BaseModel):
    """Pure state of two modes with at most two excitations each."""

    model_config: ClassVar[ConfigDict] = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
    )

    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def coerce_amplitudes(cls, value: object) -> np.ndarray:
        """Accept anything array-like with nine entries."""
        array = np.asarray(value, dtype=complex)
        if array.size != QUTRIT_LEVELS**2:
            msg = f"Expected 9 amplitudes, got {array.size}"
            raise ValueError(msg)
        array = array.reshape(QUTRIT_LEVELS, QUTRIT_LEVELS).copy()
        array.flags.writeable = False
        return array

    @field_validator("amplitudes", mode="after")
    @classmethod
    def check_norm(cls, value: np.ndarray) -> np.ndarray:
        """Check that the squared norm is 1."""
        norm = float(np.sum(np.abs(value) ** 2))
        if abs(norm - 1.0) > NORM_ATOL:
            msg = f"State has squared norm {norm!r}, expected 1"
            raise ValueError(msg)
        return value

    @classmethod
    def from_amplitudes(
        cls,
        amplitudes: dict[tuple[int, int], complex],
    ) -> TwoQutritState:
        """Build a state from sparse {(n_A, n_B): amplitude} entries, normalizing."""
        array = np.zeros((QUTRIT_LEVELS, QUTRIT_LEVELS), dtype=complex)
        for (n_a, n_b), amplitude in amplitudes.items():
            array[n_a, n_b] = amplitude
        norm = np.linalg.norm(array)
        if norm == 0:
            msg = "Cannot normalize the zero vector"
            raise ValueError(msg)
        return cls(amplitudes=array / norm)

    def amplitude(self, n_a: int, n_b: int) -> complex:
        """Amplitude on |n_A>|n_B>."""
        return complex(self.amplitudes[n_a, n_b])

    def probability(self, n_a: int, n_b: int) -> float:
        """Probability of finding |n_A>|n_B>."""
        return abs(self.amplitude(n_a, n_b)) ** 2

    def support(self) -> tuple[tuple[int, int], ...]:
        """Basis states with nonzero amplitude."""
        rows, cols = np.nonzero(self.amplitudes)
        return tuple((int(a), int(b)) for a, b in zip(rows, cols))

    def reduced_density_matrix(self) -> np.ndarray:
        """Density matrix of mode A after tracing out mode B."""
        return self.amplitudes @ self.amplitudes.conj().T


def coupling_g(params: PhysicalParams) -> float:
    """Gravitational coupling g = 9·G·ħ·ω_m² / (16·c⁴·d) in Hz."""
    g = (
        9
        * params.gravitational_constant
        * params.hbar
        * params.omega_m**2
        / (16 * params.speed_of_light**4 * params.d)
    )
    logger.debug(
        "Coupling for omega_m=%s Hz, d=%s m: g=%s Hz",
        params.omega_m,
        params.d,
        g,
    )
    return g


def coupling_discrepancy(g: float) -> float:
    """Ratio of the quoted 1e-31 Hz coupling to a computed one."""
    return QUOTED_COUPLING_HZ / g


def epsilon(g: float, t: float) -> float:
    """Dimensionless evolution parameter ε = g·t.

    Raises:
        ValueError: If t is negative.
    """
    if t < 0:
        msg = f"Evolution time must be non-negative, got {t}"
        logger.error(msg)
        raise ValueError(msg)
    return g * t


def theory_state(g: float, omega_m: float) -> TwoQutritState:
    """Leading-order state |00> + g/(2ω_m)|22>, normalized."""
    ratio = g / (2 * omega_m)
    return TwoQutritState.from_amplitudes({(0, 0): 1.0, (2, 2): ratio})


def perturbative_amplitudes(eps: float) -> tuple[complex, complex]:
    """Raw (unnormalized) |00> and |22> amplitudes (1 - ε², -i√2·ε)."""
    return complex(1 - eps**2), -1j * math.sqrt(2) * eps


def perturbative_target(eps: float) -> TwoQutritState:
    """Perturbative reference state, renormalized to unit norm.

    The raw amplitudes from `perturbative_amplitudes` carry a norm of 1 + O(ε²).
    """
    ground, pair = perturbative_amplitudes(eps)
    return TwoQutritState.from_amplitudes({(0, 0): ground, (2, 2): pair})


def second_order_target(eps: float) -> TwoQutritState:
    """Second-order expansion of exp(iεM) on the ground state, normalized.

    M has matrix element 2 between the (0, 0) and (2, 2) codewords, which gives
    (1 - 2ε²)|00> + 2iε|22>.
    """
    return TwoQutritState.from_amplitudes({(0, 0): 1 - 2 * eps**2, (2, 2): 2j * eps})


def exact_target(eps: float) -> TwoQutritState:
    """Exact codespace evolution cos(2ε)|00> + i·sin(2ε)|22>."""
    return TwoQutritState.from_amplitudes(
        {(0, 0): math.cos(2 * eps), (2, 2): 1j * math.sin(2 * eps)},
    )


def concurrence(state: TwoQutritState) -> float:
    """I-concurrence √(2·(1 - Tr ρ_A²)) of a pure two-mode state."""
    rho_a = state.reduced_density_matrix()
    purity = float(np.real(np.trace(rho_a @ rho_a)))
    return math.sqrt(max(0.0, 2 * (1 - purity)))


def approximate_concurrence(g: float, omega_m: float) -> float:
    """Leading-order concurrence √2·g/ω_m as quoted alongside the theory state."""
    return math.sqrt(2) * g / omega_m
