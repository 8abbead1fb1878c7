# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gates and circuits over the fixed gate set {X, √X, RX, RZ, U1, S, S†, CNOT}.

Angle conventions:

    U1(λ) = diag(1, e^{iλ})        S = U1(π/2),  S† = U1(-π/2)
    RX(θ) = exp(-iθX/2)            RZ(θ) = exp(-iθZ/2)
    √X = e^{iπ/4}·RX(π/2)          CNOT(c, t) flips t when c is 1

A circuit's unitary is e^{i·global_phase} times the product of its gates, the first
gate acting first.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from enum import Enum
from typing import ClassVar

from pydantic import (
    BaseModel,
    ConfigDict,
    NonNegativeInt,
    PositiveInt,
    computed_field,
    model_validator,
)

logger = logging.getLogger(__name__)


class GateKind(str, Enum):
    """Gate names, spelled as in OpenQASM 2.0."""

    X = "x"
    SQRT_X = "sx"
    RX = "rx"
    RZ = "rz"
    U1 = "u1"
    S = "s"
    S_DAGGER = "sdg"
    CNOT = "cx"


PARAMETRIC_KINDS = frozenset({GateKind.RX, GateKind.RZ, GateKind.U1})
DIAGONAL_KINDS = frozenset({GateKind.U1, GateKind.RZ, GateKind.S, GateKind.S_DAGGER})
X_AXIS_KINDS = frozenset({GateKind.X, GateKind.SQRT_X, GateKind.RX})


class Gate(BaseModel):
    """One gate application."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    kind: GateKind
    target: NonNegativeInt
    control: NonNegativeInt | None = None
    angle: float | None = None

    @model_validator(mode="after")
    def check_operands(self) -> Gate:
        """Check control and angle against the gate kind."""
        if self.kind is GateKind.CNOT:
            if self.control is None:
                msg = "CNOT needs a control qubit"
                raise ValueError(msg)
            if self.control == self.target:
                msg = f"CNOT control and target are both qubit {self.target}"
                raise ValueError(msg)
        elif self.control is not None:
            msg = f"Gate {self.kind.value} takes no control qubit"
            raise ValueError(msg)

        if self.kind in PARAMETRIC_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                msg = f"Gate {self.kind.value} needs a finite angle, got {self.angle}"
                raise ValueError(msg)
        elif self.angle is not None:
            msg = f"Gate {self.kind.value} takes no angle"
            raise ValueError(msg)
        return self

    @classmethod
    def x(cls, target: int) -> Gate:
        """Pauli X."""
        return cls(kind=GateKind.X, target=target)

    @classmethod
    def sqrt_x(cls, target: int) -> Gate:
        """√X."""
        return cls(kind=GateKind.SQRT_X, target=target)

    @classmethod
    def rx(cls, target: int, angle: float) -> Gate:
        """RX(θ) = exp(-iθX/2)."""
        return cls(kind=GateKind.RX, target=target, angle=angle)

    @classmethod
    def rz(cls, target: int, angle: float) -> Gate:
        """RZ(θ) = exp(-iθZ/2)."""
        return cls(kind=GateKind.RZ, target=target, angle=angle)

    @classmethod
    def u1(cls, target: int, angle: float) -> Gate:
        """U1(λ) = diag(1, e^{iλ})."""
        return cls(kind=GateKind.U1, target=target, angle=angle)

    @classmethod
    def s(cls, target: int) -> Gate:
        """S = U1(π/2)."""
        return cls(kind=GateKind.S, target=target)

    @classmethod
    def s_dagger(cls, target: int) -> Gate:
        """S† = U1(-π/2)."""
        return cls(kind=GateKind.S_DAGGER, target=target)

    @classmethod
    def cnot(cls, control: int, target: int) -> Gate:
        """CNOT with the given control and target."""
        return cls(kind=GateKind.CNOT, target=target, control=control)

    @property
    def qubits(self) -> tuple[int, ...]:
        """Qubits acted on, control first."""
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)

    @property
    def is_two_qubit(self) -> bool:
        """True for CNOT."""
        return self.kind is GateKind.CNOT

    def inverse(self) -> tuple[Gate, float]:
        """Inverse gate and the global phase it leaves behind.

        Every kind inverts within the gate set exactly, except √X whose inverse is
        e^{-iπ/4}·RX(-π/2).
        """
        match self.kind:
            case GateKind.X | GateKind.CNOT:
                return self, 0.0
            case GateKind.S:
                return Gate.s_dagger(self.target), 0.0
            case GateKind.S_DAGGER:
                return Gate.s(self.target), 0.0
            case GateKind.SQRT_X:
                return Gate.rx(self.target, -math.pi / 2), -math.pi / 4
            case _:
                return self.model_copy(update={"angle": -(self.angle or 0.0)}), 0.0

    def __str__(self) -> str:
        angle = "" if self.angle is None else f"({self.angle!r})"
        qubits = ",".join(f"q{q}" for q in self.qubits)
        return f"{self.kind.value}{angle} {qubits}"


class GateCounts(BaseModel):
    """Gate tallies of a circuit."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    cnot: NonNegativeInt
    single_qubit: NonNegativeInt
    by_kind: dict[str, NonNegativeInt]

    @computed_field
    @property
    def total(self) -> int:
        """All gates."""
        return self.cnot + self.single_qubit


def normalize_phase(phase: float) -> float:
    """Map a phase into [-π, π]."""
    return math.remainder(phase, 2 * math.pi)


class Circuit(BaseModel):
    """Immutable ordered gate list with a tracked global phase."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    n_qubits: PositiveInt
    gates: tuple[Gate, ...] = ()
    global_phase: float = 0.0

    @model_validator(mode="after")
    def check_gate_indices(self) -> Circuit:
        """Check that every gate addresses an existing qubit."""
        for position, gate in enumerate(self.gates):
            if max(gate.qubits) >= self.n_qubits:
                msg = (
                    f"Gate {position} ({gate}) addresses a qubit beyond the "
                    f"{self.n_qubits}-qubit register"
                )
                raise ValueError(msg)
        return self

    @classmethod
    def from_gates(
        cls,
        n_qubits: int,
        gates: tuple[Gate, ...] | list[Gate],
        global_phase: float = 0.0,
    ) -> Circuit:
        """Build a circuit, normalizing the phase."""
        return cls(
            n_qubits=n_qubits,
            gates=tuple(gates),
            global_phase=normalize_phase(global_phase),
        )

    def then(self, other: Circuit) -> Circuit:
        """Run this circuit, then `other`."""
        if other.n_qubits != self.n_qubits:
            msg = f"Cannot join {self.n_qubits}- and {other.n_qubits}-qubit circuits"
            logger.error(msg)
            raise ValueError(msg)
        return Circuit.from_gates(
            self.n_qubits,
            self.gates + other.gates,
            self.global_phase + other.global_phase,
        )

    def __add__(self, other: Circuit) -> Circuit:
        return self.then(other)

    def __len__(self) -> int:
        return len(self.gates)

    def with_phase(self, delta: float) -> Circuit:
        """Copy with `delta` added to the global phase."""
        return Circuit.from_gates(self.n_qubits, self.gates, self.global_phase + delta)

    def inverse(self) -> Circuit:
        """Adjoint circuit, phase included."""
        gates: list[Gate] = []
        phase = -self.global_phase
        for gate in reversed(self.gates):
            inverse, delta = gate.inverse()
            gates.append(inverse)
            phase += delta
        return Circuit.from_gates(self.n_qubits, gates, phase)

    def counts(self) -> GateCounts:
        """Tally gates by kind."""
        by_kind = Counter(gate.kind.value for gate in self.gates)
        cnot = by_kind.get(GateKind.CNOT.value, 0)
        return GateCounts(
            cnot=cnot,
            single_qubit=len(self.gates) - cnot,
            by_kind=dict(sorted(by_kind.items())),
        )

    def to_json(self) -> str:
        """Gate array with kind, target, control and angle fields."""
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, data: str) -> Circuit:
        """Inverse of `to_json`."""
        return cls.model_validate_json(data)

    def __str__(self) -> str:
        lines = [f"circuit on {self.n_qubits} qubits, phase {self.global_phase!r}"]
        lines.extend(f"  {gate}" for gate in self.gates)
        return "\n".join(lines)
