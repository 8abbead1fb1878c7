# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Shot sampling, noise injection, readout mitigation and post-selection.

All randomness comes from counter-based Philox streams. A seed is either an integer
or a `numpy.random.SeedSequence`; batches and sweep points get their own spawned
streams, so results depend only on the master seed and the batch layout.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Annotated, ClassVar, TypeAlias

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveInt,
    model_validator,
)

from gravsqueeze.bosonmap import BosonQubitMap
from gravsqueeze.compiler.circuit import Circuit, Gate
from gravsqueeze.constants import MAX_DENSE_QUBITS
from gravsqueeze.errors import (
    DegeneratePostSelectionError,
    DimensionError,
    SingularCalibrationError,
)
from gravsqueeze.pauli import PauliString
from gravsqueeze.simulator import Statevector, prefix_states, resume_with_injections
from gravsqueeze.util import bitstring_to_index, index_to_bitstring

logger = logging.getLogger(__name__)

Seed: TypeAlias = int | np.random.SeedSequence
ReadoutRate = Annotated[float, Field(ge=0.0, lt=0.5)]
Rate = Annotated[float, Field(ge=0.0, le=1.0)]
ErrorPattern: TypeAlias = dict[int, PauliString]

SINGULAR_ATOL = 1e-12
TRAJECTORY_BATCH = 1024
_FACTORS = "IXYZ"


def make_rng(seed: Seed) -> np.random.Generator:
    """Philox generator for a seed."""
    return np.random.Generator(np.random.Philox(seed))


class ReadoutNoiseModel(BaseModel):
    """Independent per-qubit assignment errors.

    p01 is the probability of reading 1 when the qubit is 0, p10 of reading 0
    when it is 1.
    """

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    p01: tuple[ReadoutRate, ...]
    p10: tuple[ReadoutRate, ...]

    @model_validator(mode="after")
    def check_lengths(self) -> ReadoutNoiseModel:
        """Check that both rate lists cover the same qubits."""
        if len(self.p01) != len(self.p10) or not self.p01:
            msg = (
                f"p01 and p10 need one entry per qubit, got {len(self.p01)} "
                f"and {len(self.p10)}"
            )
            raise ValueError(msg)
        return self

    @classmethod
    def uniform(cls, rate: float, n_qubits: int) -> ReadoutNoiseModel:
        """Same rate for both error directions on every qubit."""
        return cls(p01=(rate,) * n_qubits, p10=(rate,) * n_qubits)

    @property
    def n_qubits(self) -> int:
        """Qubits covered."""
        return len(self.p01)

    @property
    def is_noiseless(self) -> bool:
        """True if every rate is zero."""
        return not any(self.p01) and not any(self.p10)

    def calibration_matrix(self, qubit: int) -> np.ndarray:
        """A[read, true] for one qubit; columns sum to 1."""
        p01, p10 = self.p01[qubit], self.p10[qubit]
        return np.array([[1 - p01, p10], [p01, 1 - p10]])

    def reading_probability(self, read: str, true: str) -> float:
        """Probability of reading bitstring `read` when `true` was prepared."""
        probability = 1.0
        for qubit, (r, t) in enumerate(zip(read, true)):
            probability *= self.calibration_matrix(qubit)[int(r), int(t)]
        return float(probability)


class GateNoiseModel(BaseModel):
    """Depolarizing error probability after each gate."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    p1: Rate = 0.0
    p2: Rate = 0.0

    @property
    def is_noiseless(self) -> bool:
        """True if no gate can fail."""
        return self.p1 == 0 and self.p2 == 0

    def rate(self, gate: Gate) -> float:
        """Error probability of one gate."""
        return self.p2 if gate.is_two_qubit else self.p1


class CountsTable(BaseModel):
    """Histogram of measured bitstrings (qubit 0 leftmost)."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    n_qubits: PositiveInt
    counts: dict[str, NonNegativeInt]
    shots: NonNegativeInt

    @model_validator(mode="after")
    def check_counts(self) -> CountsTable:
        """Check bitstring widths and that counts add up to the shots."""
        for bits in self.counts:
            if len(bits) != self.n_qubits or set(bits) - {"0", "1"}:
                msg = f"'{bits}' is not a {self.n_qubits}-bit string"
                raise ValueError(msg)
        total = sum(self.counts.values())
        if total != self.shots:
            msg = f"Counts add up to {total}, expected {self.shots} shots"
            raise ValueError(msg)
        return self

    @classmethod
    def from_outcomes(cls, outcomes: np.ndarray, n_qubits: int) -> CountsTable:
        """Tally basis indices."""
        indices, tallies = np.unique(outcomes, return_counts=True)
        counts = {
            index_to_bitstring(int(index), n_qubits): int(tally)
            for index, tally in zip(indices, tallies)
        }
        return cls(
            n_qubits=n_qubits,
            counts=dict(sorted(counts.items())),
            shots=int(tallies.sum()),
        )

    def get(self, bits: str) -> int:
        """Count of one bitstring, 0 if never seen."""
        return self.counts.get(bits, 0)

    def probabilities(self) -> np.ndarray:
        """Empirical distribution indexed by basis index."""
        vector = np.zeros(1 << self.n_qubits)
        for bits, count in self.counts.items():
            vector[bitstring_to_index(bits)] = count
        return vector / self.shots if self.shots else vector

    def to_json(self) -> str:
        """{bitstring: count} as JSON."""
        return json.dumps(self.counts, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        """bitstring,count rows with a header."""
        body = (f"{bits},{count}" for bits, count in sorted(self.counts.items()))
        rows = ["bitstring,count", *body]
        return "\n".join(rows) + "\n"


def _apply_readout(
    outcomes: np.ndarray,
    noise: ReadoutNoiseModel,
    rng: np.random.Generator,
) -> np.ndarray:
    if noise.is_noiseless:
        return outcomes
    draws = rng.random((outcomes.size, noise.n_qubits))
    flipped = outcomes.copy()
    for qubit in range(noise.n_qubits):
        bit = (outcomes >> qubit) & 1
        threshold = np.where(bit == 1, noise.p10[qubit], noise.p01[qubit])
        flipped ^= (draws[:, qubit] < threshold).astype(np.int64) << qubit
    return flipped


def sample_distribution(
    probabilities: np.ndarray,
    shots: int,
    noise: ReadoutNoiseModel,
    seed: Seed,
) -> CountsTable:
    """Draw shots from a probability vector, then apply readout errors.

    Raises:
        ValueError: If shots is not positive.
        DimensionError: If the noise model covers a different register.
    """
    if shots < 1:
        msg = f"Need at least one shot, got {shots}"
        logger.error(msg)
        raise ValueError(msg)
    n_qubits = int(probabilities.size).bit_length() - 1
    if noise.n_qubits != n_qubits:
        msg = f"Noise model covers {noise.n_qubits} qubits, state has {n_qubits}"
        logger.error(msg)
        raise DimensionError(msg)

    weights = np.clip(probabilities, 0.0, None)
    weights = weights / weights.sum()
    rng = make_rng(seed)
    outcomes = rng.choice(weights.size, size=shots, p=weights).astype(np.int64)
    return CountsTable.from_outcomes(_apply_readout(outcomes, noise, rng), n_qubits)


def sample(
    state: Statevector,
    shots: int,
    noise: ReadoutNoiseModel,
    seed: Seed,
) -> CountsTable:
    """Measure every qubit `shots` times with readout errors."""
    return sample_distribution(state.probabilities(), shots, noise, seed)


def _random_pauli(qubits: tuple[int, ...], choice: int, n_qubits: int) -> PauliString:
    factors = {q: _FACTORS[(choice >> (2 * i)) & 3] for i, q in enumerate(qubits)}
    return PauliString.from_factors(factors, n_qubits)


def apply_gate_noise(
    circuit: Circuit,
    noise: GateNoiseModel,
    seed: Seed,
    trajectories: int,
) -> list[ErrorPattern]:
    """Draw one error pattern per trajectory.

    After each gate, with the model's probability, a uniformly random non-identity
    Pauli on the gate's qubits is inserted. Pattern keys follow
    `simulator.run_with_injections`.
    """
    rng = make_rng(seed)
    gates = circuit.gates
    rates = np.array([noise.rate(gate) for gate in gates])
    hits = rng.random((trajectories, len(gates))) < rates
    picks = rng.random((trajectories, len(gates)))
    patterns: list[ErrorPattern] = []
    for row in range(trajectories):
        pattern: ErrorPattern = {}
        for position in np.flatnonzero(hits[row]):
            gate = gates[position]
            n_choices = 4 ** len(gate.qubits) - 1
            choice = 1 + int(picks[row, position] * n_choices)
            pattern[int(position) + 1] = _random_pauli(
                gate.qubits,
                min(choice, n_choices),
                circuit.n_qubits,
            )
        patterns.append(pattern)
    return patterns


class NoisyDistribution(BaseModel):
    """Trajectory-averaged outcome distribution with standard errors."""

    model_config: ClassVar[ConfigDict] = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
    )

    probabilities: np.ndarray
    stderr: np.ndarray
    trajectories: PositiveInt
    error_free_fraction: NonNegativeFloat

    def probability(self, bits: str) -> tuple[float, float]:
        """Mean probability of a bitstring and its standard error."""
        index = bitstring_to_index(bits)
        return float(self.probabilities[index]), float(self.stderr[index])


def _pattern_key(pattern: ErrorPattern) -> tuple[tuple[int, int, int], ...]:
    return tuple(sorted((k, p.x_mask, p.z_mask) for k, p in pattern.items()))


def simulate_noisy(  # noqa: PLR0913
    circuit: Circuit,
    initial: Statevector,
    noise: GateNoiseModel,
    trajectories: int,
    seed: Seed,
    workers: int = 1,
) -> NoisyDistribution:
    """Average the outcome distribution over gate-noise trajectories.

    Trajectories run in batches of 1024 with one spawned stream per batch. Prefix
    states and results per distinct error pattern are cached.
    """
    if trajectories < 1:
        msg = f"Need at least one trajectory, got {trajectories}"
        logger.error(msg)
        raise ValueError(msg)

    prefixes = prefix_states(circuit, initial)
    cache: dict[tuple[tuple[int, int, int], ...], np.ndarray] = {}

    def outcome(pattern: ErrorPattern) -> np.ndarray:
        key = _pattern_key(pattern)
        if key not in cache:
            start = min(pattern, default=len(circuit.gates))
            amplitudes = resume_with_injections(
                circuit,
                prefixes[start],
                start,
                pattern,
            )
            cache[key] = np.abs(amplitudes) ** 2
        return cache[key]

    sizes = [TRAJECTORY_BATCH] * (trajectories // TRAJECTORY_BATCH)
    if trajectories % TRAJECTORY_BATCH:
        sizes.append(trajectories % TRAJECTORY_BATCH)
    root = seed if isinstance(seed, np.random.SeedSequence) else None
    root = root or np.random.SeedSequence(seed)
    streams = root.spawn(len(sizes))

    def run_batch(job: tuple[np.random.SeedSequence, int]) -> tuple[np.ndarray, ...]:
        stream, size = job
        total = np.zeros(1 << circuit.n_qubits)
        squares = np.zeros_like(total)
        clean = 0
        for pattern in apply_gate_noise(circuit, noise, stream, size):
            probabilities = outcome(pattern)
            total += probabilities
            squares += probabilities**2
            clean += not pattern
        return total, squares, np.array(clean)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        batches = list(executor.map(run_batch, zip(streams, sizes)))

    total = sum(batch[0] for batch in batches)
    squares = sum(batch[1] for batch in batches)
    clean = int(sum(int(batch[2]) for batch in batches))
    mean = total / trajectories
    if trajectories > 1:
        variance = np.clip(squares - trajectories * mean**2, 0.0, None) / (
            trajectories - 1
        )
        stderr = np.sqrt(variance / trajectories)
    else:
        stderr = np.zeros_like(mean)

    logger.debug(
        "%d trajectories, %d distinct error patterns, %.4f error free",
        trajectories,
        len(cache),
        clean / trajectories,
    )
    return NoisyDistribution(
        probabilities=mean,
        stderr=stderr,
        trajectories=trajectories,
        error_free_fraction=clean / trajectories,
    )


class MitigationReport(BaseModel):
    """Diagnostics of a calibration-matrix inversion."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    condition_number: float
    negativity_mass: NonNegativeFloat
    clipped: bool


class MitigatedDistribution(BaseModel):
    """Quasi-probabilities after readout mitigation."""

    model_config: ClassVar[ConfigDict] = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
    )

    n_qubits: PositiveInt
    quasi_probabilities: np.ndarray
    covariance: np.ndarray | None
    shots: PositiveInt
    report: MitigationReport

    def get(self, bits: str) -> float:
        """Quasi-probability of one bitstring."""
        return float(self.quasi_probabilities[bitstring_to_index(bits)])

    def as_dict(self) -> dict[str, float]:
        """Nonzero entries keyed by bitstring."""
        return {
            index_to_bitstring(index, self.n_qubits): float(value)
            for index, value in enumerate(self.quasi_probabilities)
            if value != 0
        }


def _inverse_calibrations(noise: ReadoutNoiseModel) -> list[np.ndarray]:
    inverses: list[np.ndarray] = []
    for qubit in range(noise.n_qubits):
        matrix = noise.calibration_matrix(qubit)
        if abs(np.linalg.det(matrix)) < SINGULAR_ATOL:
            msg = f"Calibration matrix of qubit {qubit} is singular"
            logger.error(msg)
            raise SingularCalibrationError(msg)
        inverses.append(np.linalg.inv(matrix))
    return inverses


def _apply_per_qubit(vector: np.ndarray, matrices: list[np.ndarray]) -> np.ndarray:
    n = len(matrices)
    tensor = vector.reshape((2,) * n)
    for qubit, matrix in enumerate(matrices):
        axis = n - 1 - qubit
        tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis)
    return tensor.reshape(-1)


def mitigate_readout(
    counts: CountsTable,
    noise: ReadoutNoiseModel,
    *,
    clip: bool = False,
) -> MitigatedDistribution:
    """Invert the tensor-product calibration matrix on the empirical distribution.

    Negative entries are kept unless `clip` is set, in which case they are zeroed
    and the rest renormalized. The covariance is the multinomial covariance of the
    counts pushed through the inverse.

    Raises:
        SingularCalibrationError: If a per-qubit calibration matrix is singular.
        DimensionError: If noise model and counts cover different registers.
    """
    if counts.n_qubits != noise.n_qubits:
        msg = f"Noise model covers {noise.n_qubits} qubits, counts {counts.n_qubits}"
        logger.error(msg)
        raise DimensionError(msg)

    inverses = _inverse_calibrations(noise)
    empirical = counts.probabilities()
    quasi = _apply_per_qubit(empirical, inverses)

    covariance: np.ndarray | None = None
    if counts.n_qubits <= MAX_DENSE_QUBITS:
        # basis index bit k is qubit k, so qubit 0 is the last Kronecker factor
        full = np.array([[1.0]])
        for inverse in reversed(inverses):
            full = np.kron(full, inverse)
        spread = np.diag(empirical) - np.outer(empirical, empirical)
        multinomial = spread / counts.shots
        covariance = full @ multinomial @ full.T

    negativity = float(-quasi[quasi < 0].sum())
    condition = math.prod(
        float(np.linalg.cond(noise.calibration_matrix(q)))
        for q in range(noise.n_qubits)
    )
    if clip:
        quasi = np.clip(quasi, 0.0, None)
        quasi = quasi / quasi.sum()
    if negativity > 0:
        logger.debug("Mitigation left %.3e negative quasi-probability", negativity)

    return MitigatedDistribution(
        n_qubits=counts.n_qubits,
        quasi_probabilities=quasi,
        covariance=covariance,
        shots=counts.shots,
        report=MitigationReport(
            condition_number=condition,
            negativity_mass=negativity,
            clipped=clip,
        ),
    )


class PostSelection(BaseModel):
    """Weights of the ground and pair codewords after discarding everything else.

    `ground_raw` and `pair_raw` are the retained weights before renormalization,
    with `covariance` their 2x2 covariance when known.
    """

    model_config: ClassVar[ConfigDict] = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
    )

    ground_bits: str
    pair_bits: str
    ground_raw: float
    pair_raw: float
    discard_fraction: Annotated[float, Field(ge=0.0, le=1.0)]
    effective_shots: NonNegativeFloat
    covariance: np.ndarray | None = None

    @property
    def retained(self) -> float:
        """Weight kept before renormalization."""
        return self.ground_raw + self.pair_raw

    @property
    def ground_weight(self) -> float:
        """Renormalized ground-codeword weight."""
        return self.ground_raw / self.retained

    @property
    def pair_weight(self) -> float:
        """Renormalized pair-codeword weight."""
        return self.pair_raw / self.retained


def _multinomial_pair(ground: float, pair: float, shots: int) -> np.ndarray:
    return (
        np.array(
            [
                [ground * (1 - ground), -ground * pair],
                [-ground * pair, pair * (1 - pair)],
            ],
        )
        / shots
    )


def _degenerate(retained: float) -> None:
    if retained <= 0:
        msg = f"Post-selection retained weight {retained!r}, nothing to renormalize"
        logger.error(msg)
        raise DegeneratePostSelectionError(msg)


def postselect(
    data: CountsTable | MitigatedDistribution,
    boson_map: BosonQubitMap,
) -> PostSelection:
    """Keep only the encoded ground and pair states.

    For counts the discard fraction is the share of discarded shots; for mitigated
    quasi-probabilities it is the removed weight.

    Raises:
        DegeneratePostSelectionError: If nothing is retained.
    """
    ground_bits, pair_bits = boson_map.ground_codeword(), boson_map.pair_codeword()

    if isinstance(data, CountsTable):
        kept = data.get(ground_bits) + data.get(pair_bits)
        _degenerate(kept)
        ground = data.get(ground_bits) / data.shots
        pair = data.get(pair_bits) / data.shots
        return PostSelection(
            ground_bits=ground_bits,
            pair_bits=pair_bits,
            ground_raw=ground,
            pair_raw=pair,
            discard_fraction=1 - kept / data.shots,
            effective_shots=kept,
            covariance=_multinomial_pair(ground, pair, data.shots),
        )

    ground, pair = data.get(ground_bits), data.get(pair_bits)
    _degenerate(ground + pair)
    covariance = None
    if data.covariance is not None:
        indices = [bitstring_to_index(ground_bits), bitstring_to_index(pair_bits)]
        covariance = data.covariance[np.ix_(indices, indices)]
    return PostSelection(
        ground_bits=ground_bits,
        pair_bits=pair_bits,
        ground_raw=ground,
        pair_raw=pair,
        discard_fraction=min(1.0, max(0.0, 1 - (ground + pair))),
        effective_shots=data.shots * min(1.0, ground + pair),
        covariance=covariance,
    )


def mitigate_postselected(
    counts: CountsTable,
    noise: ReadoutNoiseModel,
    boson_map: BosonQubitMap,
) -> PostSelection:
    """Post-select first, then mitigate with the calibration restricted to the kept
    codewords.

    Raises:
        DegeneratePostSelectionError: If nothing is retained.
        SingularCalibrationError: If the reduced calibration matrix is singular.
    """
    ground_bits, pair_bits = boson_map.ground_codeword(), boson_map.pair_codeword()
    kept = counts.get(ground_bits) + counts.get(pair_bits)
    _degenerate(kept)

    codewords = (ground_bits, pair_bits)
    reduced = np.array(
        [
            [noise.reading_probability(read, true) for true in codewords]
            for read in codewords
        ],
    )
    if abs(np.linalg.det(reduced)) < SINGULAR_ATOL:
        msg = "Calibration matrix restricted to the kept codewords is singular"
        logger.error(msg)
        raise SingularCalibrationError(msg)

    observed = np.array([counts.get(b) for b in codewords]) / counts.shots
    inverse = np.linalg.inv(reduced)
    ground, pair = inverse @ observed
    _degenerate(float(ground + pair))
    covariance = inverse @ _multinomial_pair(*observed, counts.shots) @ inverse.T
    return PostSelection(
        ground_bits=ground_bits,
        pair_bits=pair_bits,
        ground_raw=float(ground),
        pair_raw=float(pair),
        discard_fraction=1 - kept / counts.shots,
        effective_shots=kept,
        covariance=covariance,
    )


class P0Estimate(BaseModel):
    """Post-selected ground-state probability with its standard error."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    value: Annotated[float, Field(ge=0.0, le=1.0)]
    stderr: NonNegativeFloat
    binomial_stderr: NonNegativeFloat
    propagated_stderr: NonNegativeFloat | None = None


def estimate_p0(selection: PostSelection) -> P0Estimate:
    """Ratio of the ground weight to the retained weight.

    The error is the larger of the binomial error on the effective shots and the
    delta-method error propagated from the weight covariance.

    Raises:
        DegeneratePostSelectionError: If no shots were retained.
    """
    if selection.effective_shots <= 0 or selection.retained <= 0:
        msg = "Cannot estimate P0 from an empty post-selection"
        logger.error(msg)
        raise DegeneratePostSelectionError(msg)

    value = min(1.0, max(0.0, selection.ground_weight))
    binomial = math.sqrt(value * (1 - value) / selection.effective_shots)

    propagated: float | None = None
    if selection.covariance is not None:
        a, b = selection.ground_raw, selection.pair_raw
        jacobian = np.array([b, -a]) / (a + b) ** 2
        variance = float(jacobian @ selection.covariance @ jacobian)
        propagated = math.sqrt(max(variance, 0.0))

    return P0Estimate(
        value=value,
        stderr=max(binomial, propagated or 0.0),
        binomial_stderr=binomial,
        propagated_stderr=propagated,
    )
