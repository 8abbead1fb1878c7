# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Epsilon sweeps, result bundles and the verification suite."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Annotated, Any, ClassVar

import numpy as np
import scipy.linalg
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)

from gravsqueeze.bosonmap import (
    BosonQubitMap,
    decode_bitstring,
    encode_fock,
    map_squared_pair_hamiltonian,
    squared_pair_generator,
)
from gravsqueeze.compiler.circuit import Circuit
from gravsqueeze.compiler.decompose import (
    compile_full_unitary,
    compile_pauli_exponential,
    prepare_ground_state,
    term_angles,
)
from gravsqueeze.compiler.diagonalize import compile_via_diagonalization
from gravsqueeze.compiler.peephole import peephole_optimize
from gravsqueeze.compiler.qasm import export_qasm, parse_qasm
from gravsqueeze.constants import (
    BACKENDS,
    DEFAULT_SWEEP,
    GATE_ERROR_RATE_1Q,
    GATE_ERROR_RATE_2Q,
    QUOTED_COUPLING_HZ,
    READOUT_ERROR_RATE,
    UNITARY_ATOL,
)
from gravsqueeze.errors import ConfigError
from gravsqueeze.measurement import (
    CountsTable,
    GateNoiseModel,
    PostSelection,
    ReadoutNoiseModel,
    estimate_p0,
    mitigate_postselected,
    mitigate_readout,
    postselect,
    sample_distribution,
    simulate_noisy,
)
from gravsqueeze.pauli import PauliSum, commutes, to_dense_matrix
from gravsqueeze.physics import (
    PhysicalParams,
    concurrence,
    coupling_discrepancy,
    coupling_g,
    epsilon as epsilon_from_coupling,
    exact_target,
    perturbative_target,
)
from gravsqueeze.simulator import (
    Statevector,
    circuit_unitary,
    codeword_probabilities_csv,
    embed_qutrits,
    exact_evolution_oracle,
    fidelity,
    p0_fidelity_proxy,
    reduce_to_qutrits,
    run,
    unitary_deviation,
)
from gravsqueeze.util import (
    bitstring_to_index,
    get_default_output_dir,
    get_run_dir,
    index_to_bitstring,
)

logger = logging.getLogger(__name__)

Probability = Annotated[float, Field(ge=0.0, le=1.0)]

# Coupling ratios outside this band are reported as a discrepancy
DISCREPANCY_BAND = (0.5, 2.0)

# Epsilon used for the epsilon-independent gate count checks
COUNT_CHECK_EPSILON = 0.1

COMMUTATOR_ATOL = 1e-13
COEFFICIENT_ATOL = 1e-14
PER_TERM_CNOTS = 6
PER_TERM_MAX_SINGLE = 9


class SweepSpec(BaseModel):
    """Epsilon grid from start to stop, log spaced by default."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    start: float
    stop: float
    points: NonNegativeInt
    log: bool = True

    @model_validator(mode="after")
    def check_bounds(self) -> SweepSpec:
        """Log spacing needs positive bounds."""
        if self.log and self.points and (self.start <= 0 or self.stop <= 0):
            msg = (
                f"Log-spaced sweep needs positive bounds, got {self.start} "
                f"to {self.stop}"
            )
            raise ValueError(msg)
        return self

    @classmethod
    def parse(cls, text: str) -> SweepSpec:
        """Parse 'start:stop:points'."""
        parts = text.split(":")
        if len(parts) != 3:  # noqa: PLR2004
            msg = f"Sweep '{text}' must look like start:stop:points"
            raise ValueError(msg)
        start, stop, points = parts
        return cls(start=float(start), stop=float(stop), points=int(points))

    def values(self) -> tuple[float, ...]:
        """The epsilons of the sweep."""
        if self.points == 0:
            return ()
        if self.points == 1:
            return (self.start,)
        spacing = np.geomspace if self.log else np.linspace
        return tuple(float(x) for x in spacing(self.start, self.stop, self.points))


class ExperimentConfig(BaseModel):
    """Everything a run depends on. Echoed into every run directory."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    epsilon: float | None = None
    sweep: SweepSpec | None = None
    omega_m: PositiveFloat | None = None
    d: PositiveFloat | None = None
    t: NonNegativeFloat | None = None

    backend: BACKENDS = "peephole"
    sampling: bool = False
    shots: PositiveInt = 100_000
    trajectories: PositiveInt = 2048
    seed: NonNegativeInt = 0
    readout_error: Annotated[float, Field(ge=0.0, lt=0.5)] = READOUT_ERROR_RATE
    gate_error_1q: Probability = GATE_ERROR_RATE_1Q
    gate_error_2q: Probability = GATE_ERROR_RATE_2Q
    mitigate: bool = True
    postselect: bool = True
    postselect_first: bool = False
    workers: PositiveInt = 4
    out: Path = Field(default_factory=get_default_output_dir)

    @field_validator("sweep", mode="before")
    @classmethod
    def parse_sweep(cls, value: object) -> object:
        """Accept the 'start:stop:points' shorthand."""
        if isinstance(value, str):
            return SweepSpec.parse(value)
        return value

    @model_validator(mode="after")
    def check_epsilon_source(self) -> ExperimentConfig:
        """Epsilon comes from physical parameters or is given directly, not both."""
        physical = (self.omega_m, self.d, self.t)
        given = [x is not None for x in physical]
        if any(given) and not all(given):
            msg = "Physical mode needs omega_m, d and t together"
            raise ConfigError(msg)
        if all(given) and (self.epsilon is not None or self.sweep is not None):
            msg = "Give either physical parameters or epsilon/sweep, not both"
            raise ConfigError(msg)
        if self.epsilon is not None and self.sweep is not None:
            msg = "Give either a single epsilon or a sweep, not both"
            raise ConfigError(msg)
        return self

    @model_validator(mode="after")
    def check_pipeline_flags(self) -> ExperimentConfig:
        """Post-selecting first only makes sense when post-selecting at all."""
        if self.postselect_first and not self.postselect:
            msg = "postselect_first needs postselect to be enabled"
            raise ConfigError(msg)
        return self

    @property
    def physical_params(self) -> PhysicalParams | None:
        """Physical parameters, if the run is in physical mode."""
        if self.omega_m is None or self.d is None or self.t is None:
            return None
        return PhysicalParams(omega_m=self.omega_m, d=self.d, t=self.t)

    def epsilons(self) -> tuple[float, ...]:
        """Epsilons to run, in sweep order."""
        params = self.physical_params
        if params is not None:
            return (epsilon_from_coupling(coupling_g(params), params.t),)
        if self.epsilon is not None:
            return (self.epsilon,)
        if self.sweep is not None:
            return self.sweep.values()
        start, stop, points = DEFAULT_SWEEP
        return SweepSpec(start=start, stop=stop, points=points).values()

    def readout_model(self, n_qubits: int) -> ReadoutNoiseModel:
        """Uniform readout errors at the configured rate."""
        return ReadoutNoiseModel.uniform(self.readout_error, n_qubits)

    def gate_model(self) -> GateNoiseModel:
        """Depolarizing errors at the configured rates."""
        return GateNoiseModel(p1=self.gate_error_1q, p2=self.gate_error_2q)


class EpsilonRecord(BaseModel):
    """Results for one point of a sweep."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    epsilon: float
    backend: str
    cnot_count: NonNegativeInt
    single_qubit_count: NonNegativeInt
    unitary_deviation: NonNegativeFloat
    p0_exact: Probability
    p0_closed_form: Probability
    reference_fidelity: Probability
    concurrence: Probability
    leakage: Probability
    p0_raw: Probability | None = None
    p0_estimate: Probability | None = None
    p0_stderr: NonNegativeFloat | None = None
    discard_fraction: Probability | None = None
    removed_weight: float | None = None
    negativity_mass: NonNegativeFloat | None = None
    condition_number: NonNegativeFloat | None = None
    error_free_fraction: Probability | None = None


class PointResult(BaseModel):
    """One sweep point with the artifacts behind its record."""

    model_config: ClassVar[ConfigDict] = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
    )

    record: EpsilonRecord
    circuit: Circuit
    state: Statevector
    counts: CountsTable | None = None


class ExperimentResult(BaseModel):
    """A finished run, ready to be written out."""

    model_config: ClassVar[ConfigDict] = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
    )

    config: ExperimentConfig
    points: tuple[PointResult, ...]
    summary: dict[str, Any]

    @property
    def records(self) -> tuple[EpsilonRecord, ...]:
        """Per-epsilon records in sweep order."""
        return tuple(point.record for point in self.points)


def _unit(value: float) -> float:
    return min(1.0, max(0.0, value))


def build_circuit(h: PauliSum, eps: float, backend: BACKENDS) -> Circuit:
    """Compile exp(iε·H) with the chosen backend."""
    match backend:
        case "naive":
            return compile_full_unitary(h, eps)
        case "peephole":
            return peephole_optimize(compile_full_unitary(h, eps))
        case _:
            return compile_via_diagonalization(h, eps)


def _estimate(
    counts: CountsTable,
    config: ExperimentConfig,
    readout: ReadoutNoiseModel,
    boson_map: BosonQubitMap,
) -> dict[str, float | None]:
    raw = postselect(counts, boson_map) if config.postselect else None
    fields: dict[str, float | None] = {
        "p0_raw": counts.get(boson_map.ground_codeword()) / counts.shots,
        "discard_fraction": None if raw is None else raw.discard_fraction,
    }

    selection: PostSelection | None = raw
    if config.mitigate and config.postselect and config.postselect_first:
        selection = mitigate_postselected(counts, readout, boson_map)
    elif config.mitigate:
        mitigated = mitigate_readout(counts, readout)
        fields["negativity_mass"] = mitigated.report.negativity_mass
        fields["condition_number"] = mitigated.report.condition_number
        if config.postselect:
            selection = postselect(mitigated, boson_map)
            fields["removed_weight"] = 1 - selection.retained
        else:
            value = _unit(mitigated.get(boson_map.ground_codeword()))
            binomial = math.sqrt(value * (1 - value) / counts.shots)
            spread = 0.0
            if mitigated.covariance is not None:
                index = bitstring_to_index(boson_map.ground_codeword())
                spread = math.sqrt(max(0.0, mitigated.covariance[index, index]))
            fields["p0_estimate"] = value
            fields["p0_stderr"] = max(binomial, spread)
            return fields

    if selection is None:
        value = fields["p0_raw"] or 0.0
        fields["p0_estimate"] = value
        fields["p0_stderr"] = math.sqrt(value * (1 - value) / counts.shots)
        return fields

    estimate = estimate_p0(selection)
    fields["p0_estimate"] = estimate.value
    fields["p0_stderr"] = estimate.stderr
    return fields


def run_point(
    config: ExperimentConfig,
    h: PauliSum,
    index: int,
    eps: float,
) -> PointResult:
    """Compile, check, simulate and optionally sample one epsilon."""
    boson_map = BosonQubitMap()
    n_qubits = boson_map.total_qubits
    evolution = build_circuit(h, eps, config.backend)
    deviation = unitary_deviation(
        circuit_unitary(evolution),
        exact_evolution_oracle(h, eps),
    )
    full = prepare_ground_state(boson_map) + evolution
    initial = Statevector.zero_state(n_qubits)
    state = run(full, initial)
    qutrits, leakage = reduce_to_qutrits(state, boson_map)
    reference = embed_qutrits(perturbative_target(eps), boson_map)
    counts = evolution.counts()

    fields: dict[str, Any] = {
        "epsilon": eps,
        "backend": config.backend,
        "cnot_count": counts.cnot,
        "single_qubit_count": counts.single_qubit,
        "unitary_deviation": deviation,
        "p0_exact": _unit(p0_fidelity_proxy(state, boson_map)),
        "p0_closed_form": math.cos(2 * eps) ** 2,
        "reference_fidelity": _unit(fidelity(reference, state)),
        "concurrence": _unit(concurrence(qutrits)),
        "leakage": _unit(leakage),
    }

    sampled: CountsTable | None = None
    if config.sampling:
        stream = np.random.SeedSequence(config.seed, spawn_key=(index,))
        trajectory_stream, shot_stream = stream.spawn(2)
        gate_noise = config.gate_model()
        probabilities = state.probabilities()
        if not gate_noise.is_noiseless:
            noisy = simulate_noisy(
                full,
                initial,
                gate_noise,
                config.trajectories,
                trajectory_stream,
            )
            probabilities = noisy.probabilities
            fields["error_free_fraction"] = noisy.error_free_fraction
        readout = config.readout_model(n_qubits)
        sampled = sample_distribution(probabilities, config.shots, readout, shot_stream)
        fields.update(_estimate(sampled, config, readout, boson_map))

    record = EpsilonRecord(**fields)
    logger.debug("eps=%s: %s", eps, record)
    return PointResult(record=record, circuit=evolution, state=state, counts=sampled)


def _coupling_summary(params: PhysicalParams) -> tuple[dict[str, float], list[str]]:
    g = coupling_g(params)
    ratio = coupling_discrepancy(g)
    warnings: list[str] = []
    low, high = DISCREPANCY_BAND
    if not low <= ratio <= high:
        msg = (
            f"Coupling g = {g:.4g} Hz differs from the quoted {QUOTED_COUPLING_HZ:g} "
            f"Hz by a factor of {ratio:.3g}"
        )
        logger.warning(msg)
        warnings.append(msg)
    summary = {
        "g": g,
        "quoted_g": QUOTED_COUPLING_HZ,
        "discrepancy": ratio,
        "omega_m": params.omega_m,
        "d": params.d,
        "t": params.t,
    }
    return summary, warnings


def run_experiment(
    config: ExperimentConfig,
    hamiltonian: PauliSum | None = None,
) -> ExperimentResult:
    """Run every epsilon of the config.

    Points run concurrently and are collected in sweep order.
    """
    h = hamiltonian
    if h is None:
        h = map_squared_pair_hamiltonian(BosonQubitMap())
    epsilons = config.epsilons()
    summary: dict[str, Any] = {
        "backend": config.backend,
        "seed": config.seed,
        "epsilons": list(epsilons),
        "warnings": [],
    }
    params = config.physical_params
    if params is not None:
        summary["coupling"], summary["warnings"] = _coupling_summary(params)

    logger.info("Running %d points with the %s backend", len(epsilons), config.backend)
    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        points = tuple(
            executor.map(
                lambda item: run_point(config, h, *item),
                enumerate(epsilons),
            ),
        )

    records = [point.record for point in points]
    if records:
        summary["max_unitary_deviation"] = max(r.unitary_deviation for r in records)
        summary["min_p0_exact"] = min(r.p0_exact for r in records)
        summary["max_cnot_count"] = max(r.cnot_count for r in records)
        estimates = [r.p0_estimate for r in records if r.p0_estimate is not None]
        if estimates:
            summary["min_p0_estimate"] = min(estimates)
        discards = [
            r.discard_fraction for r in records if r.discard_fraction is not None
        ]
        if discards:
            summary["max_discard_fraction"] = max(discards)
    return ExperimentResult(config=config, points=points, summary=summary)


def _file_stem(index: int) -> str:
    return f"eps_{index:03d}"


def write_circuits(run_dir: Path, circuits: list[Circuit]) -> list[Path]:
    """Write one QASM file per circuit."""
    circuit_dir = run_dir / "circuits"
    circuit_dir.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []
    for index, circuit in enumerate(circuits):
        path = circuit_dir / f"{_file_stem(index)}.qasm"
        _ = path.write_text(export_qasm(circuit), encoding="utf-8")
        paths.append(path)
    return paths


def _csv_value(value: object) -> object:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else value


def records_csv(records: tuple[EpsilonRecord, ...]) -> str:
    """Records as CSV, floats written with repr."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    columns = list(EpsilonRecord.model_fields)
    writer.writerow(columns)
    for record in records:
        values = record.model_dump()
        writer.writerow([_csv_value(values[c]) for c in columns])
    return buffer.getvalue()


def write_bundle(result: ExperimentResult) -> Path:
    """Write config, records, circuits, counts and summary into the run directory.

    Nothing in the bundle depends on wall-clock time, so equal configs give
    byte-identical files.
    """
    run_dir = get_run_dir(result.config.out)
    _ = (run_dir / "config.json").write_text(
        result.config.model_dump_json(indent=2) + "\n",
        encoding="utf-8",
    )
    _ = (run_dir / "records.csv").write_text(
        records_csv(result.records),
        encoding="utf-8",
    )
    _ = write_circuits(run_dir, [point.circuit for point in result.points])

    boson_map = BosonQubitMap()
    state_dir = run_dir / "states"
    state_dir.mkdir(exist_ok=True)
    for index, point in enumerate(result.points):
        _ = (state_dir / f"{_file_stem(index)}.csv").write_text(
            codeword_probabilities_csv(point.state, boson_map),
            encoding="utf-8",
        )
        if point.counts is None:
            continue
        count_dir = run_dir / "counts"
        count_dir.mkdir(exist_ok=True)
        stem = _file_stem(index)
        _ = (count_dir / f"{stem}.csv").write_text(point.counts.to_csv())
        _ = (count_dir / f"{stem}.json").write_text(point.counts.to_json() + "\n")

    _ = (run_dir / "summary.json").write_text(
        json.dumps(result.summary, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    logger.info("Wrote results to '%s'", run_dir)
    return run_dir


class CheckResult(BaseModel):
    """Outcome of one verification check."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    name: str
    passed: bool
    deviation: float | None = None
    detail: str = ""

    def line(self) -> str:
        """One line for the report."""
        status = "PASS" if self.passed else "FAIL"
        deviation = (
            "" if self.deviation is None else f" (deviation {self.deviation:.3e})"
        )
        detail = f": {self.detail}" if self.detail else ""
        return f"[{status}] {self.name}{deviation}{detail}"


class VerificationReport(BaseModel):
    """All verification checks of a run."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        """True if every check passed."""
        return all(check.passed for check in self.checks)

    @property
    def max_unitary_deviation(self) -> float:
        """Largest deviation among the circuit-vs-oracle checks."""
        deviations = [
            check.deviation
            for check in self.checks
            if check.name.startswith(("per-term", "full-circuit"))
            and check.deviation is not None
        ]
        return max(deviations, default=0.0)

    def check(self, name: str) -> CheckResult:
        """Look up a check by name."""
        for check in self.checks:
            if check.name == name:
                return check
        msg = f"No check named '{name}'"
        raise KeyError(msg)

    def lines(self) -> list[str]:
        """Report lines, one per check."""
        return [check.line() for check in self.checks]


def _check_terms(boson_map: BosonQubitMap) -> CheckResult:
    h = map_squared_pair_hamiltonian(boson_map)
    brute = to_dense_matrix(squared_pair_generator(boson_map))
    deviation = float(np.max(np.abs(to_dense_matrix(h) - brute)))
    coefficient_error = max(abs(abs(c) - 0.25) for c in h.coefficients)
    passed = (
        len(h) == 8  # noqa: PLR2004
        and coefficient_error <= COEFFICIENT_ATOL
        and deviation <= COEFFICIENT_ATOL
    )
    return CheckResult(
        name="hamiltonian-terms",
        passed=passed,
        deviation=max(deviation, coefficient_error),
        detail=f"{len(h)} terms",
    )


def _check_commutation(h: PauliSum) -> CheckResult:
    pairs = list(itertools.combinations(h.strings, 2))
    symplectic = all(commutes(a, b) for a, b in pairs)
    norm = 0.0
    for a, b in pairs:
        ma, mb = to_dense_matrix(a), to_dense_matrix(b)
        norm = max(norm, float(np.linalg.norm(ma @ mb - mb @ ma)))
    return CheckResult(
        name="commutation",
        passed=symplectic and norm <= COMMUTATOR_ATOL,
        deviation=norm,
        detail=f"{len(pairs)} pairs",
    )


def _check_per_term(h: PauliSum, eps: float) -> CheckResult:
    worst = 0.0
    for string, theta in term_angles(h, eps):
        circuit = compile_pauli_exponential(string, theta)
        expected = scipy.linalg.expm(1j * theta * to_dense_matrix(string))
        worst = max(worst, unitary_deviation(circuit_unitary(circuit), expected))
    return CheckResult(
        name=f"per-term eps={eps!r}",
        passed=worst <= UNITARY_ATOL,
        deviation=worst,
    )


def _check_full(h: PauliSum, eps: float, backend: BACKENDS) -> CheckResult:
    circuit = build_circuit(h, eps, backend)
    deviation = unitary_deviation(
        circuit_unitary(circuit),
        exact_evolution_oracle(h, eps),
    )
    return CheckResult(
        name=f"full-circuit {backend} eps={eps!r}",
        passed=deviation <= UNITARY_ATOL,
        deviation=deviation,
    )


def _check_gate_counts(h: PauliSum) -> list[CheckResult]:
    per_term = [
        compile_pauli_exponential(s, t).counts()
        for s, t in term_angles(h, COUNT_CHECK_EPSILON)
    ]
    naive = build_circuit(h, COUNT_CHECK_EPSILON, "naive").counts()
    optimized = build_circuit(h, COUNT_CHECK_EPSILON, "peephole").counts()
    diagonal = build_circuit(h, COUNT_CHECK_EPSILON, "diagonalize").counts()
    max_single = max((c.single_qubit for c in per_term), default=0)
    return [
        CheckResult(
            name="gate-counts per-term",
            passed=all(
                c.cnot == PER_TERM_CNOTS and c.single_qubit <= PER_TERM_MAX_SINGLE
                for c in per_term
            ),
            detail=(
                f"CNOTs {sorted({c.cnot for c in per_term})}, "
                f"at most {max_single} single-qubit gates"
            ),
        ),
        CheckResult(
            name="gate-counts naive",
            passed=naive.cnot == PER_TERM_CNOTS * len(h),
            detail=f"{naive.cnot} CNOTs, {naive.single_qubit} single-qubit gates",
        ),
        CheckResult(
            name="gate-counts peephole",
            passed=optimized.cnot < naive.cnot,
            detail=(
                f"{optimized.cnot} CNOTs, "
                f"{optimized.single_qubit} single-qubit gates"
            ),
        ),
        CheckResult(
            name="gate-counts diagonalize",
            passed=True,
            detail=f"{diagonal.cnot} CNOTs, {diagonal.single_qubit} single-qubit gates",
        ),
    ]


def _check_qasm(h: PauliSum) -> CheckResult:
    circuits = [
        build_circuit(h, COUNT_CHECK_EPSILON, backend)
        for backend in ("naive", "peephole", "diagonalize")
    ]
    passed = all(parse_qasm(export_qasm(c)) == c for c in circuits)
    return CheckResult(name="qasm-roundtrip", passed=passed)


def _check_encoding(boson_map: BosonQubitMap) -> CheckResult:
    codewords = boson_map.codewords()
    roundtrip = all(
        decode_bitstring(boson_map, encode_fock(boson_map, fock)) == fock
        for fock in codewords.values()
    )
    width = boson_map.total_qubits
    leaked = [
        bits
        for bits in (index_to_bitstring(i, width) for i in range(1 << width))
        if bits not in codewords and decode_bitstring(boson_map, bits) is not None
    ]
    return CheckResult(
        name="encode-decode",
        passed=roundtrip and not leaked,
        detail=f"{len(codewords)} codewords",
    )


def _check_theory(
    h: PauliSum,
    eps: float,
    backend: BACKENDS,
    boson_map: BosonQubitMap,
) -> CheckResult:
    full = prepare_ground_state(boson_map) + build_circuit(h, eps, backend)
    state = run(full, Statevector.zero_state(boson_map.total_qubits))
    expected = embed_qutrits(exact_target(eps), boson_map)
    overlap = np.vdot(expected.amplitudes, state.amplitudes)
    phase = np.exp(-1j * np.angle(overlap)) if abs(overlap) > 0 else 1.0
    deviation = float(np.max(np.abs(state.amplitudes * phase - expected.amplitudes)))
    return CheckResult(
        name=f"theory-state eps={eps!r}",
        passed=deviation <= UNITARY_ATOL,
        deviation=deviation,
    )


def verify(
    config: ExperimentConfig,
    hamiltonian: PauliSum | None = None,
) -> VerificationReport:
    """Run the invariant suite. Failures are report content, not exceptions.

    The epsilon-independent checks always run; the circuit and state checks run
    once per epsilon of the config.
    """
    boson_map = BosonQubitMap()
    h = hamiltonian
    if h is None:
        h = map_squared_pair_hamiltonian(boson_map)
    checks: list[CheckResult] = [
        _check_terms(boson_map),
        _check_commutation(h),
    ]
    commuting = checks[-1].passed
    if commuting:
        checks.extend(_check_gate_counts(h))
        checks.append(_check_qasm(h))
    checks.append(_check_encoding(boson_map))

    for eps in config.epsilons():
        checks.append(_check_per_term(h, eps))
        if not commuting:
            continue
        checks.extend(
            _check_full(h, eps, backend)
            for backend in ("naive", "peephole", "diagonalize")
        )
        checks.append(_check_theory(h, eps, config.backend, boson_map))

    report = VerificationReport(checks=tuple(checks))
    logger.debug("Verification: %d checks, passed=%s", len(checks), report.passed)
    return report
