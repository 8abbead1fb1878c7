# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Sweep, result bundle and verification suite tests."""

import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from gravsqueeze.compiler.qasm import parse_qasm
from gravsqueeze.constants import BACKENDS
from gravsqueeze.experiment import (
    CheckResult,
    ExperimentConfig,
    SweepSpec,
    build_circuit,
    records_csv,
    run_experiment,
    verify,
    write_bundle,
)
from gravsqueeze.pauli import PauliSum

STATIC_CHECKS = {
    "hamiltonian-terms",
    "commutation",
    "gate-counts per-term",
    "gate-counts naive",
    "gate-counts peephole",
    "gate-counts diagonalize",
    "qasm-roundtrip",
    "encode-decode",
}


def read_tree(root: Path) -> dict[str, bytes]:
    """Every file below root keyed by relative path."""
    return {
        path.relative_to(root).as_posix(): path.read_bytes()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


def test_sweep_parse() -> None:
    """Test the start:stop:points shorthand with log spacing."""
    values = SweepSpec.parse("0.5e-6:0.5e-2:5").values()
    assert len(values) == 5
    assert values[0] == pytest.approx(0.5e-6)
    assert values[-1] == pytest.approx(0.5e-2)
    assert values[2] == pytest.approx(0.5e-4)


def test_sweep_edge_cases() -> None:
    """Test empty, single point and linear sweeps and the parse errors."""
    assert SweepSpec.parse("1:1:0").values() == ()
    assert SweepSpec(start=0.2, stop=0.4, points=1).values() == (0.2,)
    linear = SweepSpec(start=0.0, stop=1.0, points=3, log=False).values()
    assert linear == pytest.approx((0.0, 0.5, 1.0))
    with pytest.raises(ValueError, match="start:stop:points"):
        _ = SweepSpec.parse("1:2")
    with pytest.raises(ValidationError):
        _ = SweepSpec(start=0.0, stop=1.0, points=3)


def test_config_epsilon_sources() -> None:
    """Test the default sweep and the mutually exclusive epsilon sources."""
    assert len(ExperimentConfig().epsilons()) == 5
    assert ExperimentConfig(epsilon=0.3).epsilons() == (0.3,)
    assert ExperimentConfig(sweep="0.1:0.2:2").epsilons() == pytest.approx((0.1, 0.2))
    with pytest.raises(ValidationError):
        _ = ExperimentConfig(omega_m=1e21)
    with pytest.raises(ValidationError):
        _ = ExperimentConfig(omega_m=1e21, d=1e-4, t=1.0, epsilon=0.1)
    with pytest.raises(ValidationError):
        _ = ExperimentConfig(epsilon=0.1, sweep="0.1:0.2:2")
    with pytest.raises(ValidationError):
        _ = ExperimentConfig(readout_error=0.5)


def test_config_postselect_first_needs_postselect() -> None:
    """Test that post-selecting first is refused when post-selection is off."""
    with pytest.raises(ValidationError, match="postselect_first needs postselect"):
        _ = ExperimentConfig(postselect=False, postselect_first=True)
    assert ExperimentConfig(postselect_first=True).postselect_first


def test_default_output_dir(
    tmp_path: Path,
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    """Test that the default run dir follows the working directory at creation."""
    first, second = tmp_path / "first", tmp_path / "second"
    first.mkdir()
    second.mkdir()
    monkeypatch.chdir(first)
    assert ExperimentConfig().out == first.resolve() / "gravsqueeze-runs"
    monkeypatch.chdir(second)
    assert ExperimentConfig().out == second.resolve() / "gravsqueeze-runs"


def test_noiseless_sweep(tmp_path: Path) -> None:
    """Test P0 = cos²(2ε), its monotone decrease and the exact unitaries."""
    config = ExperimentConfig(sweep="0.5e-6:0.5:4", out=tmp_path, workers=2)
    records = run_experiment(config).records
    assert len(records) == 4
    for record in records:
        assert record.p0_exact == pytest.approx(math.cos(2 * record.epsilon) ** 2)
        assert record.p0_closed_form == pytest.approx(record.p0_exact, abs=1e-10)
        assert record.concurrence == pytest.approx(
            abs(math.sin(4 * record.epsilon)),
            abs=1e-9,
        )
        assert record.unitary_deviation <= 1e-10
        assert record.leakage <= 1e-12
        assert record.p0_raw is None
    p0 = [record.p0_exact for record in records]
    assert p0 == sorted(p0, reverse=True)


@pytest.mark.parametrize("backend", ["naive", "peephole", "diagonalize"])
def test_backends_agree(tmp_path: Path, backend: BACKENDS) -> None:
    """Test that every backend reproduces exp(iε·H)."""
    config = ExperimentConfig(epsilon=0.1, backend=backend, out=tmp_path)
    (record,) = run_experiment(config).records
    assert record.backend == backend
    assert record.unitary_deviation <= 1e-10
    assert record.p0_exact == pytest.approx(math.cos(0.2) ** 2)


def test_physical_mode(tmp_path: Path) -> None:
    """Test epsilon from the coupling and the discrepancy warning."""
    config = ExperimentConfig(omega_m=1e21, d=1e-4, t=1.0, out=tmp_path)
    (eps,) = config.epsilons()
    assert eps == pytest.approx(4.902e-33, rel=1e-3)

    result = run_experiment(config)
    assert result.summary["coupling"]["g"] == pytest.approx(eps)
    assert result.summary["coupling"]["discrepancy"] > 20
    assert len(result.summary["warnings"]) == 1
    assert result.records[0].p0_exact == pytest.approx(1.0)


def test_sampling_without_noise(tmp_path: Path) -> None:
    """Test that perfect hardware gives a binomial estimate of cos²(2ε)."""
    config = ExperimentConfig(
        epsilon=0.1,
        sampling=True,
        shots=20_000,
        readout_error=0.0,
        gate_error_1q=0.0,
        gate_error_2q=0.0,
        out=tmp_path,
    )
    (record,) = run_experiment(config).records
    assert record.discard_fraction == 0
    assert record.error_free_fraction is None
    assert record.p0_estimate == pytest.approx(math.cos(0.2) ** 2, abs=0.006)
    assert record.p0_stderr == pytest.approx(0.0014, abs=0.0003)


def test_sampling_with_noise(tmp_path: Path) -> None:
    """Test the noisy pipeline fields at the default error rates."""
    config = ExperimentConfig(
        epsilon=0.1,
        sampling=True,
        shots=20_000,
        trajectories=256,
        seed=3,
        out=tmp_path,
    )
    result = run_experiment(config)
    (record,) = result.records
    assert record.p0_raw is not None
    assert record.p0_estimate is not None
    assert 0.5 < record.p0_estimate <= 1.0
    assert record.p0_stderr is not None
    assert record.p0_stderr > 0
    assert record.discard_fraction is not None
    assert record.discard_fraction > 0
    assert record.error_free_fraction is not None
    assert record.error_free_fraction < 1
    assert result.summary["min_p0_estimate"] == record.p0_estimate


def test_hardware_rate_sweep(tmp_path: Path) -> None:
    """Test the sweep at hardware gate and readout error rates.

    Post-selected P0 stays at or above 0.9 and about a tenth of the shots is
    discarded. Without readout errors the raw ground-state frequency of the
    diagonalized circuit stays between 0.8 and 1.
    """
    options = {
        "sweep": "0.5e-6:0.5e-2:3",
        "backend": "diagonalize",
        "sampling": True,
        "shots": 100_000,
        "trajectories": 4096,
        "seed": 17,
    }
    noisy = run_experiment(ExperimentConfig(**options, out=tmp_path / "noisy"))
    assert len(noisy.records) == 3
    for record in noisy.records:
        assert record.p0_estimate is not None
        assert record.p0_estimate >= 0.9
        assert record.discard_fraction is not None
        assert 0.03 < record.discard_fraction < 0.3

    gate_only = run_experiment(
        ExperimentConfig(**options, readout_error=0.0, out=tmp_path / "gate"),
    )
    for record in gate_only.records:
        assert record.p0_raw is not None
        assert 0.8 < record.p0_raw < 1


def test_postselect_first(tmp_path: Path) -> None:
    """Test that the reduced-calibration order yields an estimate as well."""
    config = ExperimentConfig(
        epsilon=0.1,
        sampling=True,
        shots=5000,
        trajectories=64,
        postselect_first=True,
        out=tmp_path,
    )
    (record,) = run_experiment(config).records
    assert record.p0_estimate is not None
    assert record.negativity_mass is None


def test_bundle_is_reproducible(tmp_path: Path) -> None:
    """Test that rerunning a config rewrites byte-identical files."""
    config = ExperimentConfig(
        sweep="0.5e-2:0.1:2",
        sampling=True,
        shots=2000,
        trajectories=128,
        seed=17,
        workers=2,
        out=tmp_path / "run",
    )
    run_dir = write_bundle(run_experiment(config))
    first = read_tree(run_dir)
    assert set(first) == {
        "config.json",
        "records.csv",
        "summary.json",
        "circuits/eps_000.qasm",
        "circuits/eps_001.qasm",
        "states/eps_000.csv",
        "states/eps_001.csv",
        "counts/eps_000.csv",
        "counts/eps_000.json",
        "counts/eps_001.csv",
        "counts/eps_001.json",
    }

    _ = write_bundle(run_experiment(config))
    assert read_tree(run_dir) == first


def test_bundle_circuits_parse(tmp_path: Path, hamiltonian: PauliSum) -> None:
    """Test that the written QASM reads back as the compiled circuit."""
    config = ExperimentConfig(epsilon=0.25, out=tmp_path)
    run_dir = write_bundle(run_experiment(config))
    text = (run_dir / "circuits" / "eps_000.qasm").read_text(encoding="utf-8")
    assert parse_qasm(text) == build_circuit(hamiltonian, 0.25, "peephole")


def test_records_csv_header(tmp_path: Path) -> None:
    """Test the CSV column order and the blank optional fields."""
    records = run_experiment(ExperimentConfig(epsilon=0.1, out=tmp_path)).records
    header, row = records_csv(records).splitlines()
    assert header.startswith("epsilon,backend,cnot_count,single_qubit_count")
    assert row.startswith("0.1,peephole,")
    assert row.endswith(",,,,,,,,")


def test_check_line() -> None:
    """Test the report line format."""
    check = CheckResult(name="x", passed=False, deviation=0.5, detail="y")
    assert check.line() == "[FAIL] x (deviation 5.000e-01): y"
    assert CheckResult(name="z", passed=True).line() == "[PASS] z"


def test_verify_passes() -> None:
    """Test that every check passes for the correct Hamiltonian."""
    report = verify(ExperimentConfig(sweep="0.5e-6:0.5e-2:2"))
    assert report.passed, "\n".join(report.lines())
    assert report.max_unitary_deviation <= 1e-10
    assert STATIC_CHECKS <= {check.name for check in report.checks}
    assert report.check("commutation").detail == "28 pairs"
    with pytest.raises(KeyError):
        _ = report.check("missing")


def test_verify_detects_sign_error(flipped_hamiltonian: PauliSum) -> None:
    """Test that a flipped coefficient fails only the theory-state checks."""
    report = verify(ExperimentConfig(sweep="0.5e-6:0.5e-2:2"), flipped_hamiltonian)
    assert not report.passed
    failed = {check.name for check in report.checks if not check.passed}
    assert failed
    assert all(name.startswith("theory-state") for name in failed)
    assert report.max_unitary_deviation <= 1e-10


def test_verify_empty_sweep() -> None:
    """Test that an empty sweep runs only the epsilon-independent checks."""
    report = verify(ExperimentConfig(sweep="1:1:0"))
    assert {check.name for check in report.checks} == STATIC_CHECKS
    assert report.passed
