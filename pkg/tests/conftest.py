# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Pytest test fixtures and utilities."""

import os
from collections.abc import Generator
from unittest.mock import patch

import pytest

from gravsqueeze.bosonmap import BosonQubitMap, map_squared_pair_hamiltonian
from gravsqueeze.pauli import PauliSum


@pytest.fixture(name="mock_env")
def fixture_mock_env() -> Generator[os._Environ[str], None, None]:
    """Fixture that provides a clean environment."""
    with patch.dict(os.environ, {}, clear=True):
        yield os.environ


@pytest.fixture(name="boson_map")
def fixture_boson_map() -> BosonQubitMap:
    """Two modes with cutoff 2 on six qubits."""
    return BosonQubitMap()


@pytest.fixture(name="hamiltonian")
def fixture_hamiltonian(boson_map: BosonQubitMap) -> PauliSum:
    """The eight-term mapped squared pair Hamiltonian."""
    return map_squared_pair_hamiltonian(boson_map)


@pytest.fixture(name="flipped_hamiltonian")
def fixture_flipped_hamiltonian(hamiltonian: PauliSum) -> PauliSum:
    """The mapped Hamiltonian with the sign of term 3 corrupted."""
    return PauliSum(
        n_qubits=hamiltonian.n_qubits,
        terms=tuple(
            (-c if i == 3 else c, s) for i, (c, s) in enumerate(hamiltonian.terms)
        ),
    )

