# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze compile CLI command."""

import logging

from pydantic import Field
from pydantic_settings import CliImplicitFlag

from gravsqueeze.bosonmap import BosonQubitMap, map_squared_pair_hamiltonian
from gravsqueeze.cli.base import ExperimentCommand
from gravsqueeze.compiler.qasm import export_qasm
from gravsqueeze.experiment import build_circuit, write_circuits
from gravsqueeze.util import get_run_dir

logger = logging.getLogger(__name__)


class Compile(ExperimentCommand):
    """Compile the evolution circuit and write it as OpenQASM."""

    print_qasm: CliImplicitFlag[bool] = Field(
        default=False,
        description="Also log the QASM program of every circuit",
    )

    def cli_cmd(self) -> None:
        """Compile every eps and write one QASM file per circuit."""
        self.configure_logging()
        config = self.experiment_config()
        h = map_squared_pair_hamiltonian(BosonQubitMap())

        circuits = [build_circuit(h, eps, config.backend) for eps in config.epsilons()]
        paths = write_circuits(get_run_dir(config.out), circuits)

        for eps, circuit, path in zip(config.epsilons(), circuits, paths):
            counts = circuit.counts()
            logger.info(
                "eps=%s: %d CNOTs, %d single-qubit gates -> %s",
                eps,
                counts.cnot,
                counts.single_qubit,
                path,
            )
            if self.print_qasm:
                logger.info("\n%s", export_qasm(circuit))
