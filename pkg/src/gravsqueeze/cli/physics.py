# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze physics CLI command."""

import logging

from pydantic import Field, NonNegativeFloat, PositiveFloat

from gravsqueeze.cli.base import BaseCommand
from gravsqueeze.constants import QUOTED_COUPLING_HZ
from gravsqueeze.experiment import DISCREPANCY_BAND
from gravsqueeze.physics import (
    PhysicalParams,
    approximate_concurrence,
    concurrence,
    coupling_discrepancy,
    coupling_g,
    epsilon,
    theory_state,
)

logger = logging.getLogger(__name__)


class Physics(BaseCommand):
    """Print the coupling, eps, theory state and concurrence for given parameters."""

    omega: PositiveFloat = Field(description="Mechanical angular frequency in Hz")
    distance: PositiveFloat = Field(description="Separation of the oscillators in m")
    time: NonNegativeFloat = Field(default=0.0, description="Evolution time in s")

    def cli_cmd(self) -> None:
        """Evaluate the closed forms and log them."""
        self.configure_logging()
        params = PhysicalParams(omega_m=self.omega, d=self.distance, t=self.time)
        g = coupling_g(params)
        ratio = coupling_discrepancy(g)
        state = theory_state(g, params.omega_m)

        logger.info("g = %.6e Hz", g)
        logger.info("eps = g*t = %.6e", epsilon(g, params.t))
        logger.info(
            "theory state: %s|00> + %s|22>",
            state.amplitude(0, 0),
            state.amplitude(2, 2),
        )
        logger.info("concurrence = %.6e", concurrence(state))
        logger.info(
            "leading-order concurrence = %.6e",
            approximate_concurrence(g, params.omega_m),
        )

        low, high = DISCREPANCY_BAND
        if not low <= ratio <= high:
            logger.warning(
                "g differs from the quoted %g Hz by a factor of %.3g",
                QUOTED_COUPLING_HZ,
                ratio,
            )
