# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze application constants."""

from typing import Literal

# CODATA 2018, pinned for bit-reproducible outputs
GRAVITATIONAL_CONSTANT = 6.67430e-11  # m^3 kg^-1 s^-2
HBAR = 1.054571817e-34  # J s
SPEED_OF_LIGHT = 299792458.0  # m / s

# Coupling figure quoted for omega_m = 1e21 Hz, d = 1e-4 m
QUOTED_COUPLING_HZ = 1e-31

# Two modes with at most two excitations each, six qubits
DEFAULT_MODES = 2
DEFAULT_CUTOFF = 2

# Typical average device error rates used by the noise models
READOUT_ERROR_RATE = 1.127e-2
GATE_ERROR_RATE_1Q = 4.278e-4
GATE_ERROR_RATE_2Q = 1.413e-2

# Default epsilon sweep (start, stop, points), log spaced
DEFAULT_SWEEP: tuple[float, float, int] = (0.5e-6, 0.5e-2, 5)

# Numerical tolerances
COEFFICIENT_CUTOFF = 1e-15
NORM_ATOL = 1e-12
UNITARY_ATOL = 1e-10
MAX_DENSE_QUBITS = 12

# Compiler backends
BACKENDS = Literal["naive", "peephole", "diagonalize"]

OUTPUT_DIR_NAME = "gravsqueeze-runs"
