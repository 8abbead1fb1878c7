# Copyright (C) 2025 Henrik Wilhelmsen.
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at <https://mozilla.org/MPL/2.0/>.

"""Gravsqueeze exceptions."""


class GravsqueezeError(Exception):
    """Base class for all gravsqueeze errors."""


class DimensionError(GravsqueezeError, ValueError):
    """Operands live on different numbers of qubits or have the wrong shape."""


class CapacityError(GravsqueezeError, MemoryError):
    """A dense expansion was requested for too many qubits."""


class EncodingError(GravsqueezeError, ValueError):
    """A Fock state or mode index is not representable by the boson-qubit map."""


class UnsupportedShapeError(GravsqueezeError, ValueError):
    """The operation only exists for a specific number of modes or cutoff."""


class NonCommutingError(GravsqueezeError, ValueError):
    """A set of Pauli terms that must commute contains an anticommuting pair."""


class NonHermitianError(GravsqueezeError, ValueError):
    """A generator that must be Hermitian is not."""


class SingularCalibrationError(GravsqueezeError, ArithmeticError):
    """A readout calibration matrix cannot be inverted."""


class DegenerateProjectionError(GravsqueezeError, ArithmeticError):
    """Projection onto the codespace left (almost) no weight."""


class DegeneratePostSelectionError(GravsqueezeError, ArithmeticError):
    """Post-selection discarded every shot."""


class VerificationFailedError(GravsqueezeError):
    """One or more verification checks failed."""


class ConfigError(GravsqueezeError, ValueError):
    """Experiment options contradict each other."""
