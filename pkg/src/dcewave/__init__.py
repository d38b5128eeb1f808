"""Photon-pair emission from an oscillating wall: coaxial waveguide and parallel plates."""

__version__ = "0.1.0"

from .quantities import (  # noqa: E402
    CODATA2018,
    CoaxGeometry,
    Drive,
    PhysicalConstants,
    PlateGeometry,
    ValidityReport,
    peak_speed,
    validate_regime,
)
from .rates import (  # noqa: E402
    coax_rate,
    coax_rate_small_gap,
    discrete_photon_number,
    emission_spectrum,
    pfa_compare,
    plate_rate,
)
from .specfun import find_cutoffs  # noqa: E402

__all__ = [
    "__version__",
    "CODATA2018",
    "CoaxGeometry",
    "Drive",
    "PhysicalConstants",
    "PlateGeometry",
    "ValidityReport",
    "peak_speed",
    "validate_regime",
    "coax_rate",
    "coax_rate_small_gap",
    "discrete_photon_number",
    "emission_spectrum",
    "pfa_compare",
    "plate_rate",
    "find_cutoffs",
]
