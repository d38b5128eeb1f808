"""Physical constants, parameter types and regime checks.

All values are SI.  Geometry and drive types validate themselves on
construction and are frozen afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

__all__ = [
    "PhysicalConstants",
    "CODATA2018",
    "CoaxGeometry",
    "PlateGeometry",
    "Drive",
    "Check",
    "ValidityReport",
    "peak_speed",
    "validate_regime",
    "PERTURBATIVE_LIMIT",
    "PERTURBATIVE_WARN",
    "NONRELATIVISTIC_LIMIT",
    "LONG_GUIDE_MIN",
]

# amplitude/gap above PERTURBATIVE_WARN warns, above PERTURBATIVE_LIMIT fails
PERTURBATIVE_LIMIT = 0.1
PERTURBATIVE_WARN = 0.01
NONRELATIVISTIC_LIMIT = 1e-3
# L*omega0/(2 pi c) below this is reported as a caveat (end diffraction ignored)
LONG_GUIDE_MIN = 10.0


def _require_positive(**values: float) -> None:
    for name, v in values.items():
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be a finite positive number, got {v!r}")


@dataclass(frozen=True)
class PhysicalConstants:
    c: float  # m/s
    hbar: float  # J s
    eps0: float  # F/m

    def __post_init__(self):
        _require_positive(c=self.c, hbar=self.hbar, eps0=self.eps0)


CODATA2018 = PhysicalConstants(
    c=299_792_458.0,
    hbar=1.054_571_817e-34,
    eps0=8.854_187_8128e-12,
)


@dataclass(frozen=True)
class CoaxGeometry:
    """Annular guide: inner radius ``b``, static gap ``a``, axial period ``L``."""

    b: float
    a: float
    L: float

    def __post_init__(self):
        _require_positive(b=self.b, a=self.a, L=self.L)

    @property
    def outer_radius(self) -> float:
        return self.b + self.a


@dataclass(frozen=True)
class PlateGeometry:
    A: float  # plate area, m^2
    a: float  # separation, m

    def __post_init__(self):
        _require_positive(A=self.A, a=self.a)


@dataclass(frozen=True)
class Drive:
    """Harmonic wall motion ``amplitude * cos(omega0 t)``."""

    omega0: float
    amplitude: float

    def __post_init__(self):
        _require_positive(omega0=self.omega0)
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude!r}")

    @classmethod
    def from_peak_speed(cls, omega0: float, v0: float) -> "Drive":
        return cls(omega0=omega0, amplitude=v0 / omega0)


def peak_speed(drive: Drive) -> float:
    """Peak wall speed ``omega0 * amplitude`` in m/s."""
    return drive.omega0 * drive.amplitude


Status = Literal["pass", "warn", "fail"]


@dataclass(frozen=True)
class Check:
    name: str
    ratio: float
    limit: float
    status: Status
    caveat: bool = False  # informational: never turns the report invalid
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass(frozen=True)
class ValidityReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.caveat)

    @property
    def caveats(self) -> list[Check]:
        return [c for c in self.checks if c.caveat and c.status != "pass"]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "ratio": c.ratio, "limit": c.limit, "status": c.status,
                 "caveat": c.caveat, "note": c.note}
                for c in self.checks
            ],
        }


def validate_regime(drive: Drive, geom: CoaxGeometry | PlateGeometry, cutoff: float,
                    consts: PhysicalConstants = CODATA2018) -> ValidityReport:
    """Check the assumptions behind the first-order TEM-only rates.

    ``cutoff`` is the lowest non-TEM cutoff angular frequency: from
    :func:`dcewave.specfun.find_cutoffs` for the coax, ``pi c / a`` (first
    ``l = 1`` TM mode) for plates.

    Checks
    ------
    tem_only
        ``omega0 / cutoff < 1``.
    perturbative
        ``amplitude / a``; warns above 0.01, fails above 0.1.
    nonrelativistic
        ``v0 / c <= 1e-3``.
    long_guide (coax only, caveat)
        ``L omega0 / (2 pi c) >= 10``; end diffraction is not modelled.
    """
    if not (math.isfinite(cutoff) and cutoff > 0):
        raise ValueError(f"cutoff must be a positive angular frequency, got {cutoff!r}")

    checks = []
    r = drive.omega0 / cutoff
    checks.append(Check("tem_only", r, 1.0, "pass" if r < 1.0 else "fail",
                        note="omega0 / lowest non-TEM cutoff"))

    r = drive.amplitude / geom.a
    status: Status = "pass"
    if r > PERTURBATIVE_LIMIT:
        status = "fail"
    elif r > PERTURBATIVE_WARN:
        status = "warn"
    checks.append(Check("perturbative", r, PERTURBATIVE_LIMIT, status, note="amplitude / gap"))

    r = peak_speed(drive) / consts.c
    checks.append(Check("nonrelativistic", r, NONRELATIVISTIC_LIMIT,
                        "pass" if r <= NONRELATIVISTIC_LIMIT else "fail", note="v0 / c"))

    if isinstance(geom, CoaxGeometry):
        r = geom.L * drive.omega0 / (2.0 * math.pi * consts.c)
        checks.append(Check("long_guide", r, LONG_GUIDE_MIN,
                            "pass" if r >= LONG_GUIDE_MIN else "warn", caveat=True,
                            note="L omega0 / (2 pi c); end diffraction neglected"))
    return ValidityReport(tuple(checks))
