"""TEM modes of the coaxial guide and TM modes between parallel plates.

Coax TEM modes carry an axial Fourier label ``n`` (``exp(i n pi z / L)``)
with ``omega_n = |n| pi c / L``.  The radial electric field falls off as
``1/rho``; the magnetic field is ``sgn(n) z_hat x E / c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .quantities import CODATA2018, CoaxGeometry, PhysicalConstants, PlateGeometry

__all__ = [
    "StaticModeError",
    "TemMode",
    "PlateTmMode",
    "tem_mode",
    "tem_frequency",
    "tem_radial_field",
    "tem_magnetic_field",
    "tem_modes_below",
    "tem_mode_count",
    "plate_tm_mode",
    "plate_frequency",
]


class StaticModeError(ValueError):
    """The zero-frequency label was used where a photon mode is required."""


@dataclass(frozen=True)
class TemMode:
    n: int
    omega_n: float  # rad/s
    norm: float  # V/m, field amplitude at rho = 1 m per unit mode amplitude


@dataclass(frozen=True)
class PlateTmMode:
    n_vec: tuple[int, int]
    ell: int
    k_par: float  # 1/m
    omega: float  # rad/s


def _check_label(n: int) -> int:
    if int(n) != n:
        raise ValueError(f"mode label must be an integer, got {n!r}")
    if n == 0:
        raise StaticModeError("n = 0 is the static (zero-frequency) mode and carries no photons")
    return int(n)


def tem_frequency(n: int, geom: CoaxGeometry, consts: PhysicalConstants = CODATA2018) -> float:
    return abs(_check_label(n)) * math.pi * consts.c / geom.L


def tem_mode(n: int, geom: CoaxGeometry, consts: PhysicalConstants = CODATA2018) -> TemMode:
    n = _check_label(n)
    omega = tem_frequency(n, geom, consts)
    norm = math.sqrt(consts.hbar * omega
                     / (4.0 * math.pi * consts.eps0 * geom.L * math.log1p(geom.a / geom.b)))
    return TemMode(n=n, omega_n=omega, norm=norm)


def _check_rho(rho: float, geom: CoaxGeometry) -> None:
    if not (geom.b <= rho <= geom.b + geom.a):
        raise ValueError(f"rho = {rho!r} lies outside the annulus [{geom.b}, {geom.b + geom.a}]")


def tem_radial_field(mode: TemMode, rho: float, geom: CoaxGeometry) -> float:
    """Radial electric field magnitude per unit mode amplitude, V/m."""
    _check_rho(rho, geom)
    return mode.norm / rho


def tem_magnetic_field(mode: TemMode, rho: float, geom: CoaxGeometry,
                       consts: PhysicalConstants = CODATA2018) -> tuple[float, int]:
    """Magnetic field as ``(magnitude in T, sign along phi_hat)``.

    ``z_hat x rho_hat = phi_hat``, so the sign is ``sgn(n)``.
    """
    e = tem_radial_field(mode, rho, geom)
    return e / consts.c, (1 if mode.n > 0 else -1)


def tem_mode_count(omega_max: float, geom: CoaxGeometry,
                   consts: PhysicalConstants = CODATA2018) -> int:
    """Number of nonzero labels with ``omega_n <= omega_max``."""
    if omega_max < 0:
        return 0
    return 2 * math.floor(omega_max * geom.L / (math.pi * consts.c))


def tem_modes_below(omega_max: float, geom: CoaxGeometry,
                    consts: PhysicalConstants = CODATA2018) -> Iterator[TemMode]:
    """TEM modes with ``omega_n <= omega_max``, ordered by ``(|n|, sign)``."""
    n_max = tem_mode_count(omega_max, geom, consts) // 2
    for k in range(1, n_max + 1):
        for n in (-k, k):
            yield tem_mode(n, geom, consts)


def plate_frequency(n_vec: tuple[int, int], ell: int, geom: PlateGeometry,
                    consts: PhysicalConstants = CODATA2018) -> float:
    nx, ny = n_vec
    k_par = math.hypot(nx, ny) * math.pi / math.sqrt(geom.A)
    return consts.c * math.hypot(k_par, ell * math.pi / geom.a)


def plate_tm_mode(n_vec: tuple[int, int], ell: int, geom: PlateGeometry,
                  consts: PhysicalConstants = CODATA2018) -> PlateTmMode:
    """TM mode between plates with dispersion ``c sqrt(k_par^2 + (ell pi / a)^2)``."""
    nx, ny = (int(v) for v in n_vec)
    if ell < 0 or int(ell) != ell:
        raise ValueError(f"ell must be a non-negative integer, got {ell!r}")
    if nx == 0 and ny == 0 and ell == 0:
        raise StaticModeError("(n=(0,0), ell=0) is the static label")
    k_par = math.hypot(nx, ny) * math.pi / math.sqrt(geom.A)
    omega = consts.c * math.hypot(k_par, ell * math.pi / geom.a)
    return PlateTmMode(n_vec=(nx, ny), ell=int(ell), k_par=k_par, omega=omega)
