"""Matrix elements of the wall-motion perturbation and two-photon amplitudes.

The perturbation is minus the work done on the moving outer wall,
``dV = -(a+b) * integral dphi dz T_rr * drho`` with the radial stress
``T_rr = (eps0/2)(E_r^2 - c^2 B_phi^2)`` evaluated just inside ``rho = a+b``.
Between the vacuum and the pair state ``{n, -n}`` this reduces to
``hbar omega_n drho * g`` with ``g = 1 / ((a+b) log(1 + a/b))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .modes import StaticModeError, plate_frequency, tem_frequency, tem_mode
from .quantities import CODATA2018, CoaxGeometry, Drive, PhysicalConstants, PlateGeometry

__all__ = [
    "StressContext",
    "PairAmplitude",
    "coax_matrix_element",
    "coax_matrix_element_from_stress",
    "plate_matrix_element_general",
    "plate_matrix_element_tem",
    "pair_amplitude",
    "pair_probability",
    "pair_probability_array",
    "sinc_kernel",
]


@dataclass(frozen=True)
class StressContext:
    geom: CoaxGeometry
    drive: Drive
    consts: PhysicalConstants = CODATA2018

    @cached_property
    def g(self) -> float:
        """Geometric factor ``1 / ((a+b) log(1+a/b))`` in 1/m; tends to 1/a."""
        a, b = self.geom.a, self.geom.b
        return 1.0 / ((a + b) * math.log1p(a / b))


@dataclass(frozen=True)
class PairAmplitude:
    n1: int
    n2: int
    value: complex
    delta_omega: float  # omega_n1 + omega_n2 - omega0


def _labels(*ns: int) -> None:
    for n in ns:
        if n == 0:
            raise StaticModeError("n = 0 is the static mode and carries no photons")


def coax_matrix_element(ctx: StressContext, n1: int, n2: int, drho: float) -> float:
    """``<{n1, n2}| dV |0>`` in joules for an instantaneous displacement ``drho``."""
    _labels(n1, n2)
    if n1 != -n2:
        return 0.0
    omega = tem_frequency(n1, ctx.geom, ctx.consts)
    return ctx.consts.hbar * omega * drho * ctx.g


def coax_matrix_element_from_stress(ctx: StressContext, n1: int, n2: int, drho: float) -> float:
    """Same matrix element assembled from the mode fields and the stress tensor.

    Only the ``a^dag a^dag`` part of ``E_r^2`` and ``B_phi^2`` connects the
    vacuum to a pair.  The z integral of ``exp(-i (n1 + n2) pi z / L)`` is
    replaced by ``L delta_{n1,-n2}``; the ordered double sum counts the pair
    twice.
    """
    _labels(n1, n2)
    if n1 != -n2:
        return 0.0
    geom, consts = ctx.geom, ctx.consts
    m1, m2 = tem_mode(n1, geom, consts), tem_mode(n2, geom, consts)
    rho = geom.b + geom.a
    # creation part of E_n is -i * norm * a_n^dag / rho
    e1, e2 = -1j * m1.norm / rho, -1j * m2.norm / rho
    ordered_pairs = 2.0
    e_sq = ordered_pairs * e1 * e2 * geom.L
    # c B_phi = sgn(n) E_r
    cb_sq = ordered_pairs * (math.copysign(1, n1) * e1) * (math.copysign(1, n2) * e2) * geom.L
    t_rr = 0.5 * consts.eps0 * (e_sq - cb_sq)
    dv = -rho * 2.0 * math.pi * t_rr * drho
    return float(dv.real)


def plate_matrix_element_general(geom: PlateGeometry, n1_vec, ell1: int, n2_vec, ell2: int,
                                 dz: float, consts: PhysicalConstants = CODATA2018) -> float:
    """Pair matrix element of ``dV = -F dz`` for TM plate modes, in joules.

    Both frequency factors use the in-plane label of the first photon
    (``omega_{n1}^{l1} omega_{n1}^{l2}``); on the ``n1 = -n2`` support this is
    the same as the symmetric reading.
    """
    n1 = tuple(int(v) for v in n1_vec)
    n2 = tuple(int(v) for v in n2_vec)
    for n, ell in ((n1, ell1), (n2, ell2)):
        if n == (0, 0) and ell == 0:
            raise StaticModeError("(n=(0,0), ell=0) is the static label")
    if n1 != (-n2[0], -n2[1]):
        return 0.0
    k_par = math.hypot(*n1) * math.pi / math.sqrt(geom.A)
    w1 = plate_frequency(n1, ell1, geom, consts)
    w2 = plate_frequency(n1, ell2, geom, consts)
    weight = (1 + (ell1 == 0)) * (1 + (ell2 == 0))
    force = (consts.hbar / geom.a) * ((consts.c * k_par) ** 2 + w1 * w2) / math.sqrt(weight * w1 * w2)
    return force * (-dz)


def plate_matrix_element_tem(geom: PlateGeometry, n1_vec, n2_vec, drho: float,
                             consts: PhysicalConstants = CODATA2018) -> float:
    """``l = 0`` plate matrix element ``hbar omega drho / a``; ``drho`` widens the gap."""
    n1 = tuple(int(v) for v in n1_vec)
    n2 = tuple(int(v) for v in n2_vec)
    if n1 == (0, 0) or n2 == (0, 0):
        raise StaticModeError("(n=(0,0), ell=0) is the static label")
    if n1 != (-n2[0], -n2[1]):
        return 0.0
    return consts.hbar * plate_frequency(n1, 0, geom, consts) * drho / geom.a


def _phase_integral(nu, dt):
    """``integral_0^dt exp(i nu t) dt``, finite at ``nu = 0``."""
    return dt * np.exp(0.5j * nu * dt) * np.sinc(nu * dt / (2.0 * np.pi))


def sinc_kernel(delta_omega, dt):
    """``sin^2(dw dt / 2) / dw^2`` with its limit ``dt^2 / 4`` at ``dw = 0``."""
    return 0.25 * dt * dt * np.sinc(np.asarray(delta_omega) * dt / (2.0 * np.pi)) ** 2


def pair_amplitude(ctx: StressContext, n1: int, n2: int, dt: float,
                   include_counter_rotating: bool = False) -> PairAmplitude:
    """First-order amplitude of ``{n1, n2}`` after driving for ``dt`` seconds.

    ``c = -(i/hbar) integral_0^dt <{n1,n2}|dV(t)|0> exp(i (w1 + w2) t) dt`` with
    ``dV`` following ``amplitude * cos(omega0 t)``.  Without the
    counter-rotating term only the ``exp(-i omega0 t)`` half of the cosine is
    kept.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    _labels(n1, n2)
    w1 = tem_frequency(n1, ctx.geom, ctx.consts)
    w2 = tem_frequency(n2, ctx.geom, ctx.consts)
    omega0 = ctx.drive.omega0
    detuning = w1 + w2 - omega0
    if n1 != -n2:
        return PairAmplitude(n1, n2, 0j, detuning)
    scale = w1 * ctx.drive.amplitude * ctx.g  # matrix element / hbar per unit cos
    integral = 0.5 * _phase_integral(detuning, dt)
    if include_counter_rotating:
        integral += 0.5 * _phase_integral(w1 + w2 + omega0, dt)
    return PairAmplitude(n1, n2, complex(-1j * scale * integral), detuning)


def pair_probability(ctx: StressContext, n: int, dt: float,
                     include_counter_rotating: bool = False) -> float:
    """``|c_{n,-n}(dt)|^2``.

    Rotating-wave form: ``(omega_n amplitude g)^2 sin^2(dw dt/2) / dw^2`` with
    ``dw = 2 omega_n - omega0``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    _labels(n)
    if include_counter_rotating:
        return abs(pair_amplitude(ctx, n, -n, dt, True).value) ** 2
    omega = tem_frequency(n, ctx.geom, ctx.consts)
    return (omega * ctx.drive.amplitude * ctx.g) ** 2 * float(sinc_kernel(2.0 * omega - ctx.drive.omega0, dt))


def pair_probability_array(ctx: StressContext, n: np.ndarray, dt: float,
                           include_counter_rotating: bool = False) -> np.ndarray:
    """Vectorised :func:`pair_probability` over an integer array of labels."""
    n = np.asarray(n)
    if np.any(n == 0):
        raise StaticModeError("n = 0 is the static mode and carries no photons")
    omega = np.abs(n) * math.pi * ctx.consts.c / ctx.geom.L
    scale = (omega * ctx.drive.amplitude * ctx.g) ** 2
    if not include_counter_rotating:
        return scale * sinc_kernel(2.0 * omega - ctx.drive.omega0, dt)
    integral = 0.5 * (_phase_integral(2.0 * omega - ctx.drive.omega0, dt)
                      + _phase_integral(2.0 * omega + ctx.drive.omega0, dt))
    return scale * np.abs(integral) ** 2

