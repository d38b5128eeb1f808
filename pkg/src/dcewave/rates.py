"""Photon-pair emission rates, the discrete-mode oracle and spectra.

Closed forms
------------
coax, general gap:  dN/dt = L w0^2 drho0^2 / (16 c (a+b)^2 log^2(1+a/b))
coax, b >> a:       dN/dt = L w0^2 drho0^2 / (16 c a^2)
plates:             dN/dt = A w0^3 dz0^2 / (64 c^2 a^2)

The discrete oracle sums the finite-time pair probabilities over every
TEM label up to ``4 omega0`` instead of passing to the continuum, so it
checks the golden-rule limit rather than assuming it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Literal
import warnings

import numpy as np

from .perturbation import StressContext, pair_probability_array
from .quantities import (
    CODATA2018,
    CoaxGeometry,
    Drive,
    PhysicalConstants,
    PlateGeometry,
    ValidityReport,
    validate_regime,
)
from .specfun import find_cutoffs

__all__ = [
    "EmissionResult",
    "SpectrumSample",
    "Spectrum",
    "DiscreteResult",
    "PfaComparison",
    "RegimeWarning",
    "lowest_coax_cutoff",
    "plate_cutoff",
    "coax_rate",
    "coax_rate_small_gap",
    "plate_rate",
    "discrete_photon_number",
    "emission_spectrum",
    "pfa_compare",
    "oracle_length",
    "golden_rule_convergence",
]

GeometryTag = Literal["coax", "plates"]
FormulaTag = Literal["general", "small-gap", "golden-rule", "discrete-oracle"]

TRUNCATION_FACTOR = 4.0  # discrete sums keep omega_n <= 4 omega0
SMALL_GAP_WARN = 0.1


class RegimeWarning(UserWarning):
    """Inputs lie outside the regime where a formula is trustworthy."""


@dataclass(frozen=True)
class EmissionResult:
    rate: float  # photons/s
    photon_frequency: float  # rad/s
    geometry_tag: GeometryTag
    formula_tag: FormulaTag
    validity: ValidityReport
    extras: dict = field(default_factory=dict)


@lru_cache(maxsize=256)
def _lowest_cutoff_cached(b: float, a: float, c: float) -> float:
    geom = CoaxGeometry(b=b, a=a, L=1.0)
    consts = PhysicalConstants(c=c, hbar=CODATA2018.hbar, eps0=CODATA2018.eps0)
    # TE11 is the lowest non-TEM mode of an annulus; m <= 1, p = 1 covers both families.
    return find_cutoffs(geom, m_max=1, p_max=1, consts=consts).lowest.omega_c


def lowest_coax_cutoff(geom: CoaxGeometry, consts: PhysicalConstants = CODATA2018) -> float:
    """Lowest TE/TM cutoff angular frequency of the annulus (cached)."""
    return _lowest_cutoff_cached(geom.b, geom.a, consts.c)


def plate_cutoff(geom: PlateGeometry, consts: PhysicalConstants = CODATA2018) -> float:
    """Lowest ``l = 1`` TM frequency ``pi c / a``."""
    return math.pi * consts.c / geom.a


def _coax_validity(geom, drive, consts, cutoff):
    if cutoff is None:
        cutoff = lowest_coax_cutoff(geom, consts)
    return validate_regime(drive, geom, cutoff, consts)


def _warn_invalid(report: ValidityReport, what: str) -> None:
    failed = [c.name for c in report.checks if not c.caveat and not c.passed]
    if failed:
        warnings.warn(f"{what}: regime checks failed: {', '.join(failed)}", RegimeWarning, stacklevel=3)


def coax_rate(geom: CoaxGeometry, drive: Drive, consts: PhysicalConstants = CODATA2018,
              cutoff: float | None = None) -> EmissionResult:
    """Golden-rule TEM pair rate for any gap-to-radius ratio.

    Validity failures (e.g. ``omega0`` above the TE11 cutoff) are attached to
    the result and emitted as :class:`RegimeWarning`; the rate is still
    returned.
    """
    a, b = geom.a, geom.b
    denom = 16.0 * consts.c * ((a + b) * math.log1p(a / b)) ** 2
    rate = geom.L * drive.omega0 ** 2 * drive.amplitude ** 2 / denom
    report = _coax_validity(geom, drive, consts, cutoff)
    _warn_invalid(report, "coax_rate")
    return EmissionResult(rate, 0.5 * drive.omega0, "coax", "general", report)


def coax_rate_small_gap(geom: CoaxGeometry, drive: Drive, consts: PhysicalConstants = CODATA2018,
                        cutoff: float | None = None) -> EmissionResult:
    """``b >> a`` limit of :func:`coax_rate`; warns when ``a/b > 0.1``."""
    if geom.a / geom.b > SMALL_GAP_WARN:
        warnings.warn(f"a/b = {geom.a / geom.b:.3g} > {SMALL_GAP_WARN}: small-gap rate is degraded",
                      RegimeWarning, stacklevel=2)
    rate = geom.L * drive.omega0 ** 2 * drive.amplitude ** 2 / (16.0 * consts.c * geom.a ** 2)
    report = _coax_validity(geom, drive, consts, cutoff)
    _warn_invalid(report, "coax_rate_small_gap")
    return EmissionResult(rate, 0.5 * drive.omega0, "coax", "small-gap", report)


def plate_rate(geom: PlateGeometry, drive: Drive, consts: PhysicalConstants = CODATA2018) -> EmissionResult:
    """Parallel-plate rate, valid for ``omega0 a / (pi c) < 1``."""
    rate = geom.A * drive.omega0 ** 3 * drive.amplitude ** 2 / (64.0 * consts.c ** 2 * geom.a ** 2)
    report = validate_regime(drive, geom, plate_cutoff(geom, consts), consts)
    _warn_invalid(report, "plate_rate")
    return EmissionResult(rate, 0.5 * drive.omega0, "plates", "golden-rule", report)


# --------------------------------------------------------------------------
# discrete-mode oracle


@dataclass(frozen=True)
class DiscreteResult:
    """Finite-time pair number from an explicit sum over TEM labels.

    ``n`` holds the positive label of each unordered pair ``{n, -n}``;
    ``probabilities[i]`` is ``|c_{n,-n}|^2`` for ``n[i]``.
    """

    delta_n: float
    dt: float
    n: np.ndarray
    probabilities: np.ndarray
    omega_cut: float
    tail_per_mode_bound: float
    counter_rotating_correction: float | None = None

    @property
    def rate(self) -> float:
        return self.delta_n / self.dt

    def pairs(self) -> Iterator[tuple[int, int, float]]:
        """Nonzero contributions as ``(n1, n2, probability)`` with ``n2 = -n1``."""
        for k, p in zip(self.n.tolist(), self.probabilities.tolist()):
            if p != 0.0:
                yield k, -k, p


def _labels_up_to(omega_cut: float, geom: CoaxGeometry, consts: PhysicalConstants) -> np.ndarray:
    n_max = math.floor(omega_cut * geom.L / (math.pi * consts.c))
    return np.arange(1, n_max + 1, dtype=np.int64)


def discrete_photon_number(geom: CoaxGeometry, drive: Drive, dt: float,
                           consts: PhysicalConstants = CODATA2018,
                           include_counter_rotating: bool = False) -> DiscreteResult:
    """Sum ``|c_{n,-n}(dt)|^2`` over each unordered pair with ``omega_n <= 4 omega0``.

    Labels past the truncation are off resonance: each contributes at most
    ``tail_per_mode_bound`` (a bound on ``(omega_n A g)^2 / dw^2``), and that
    contribution oscillates instead of growing with ``dt``.

    With ``include_counter_rotating`` the sum uses the full cosine drive and
    ``counter_rotating_correction`` gives its relative change against the
    rotating-wave sum.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    ctx = StressContext(geom, drive, consts)
    omega_cut = TRUNCATION_FACTOR * drive.omega0
    n = _labels_up_to(omega_cut, geom, consts)
    probs = pair_probability_array(ctx, n, dt)
    # ascending |n| reduction order keeps the sum bit-reproducible
    delta_n = math.fsum(probs.tolist())
    correction = None
    if include_counter_rotating:
        full = pair_probability_array(ctx, n, dt, include_counter_rotating=True)
        full_n = math.fsum(full.tolist())
        correction = (full_n - delta_n) / delta_n if delta_n > 0 else 0.0
        probs, delta_n = full, full_n
    # sup over omega >= omega_cut of omega^2 / (2 omega - omega0)^2 is at omega_cut
    w = omega_cut
    tail = (w * drive.amplitude * ctx.g / (2.0 * w - drive.omega0)) ** 2
    return DiscreteResult(delta_n, dt, n, probs, omega_cut, tail, correction)


def oracle_length(drive: Drive, dt: float, modes_under_lobe: int = 200,
                  consts: PhysicalConstants = CODATA2018) -> float:
    """Axial period ``L`` that puts ``modes_under_lobe`` labels under the main lobe.

    The main lobe ``|2 omega_n - omega0| < 2 pi / dt`` spans ``2 pi / dt`` in
    ``omega_n``; labels are spaced ``pi c / L`` apart.
    """
    return modes_under_lobe * consts.c * dt / 2.0


@dataclass(frozen=True)
class ConvergencePoint:
    omega0_dt: float
    L: float
    oracle_rate: float
    closed_rate: float

    @property
    def rel_error(self) -> float:
        return abs(self.oracle_rate / self.closed_rate - 1.0)


def golden_rule_convergence(b: float, a: float, drive: Drive, omega0_dts=(1e2, 1e3, 1e4),
                            modes_under_lobe: int = 200,
                            consts: PhysicalConstants = CODATA2018) -> list[ConvergencePoint]:
    """Compare the discrete oracle with the closed-form coax rate at growing ``omega0 dt``."""
    out = []
    for x in omega0_dts:
        dt = x / drive.omega0
        L = oracle_length(drive, dt, modes_under_lobe, consts)
        geom = CoaxGeometry(b=b, a=a, L=L)
        oracle = discrete_photon_number(geom, drive, dt, consts)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            closed = coax_rate(geom, drive, consts).rate
        out.append(ConvergencePoint(x, L, oracle.rate, closed))
    return out


# --------------------------------------------------------------------------
# spectrum


@dataclass(frozen=True)
class SpectrumSample:
    omega: float  # rad/s
    dN_domega: float  # photons per unit angular frequency (photons s / rad)
    n_index: int
    probability: float


@dataclass(frozen=True)
class Spectrum:
    """Per-mode emission spectrum after driving for ``dt``.

    Each sample is one axial direction: label ``n`` carries the photon of the
    pair ``{n, -n}`` travelling along ``sgn(n) z``.  ``dN_domega`` is the pair
    probability divided by the label spacing ``pi c / L``, so integrating one
    direction over ``omega`` gives the pair number ``Delta N``.
    """

    n: np.ndarray
    omega: np.ndarray
    probability: np.ndarray
    dN_domega: np.ndarray
    spacing: float  # rad/s between adjacent labels
    dt: float

    def __len__(self) -> int:
        return int(self.n.size)

    def __getitem__(self, i: int) -> SpectrumSample:
        return SpectrumSample(float(self.omega[i]), float(self.dN_domega[i]), int(self.n[i]),
                              float(self.probability[i]))

    def __iter__(self) -> Iterator[SpectrumSample]:
        for i in range(len(self)):
            yield self[i]

    def sample(self, n: int) -> SpectrumSample:
        idx = np.flatnonzero(self.n == n)
        if idx.size == 0:
            raise KeyError(n)
        return self[int(idx[0])]

    def forward(self) -> "Spectrum":
        keep = self.n > 0
        return Spectrum(self.n[keep], self.omega[keep], self.probability[keep],
                        self.dN_domega[keep], self.spacing, self.dt)

    def peak(self) -> SpectrumSample:
        return self[int(np.argmax(self.dN_domega))]

    def integral(self) -> float:
        """Integral over omega of the forward branch: the pair number."""
        fwd = self.forward()
        return math.fsum((fwd.dN_domega * self.spacing).tolist())

    def fwhm(self) -> float:
        """Full width at half maximum of the main lobe, linearly interpolated."""
        fwd = self.forward()
        y = fwd.dN_domega
        i = int(np.argmax(y))
        half = 0.5 * y[i]
        lo = i
        while lo > 0 and y[lo - 1] >= half:
            lo -= 1
        hi = i
        while hi < y.size - 1 and y[hi + 1] >= half:
            hi += 1
        if lo == 0 or hi == y.size - 1:
            raise ValueError("main lobe is not resolved inside the sampled range")
        x = fwd.omega

        def cross(j_out, j_in):
            return x[j_out] + (half - y[j_out]) * (x[j_in] - x[j_out]) / (y[j_in] - y[j_out])

        return float(cross(hi + 1, hi) - cross(lo - 1, lo))

    def fwhm_constant(self) -> float:
        """FWHM expressed in units of ``2 pi / dt``."""
        return self.fwhm() * self.dt / (2.0 * math.pi)


def emission_spectrum(geom: CoaxGeometry, drive: Drive, dt: float,
                      omega_min: float = 0.0, omega_max: float | None = None,
                      both_directions: bool = False,
                      consts: PhysicalConstants = CODATA2018) -> Spectrum:
    """Per-mode spectrum for labels with ``omega_min <= omega_n <= omega_max``.

    ``omega_max`` defaults to the oracle truncation ``4 omega0``.  Rows are in
    ascending ``n``; with ``both_directions`` the mirrored ``-n`` rows are
    included and carry identical values.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if omega_max is None:
        omega_max = TRUNCATION_FACTOR * drive.omega0
    if omega_max <= omega_min:
        raise ValueError("omega_max must exceed omega_min")
    ctx = StressContext(geom, drive, consts)
    n = _labels_up_to(omega_max, geom, consts)
    spacing = math.pi * consts.c / geom.L
    n = n[n * spacing >= omega_min]
    omega = n * spacing
    probs = pair_probability_array(ctx, n, dt)
    if both_directions:
        n = np.concatenate([-n[::-1], n])
        omega = np.concatenate([omega[::-1], omega])
        probs = np.concatenate([probs[::-1], probs])
    return Spectrum(n, omega, probs, probs / spacing, spacing, dt)


# --------------------------------------------------------------------------
# coax vs plates


@dataclass(frozen=True)
class PfaComparison:
    matrix_ratio: float  # coax / plate matrix element
    rate_ratio: float
    first_order_error_estimate: float  # a / (2b)


def pfa_compare(a: float, b: float) -> PfaComparison:
    """Coax-to-plate ratio of the pair matrix elements at equal gap and frequency."""
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    ratio = a / ((a + b) * math.log1p(a / b))
    return PfaComparison(ratio, ratio * ratio, a / (2.0 * b))
