"""Integer-order Bessel functions, annular cross products and cutoff search.

Evaluation scheme
-----------------
* ``x < 25``: Miller backward recurrence for ``J_k`` normalised with
  ``J_0 + 2 sum J_2k = 1``.  The same pass accumulates the Neumann series
  that give ``Y_0`` and ``Y_1``.
* ``x >= 25``: Hankel asymptotic expansion for orders 0 and 1, then
  forward recurrence (``J`` only while the order stays below ``x``).
* ``Y_m`` for ``m >= 2`` always comes from forward recurrence, which is
  stable for the second kind.

Everything is vectorised over ``x``; orders are small non-negative integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .quantities import CODATA2018, PhysicalConstants

__all__ = [
    "bessel_j",
    "bessel_y",
    "bessel_jp",
    "bessel_yp",
    "cross_product_tm",
    "cross_product_te",
    "CutoffEntry",
    "CutoffTable",
    "CutoffSearchError",
    "find_cutoffs",
]

Family = Literal["TE", "TM"]

_ASYMPTOTIC_X = 25.0
_RESCALE_AT = 1e200
_EULER_GAMMA = 0.57721566490153286061


def _miller_start(order_max: int, x_max: float) -> int:
    n = int(max(order_max, x_max) + 30.0 + 10.0 * x_max ** (1.0 / 3.0))
    return n + (n % 2)


def _miller(order_max: int, x: np.ndarray):
    """Backward recurrence; returns J[0..order_max], Y0, Y1 for 0 < x.

    ``order_max`` must be at least 1.
    """
    n_start = _miller_start(order_max, float(x.max()))
    inv_x = 1.0 / x
    jtab = np.zeros((order_max + 1, x.size))
    norm = np.zeros_like(x)
    s_even = np.zeros_like(x)  # sum_{k>=1} (-1)^k J_2k / k
    s_odd = np.zeros_like(x)  # sum_{k>=1} (-1)^k (2k+1)/(k(k+1)) J_2k+1
    j_next = np.zeros_like(x)
    j_cur = np.ones_like(x)

    for k in range(n_start, -1, -1):
        if k <= order_max:
            jtab[k] = j_cur
        if k == 0:
            norm += j_cur
        elif k % 2 == 0:
            h = k // 2
            norm += 2.0 * j_cur
            s_even += (-1.0) ** h * j_cur / h
        elif k >= 3:
            h = (k - 1) // 2
            s_odd += (-1.0) ** h * (2 * h + 1) / (h * (h + 1)) * j_cur
        if k == 0:
            break
        j_prev = 2.0 * k * inv_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev

        big = np.abs(j_cur) > _RESCALE_AT
        if big.any():
            f = np.where(big, 1.0 / _RESCALE_AT, 1.0)
            j_cur *= f
            j_next *= f
            norm *= f
            s_even *= f
            s_odd *= f
            jtab *= f

    jtab /= norm
    s_even /= norm
    s_odd /= norm
    log_term = np.log(0.5 * x) + _EULER_GAMMA
    y0 = (2.0 / math.pi) * (log_term * jtab[0] - 2.0 * s_even)
    y1 = (2.0 / math.pi) * ((log_term - 1.0) * jtab[1] - jtab[0] * inv_x - s_odd)
    return jtab, y0, y1


def _hankel_coeffs(order: int, x: np.ndarray):
    """Asymptotic P, Q sums for order ``order`` (0 or 1), x >= 25."""
    mu = 4.0 * order * order
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    inv8x = 1.0 / (8.0 * x)
    prev = np.full_like(x, np.inf)
    for k in range(1, 60):
        term = term * (mu - (2 * k - 1) ** 2) * inv8x / k
        mag = np.abs(term)
        if np.all((mag < 1e-17) | (mag > prev)):
            break
        use = mag <= prev
        t = np.where(use, term, 0.0)
        if k % 2 == 1:
            q += (-1.0) ** ((k - 1) // 2) * t
        else:
            p += (-1.0) ** (k // 2) * t
        prev = np.where(use, mag, 0.0)
    return p, q


def _hankel(x: np.ndarray):
    amp = np.sqrt(2.0 / (math.pi * x))
    out = []
    for order in (0, 1):
        p, q = _hankel_coeffs(order, x)
        chi = x - (0.5 * order + 0.25) * math.pi
        c, s = np.cos(chi), np.sin(chi)
        out.append((amp * (p * c - q * s), amp * (p * s + q * c)))
    (j0, y0), (j1, y1) = out
    return j0, j1, y0, y1


def _jy_table(order_max: int, x: np.ndarray, want_y: bool = True):
    """J_k(x) and Y_k(x) for k = 0..order_max; x must be strictly positive."""
    order_max = max(order_max, 1)
    jtab = np.empty((order_max + 1, x.size))
    ytab = np.empty((order_max + 1, x.size))

    asym = x >= _ASYMPTOTIC_X
    forward_j = asym & (x > order_max + 5.0)
    miller_j = ~forward_j

    if asym.any():
        xa = x[asym]
        j0, j1, y0, y1 = _hankel(xa)
        ytab[0, asym], ytab[1, asym] = y0, y1
        jtab[0, asym], jtab[1, asym] = j0, j1
    if miller_j.any():
        xm = x[miller_j]
        jm, y0m, y1m = _miller(order_max, xm)
        jtab[:, miller_j] = jm
        small = ~asym[miller_j]
        if small.any():
            idx = np.flatnonzero(miller_j)[small]
            ytab[0, idx] = y0m[small]
            ytab[1, idx] = y1m[small]

    if order_max >= 2:
        inv_x = 1.0 / x
        if forward_j.any():
            xf = inv_x[forward_j]
            for k in range(1, order_max):
                jtab[k + 1, forward_j] = 2.0 * k * xf * jtab[k, forward_j] - jtab[k - 1, forward_j]
        if want_y:
            for k in range(1, order_max):
                ytab[k + 1] = 2.0 * k * inv_x * ytab[k] - ytab[k - 1]
    return jtab, ytab


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr.reshape(-1), arr.ndim == 0


def _shape_out(values: np.ndarray, scalar: bool, like):
    if scalar:
        return float(values[0])
    return values.reshape(np.shape(like))


def _check_order(m: int) -> int:
    if int(m) != m or m < 0:
        raise ValueError(f"order must be a non-negative integer, got {m!r}")
    return int(m)


def bessel_j(m: int, x):
    """Bessel function of the first kind ``J_m(x)`` for ``x >= 0``."""
    m = _check_order(m)
    flat, scalar = _as_array(x)
    if np.any(flat < 0) or np.any(~np.isfinite(flat)):
        raise ValueError("bessel_j requires finite x >= 0")
    out = np.empty_like(flat)
    zero = flat == 0.0
    out[zero] = 1.0 if m == 0 else 0.0
    if (~zero).any():
        jtab, _ = _jy_table(m, flat[~zero], want_y=False)
        out[~zero] = jtab[m]
    return _shape_out(out, scalar, x)


def bessel_y(m: int, x):
    """Bessel function of the second kind ``Y_m(x)`` for ``x > 0``."""
    m = _check_order(m)
    flat, scalar = _as_array(x)
    if np.any(flat <= 0) or np.any(~np.isfinite(flat)):
        raise ValueError("bessel_y is singular at x <= 0")
    _, ytab = _jy_table(m, flat)
    return _shape_out(ytab[m], scalar, x)


def _derivative(tab: np.ndarray, m: int) -> np.ndarray:
    # Z'_m = (Z_{m-1} - Z_{m+1}) / 2 with Z_{-1} = -Z_1
    lower = -tab[1] if m == 0 else tab[m - 1]
    return 0.5 * (lower - tab[m + 1])


def bessel_jp(m: int, x):
    """Derivative ``J'_m(x)`` from the order recurrence."""
    m = _check_order(m)
    flat, scalar = _as_array(x)
    if np.any(flat < 0):
        raise ValueError("bessel_jp requires x >= 0")
    out = np.empty_like(flat)
    zero = flat == 0.0
    out[zero] = 0.5 if m == 1 else 0.0
    if (~zero).any():
        jtab, _ = _jy_table(m + 1, flat[~zero], want_y=False)
        out[~zero] = _derivative(jtab, m)
    return _shape_out(out, scalar, x)


def bessel_yp(m: int, x):
    """Derivative ``Y'_m(x)`` from the order recurrence."""
    m = _check_order(m)
    flat, scalar = _as_array(x)
    if np.any(flat <= 0):
        raise ValueError("bessel_yp is singular at x <= 0")
    _, ytab = _jy_table(m + 1, flat)
    return _shape_out(_derivative(ytab, m), scalar, x)


def _check_radii(k, r_in: float, r_out: float) -> tuple[np.ndarray, bool]:
    if not (0.0 < r_in < r_out):
        raise ValueError(f"radii must satisfy 0 < r_in < r_out, got r_in={r_in}, r_out={r_out}")
    flat, scalar = _as_array(k)
    if np.any(flat <= 0):
        raise ValueError("radial wavenumber k must be > 0")
    return flat, scalar


def _cross(m: int, flat: np.ndarray, r1: float, r2: float, derivative: bool) -> np.ndarray:
    order = m + 1 if derivative else m
    x = np.concatenate([flat * r1, flat * r2])
    jtab, ytab = _jy_table(order, x)
    if derivative:
        j, y = _derivative(jtab, m), _derivative(ytab, m)
    else:
        j, y = jtab[m], ytab[m]
    n = flat.size
    return j[:n] * y[n:] - j[n:] * y[:n]


def cross_product_tm(m: int, k, r_in: float, r_out: float, *, _unchecked: bool = False):
    """``J_m(k r_in) Y_m(k r_out) - J_m(k r_out) Y_m(k r_in)``.

    Zeros in ``k`` are the TM cutoff wavenumbers of the annulus
    ``r_in < r < r_out``.  Swapping the radii flips the sign; the ordering
    check can be bypassed with ``_unchecked`` for that purpose only.
    """
    m = _check_order(m)
    if _unchecked:
        flat, scalar = _as_array(k)
    else:
        flat, scalar = _check_radii(k, r_in, r_out)
    return _shape_out(_cross(m, flat, r_in, r_out, False), scalar, k)


def cross_product_te(m: int, k, r_in: float, r_out: float, *, _unchecked: bool = False):
    """``J'_m(k r_in) Y'_m(k r_out) - J'_m(k r_out) Y'_m(k r_in)`` (TE cutoffs)."""
    m = _check_order(m)
    if _unchecked:
        flat, scalar = _as_array(k)
    else:
        flat, scalar = _check_radii(k, r_in, r_out)
    return _shape_out(_cross(m, flat, r_in, r_out, True), scalar, k)


# --------------------------------------------------------------------------
# cutoff search


class CutoffSearchError(RuntimeError):
    """Bracketing found fewer zeros than requested.

    ``partial`` holds the entries that were located before giving up.
    """

    def __init__(self, message: str, partial: list["CutoffEntry"], failures: list[tuple[str, int]]):
        super().__init__(message)
        self.partial = partial
        self.failures = failures


@dataclass(frozen=True)
class CutoffEntry:
    family: Family
    m: int
    p: int
    k: float  # radial cutoff wavenumber, 1/m
    omega_c: float  # rad/s


@dataclass(frozen=True)
class CutoffTable:
    entries: tuple[CutoffEntry, ...]

    def __post_init__(self):
        omegas = [e.omega_c for e in self.entries]
        if any(w <= 0 for w in omegas):
            raise ValueError("cutoff frequencies must be positive")
        if omegas != sorted(omegas):
            raise ValueError("cutoff entries must be sorted by omega_c")

    @property
    def lowest(self) -> CutoffEntry:
        """Global minimum over TE and TM: the TEM-only threshold."""
        if not self.entries:
            raise ValueError("empty cutoff table")
        return self.entries[0]

    def family(self, family: Family) -> list[CutoffEntry]:
        return [e for e in self.entries if e.family == family]

    def scaled(self, factor: float) -> "CutoffTable":
        return CutoffTable(tuple(
            CutoffEntry(e.family, e.m, e.p, e.k / factor, e.omega_c / factor) for e in self.entries
        ))


def _k_grid(r_in: float, r_out: float, k_max: float) -> np.ndarray:
    """Bracketing grid: geometric at small k, uniform step 0.1/gap above.

    The geometric part keeps every step below 0.1/gap while still resolving
    the low TE_m1 zeros near 2m/(r_in + r_out), which sit far below 1/gap for
    a thin annulus.
    """
    gap = r_out - r_in
    step = 0.1 / gap
    ratio = 1.01
    k_switch = step / (ratio - 1.0)
    k_lo = 0.01 / r_out
    parts = []
    if k_lo < k_switch:
        n_geo = int(math.ceil(math.log(k_switch / k_lo) / math.log(ratio)))
        parts.append(k_lo * ratio ** np.arange(n_geo))
        start = parts[0][-1] * ratio
    else:
        start = k_lo
    parts.append(np.arange(start, k_max + step, step))
    return np.concatenate(parts)


def _bisect(f, lo: float, hi: float, f_lo: float, rtol: float) -> float:
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _zeros_for(family: Family, m: int, r_in: float, r_out: float, p_max: int,
               rtol: float, k_limit: float) -> list[float]:
    cross = cross_product_te if family == "TE" else cross_product_tm
    gap = r_out - r_in
    found: list[float] = []
    k_top = min(k_limit, (p_max + m + 2) * math.pi / gap + 2.0 * (m + 1) / r_in)
    k_prev_top = 0.0
    while True:
        grid = _k_grid(r_in, r_out, k_top)
        grid = grid[grid > k_prev_top] if k_prev_top else grid
        vals = cross(m, grid, r_in, r_out)
        sign_change = np.flatnonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))
        for i in sign_change:
            if len(found) == p_max:
                break
            f_scalar = lambda kk: float(cross(m, kk, r_in, r_out))  # noqa: E731
            found.append(_bisect(f_scalar, float(grid[i]), float(grid[i + 1]), float(vals[i]), rtol))
        if len(found) >= p_max or k_top >= k_limit:
            return found[:p_max]
        k_prev_top = float(grid[-1])
        k_top = min(k_limit, 2.0 * k_top)


def find_cutoffs(geom, m_max: int = 3, p_max: int = 3, *,
                 consts: PhysicalConstants = CODATA2018, rtol: float = 1e-10,
                 families: Iterable[Family] = ("TE", "TM")) -> CutoffTable:
    """TE and TM cutoff table of the annulus ``b < r < b + a``.

    Raises :class:`CutoffSearchError` (with the partial table attached) if
    some ``(family, m)`` has fewer than ``p_max`` zeros below ``1e3/a``.
    """
    if m_max < 0 or p_max < 1:
        raise ValueError("need m_max >= 0 and p_max >= 1")
    r_in, r_out = geom.b, geom.b + geom.a
    k_limit = 1e3 / (r_out - r_in)
    entries: list[CutoffEntry] = []
    failures: list[tuple[str, int]] = []
    for family in families:
        for m in range(m_max + 1):
            zeros = _zeros_for(family, m, r_in, r_out, p_max, rtol, k_limit)
            if len(zeros) < p_max:
                failures.append((family, m))
            entries.extend(CutoffEntry(family, m, p, k, consts.c * k)
                           for p, k in enumerate(zeros, start=1))
    entries.sort(key=lambda e: (e.omega_c, e.family, e.m, e.p))
    if failures:
        raise CutoffSearchError(
            f"fewer than {p_max} zeros found below k = {k_limit:.6g} 1/m for {failures}",
            entries, failures)
    return CutoffTable(tuple(entries))
