import math
import warnings

import pytest
from hypothesis import given, strategies as st

from dcewave.quantities import (
    CODATA2018,
    CoaxGeometry,
    Drive,
    PhysicalConstants,
    PlateGeometry,
    peak_speed,
    validate_regime,
)
from dcewave.rates import RegimeWarning, coax_rate, coax_rate_small_gap, plate_rate

C = CODATA2018.c
W0 = 2 * math.pi * 1e10


def test_peak_speed_canonical_drive():
    drive = Drive(W0, 1e-7 * C / W0)
    assert peak_speed(drive) == pytest.approx(29.979, abs=5e-4)


def test_peak_speed_trivial():
    assert peak_speed(Drive(123.0, 0.0)) == 0.0
    assert peak_speed(Drive(1.0, 1.0)) == 1.0


@pytest.mark.parametrize("kwargs", [dict(b=0, a=1, L=1), dict(b=1, a=-1, L=1), dict(b=1, a=1, L=math.inf)])
def test_coax_geometry_rejects_nonpositive(kwargs):
    with pytest.raises(ValueError):
        CoaxGeometry(**kwargs)


def test_types_are_frozen():
    g = CoaxGeometry(b=1e-2, a=1e-6, L=0.03)
    with pytest.raises(AttributeError):
        g.a = 2.0
    assert g.outer_radius == pytest.approx(1e-2 + 1e-6)
    with pytest.raises(ValueError):
        PlateGeometry(A=0.0, a=1e-6)
    with pytest.raises(ValueError):
        Drive(0.0, 1.0)
    with pytest.raises(ValueError):
        Drive(1.0, -1e-9)
    with pytest.raises(ValueError):
        PhysicalConstants(c=-1.0, hbar=1.0, eps0=1.0)


def test_validate_regime_canonical_parameters_pass():
    geom = CoaxGeometry(b=1e-3, a=1e-6, L=0.03)
    drive = Drive(W0, 1e-10)  # amplitude / a = 1e-4
    drive_v = Drive.from_peak_speed(W0, 1e-7 * C)
    for d in (drive, drive_v):
        report = validate_regime(d, geom, cutoff=3e11)
        assert report.ok
        assert all(c.status == "pass" for c in report.checks if not c.caveat)
    assert validate_regime(drive, geom, 3e11)["perturbative"].ratio == pytest.approx(1e-4)
    assert validate_regime(drive_v, geom, 3e11)["nonrelativistic"].ratio == pytest.approx(1e-7)


def test_validate_regime_zero_amplitude():
    report = validate_regime(Drive(W0, 0.0), CoaxGeometry(1e-3, 1e-6, 0.03), 3e11)
    check = report["perturbative"]
    assert check.status == "pass" and check.ratio == 0.0


def test_validate_regime_above_cutoff_fails():
    cutoff = 3e10
    report = validate_regime(Drive(1.5 * cutoff, 1e-10), CoaxGeometry(1e-2, 1e-6, 0.03), cutoff)
    check = report["tem_only"]
    assert check.status == "fail"
    assert check.ratio == pytest.approx(1.5)
    assert not report.ok


@pytest.mark.parametrize("ratio,status", [(0.005, "pass"), (0.05, "warn"), (0.5, "fail")])
def test_perturbative_bands(ratio, status):
    a = 1e-6
    report = validate_regime(Drive(1e9, ratio * a), PlateGeometry(A=1e-4, a=a), cutoff=1e15)
    assert report["perturbative"].status == status


def test_nonrelativistic_limit():
    report = validate_regime(Drive.from_peak_speed(1e9, 2e-3 * C), PlateGeometry(1e-4, 1.0), 1e15)
    assert report["nonrelativistic"].status == "fail"


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan])
def test_validate_regime_rejects_bad_cutoff(bad):
    with pytest.raises(ValueError):
        validate_regime(Drive(1.0, 0.0), PlateGeometry(1.0, 1.0), bad)


def test_long_guide_is_a_caveat_only():
    geom = CoaxGeometry(b=1e-3, a=1e-6, L=2 * math.pi * C / W0)
    report = validate_regime(Drive(W0, 1e-10), geom, 3e11)
    assert report["long_guide"].ratio == pytest.approx(1.0)
    assert report["long_guide"].status == "warn"
    assert report.ok
    assert [c.name for c in report.caveats] == ["long_guide"]


@given(st.floats(1e3, 1e12), st.floats(0, 1e-6), st.floats(1e3, 1e13))
def test_validity_report_is_pure(omega0, amp, cutoff):
    geom = CoaxGeometry(1e-3, 1e-6, 0.1)
    d = Drive(omega0, amp)
    assert validate_regime(d, geom, cutoff) == validate_regime(d, geom, cutoff)


@given(st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.01, 100))
def test_rates_depend_on_c_only_as_written(sc, sh, se):
    """Unit audit: hbar and eps0 cancel; coax ~ 1/c and plates ~ 1/c^2 at fixed L, A, omega0."""
    base = CODATA2018
    scaled = PhysicalConstants(c=base.c * sc, hbar=base.hbar * sh, eps0=base.eps0 * se)
    only_h_e = PhysicalConstants(c=base.c, hbar=base.hbar * sh, eps0=base.eps0 * se)
    geom = CoaxGeometry(b=1e-3, a=1e-6, L=0.03)
    plates = PlateGeometry(A=9e-4, a=1e-6)
    drive = Drive(W0, 1e-9)
    cut = 1e12  # fixed cutoff: isolates the rate formulas from the validity check
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        r0 = coax_rate(geom, drive, base, cutoff=cut).rate
        assert coax_rate(geom, drive, only_h_e, cutoff=cut).rate == r0
        assert coax_rate(geom, drive, scaled, cutoff=cut).rate == pytest.approx(r0 / sc, rel=1e-12)
        s0 = coax_rate_small_gap(geom, drive, base, cutoff=cut).rate
        assert coax_rate_small_gap(geom, drive, scaled, cutoff=cut).rate == pytest.approx(s0 / sc, rel=1e-12)
        p0 = plate_rate(plates, drive, base).rate
        assert plate_rate(plates, drive, only_h_e).rate == p0
        assert plate_rate(plates, drive, scaled).rate == pytest.approx(p0 / sc**2, rel=1e-12)
