"""Single-well resolvent: closed form vs spectral sum, poles, invariants.

Closed-form reference literals were computed with mpmath (dps=40) through
the same analytic expression evaluated in arbitrary precision.
"""

import cmath
import math
import random

import numpy as np
import pytest

from nonadband.errors import PoleProximityError
from nonadband.greens import (
    EnergyPoint,
    HarmonicSite,
    eigen_energy,
    eigenfunction,
    gf_closed,
    gf_spectral,
    spectral_batch,
)
from nonadband.units import wavenumber_to_internal

UNIT_WELL = HarmonicSite(mass=1.0, omega=1.0)
PAPER_OMEGA = wavenumber_to_internal(500.0)
PAPER_WELL = HarmonicSite(mass=35.4, omega=PAPER_OMEGA)

# (x, x0, E, G) for the unit well -- mpmath
CLOSED_REFERENCE = [
    (0.0, 0.0, 0.25, -2.6259472326995934),
    (0.3, -0.4, 0.25, -1.8437131800803781),
    (1.0, 0.2, 0.8, 1.0962472716911966),
    (-0.7, -0.7, 1.3, -1.6101177213542292),
]


@pytest.mark.parametrize("x,x0,e,want", CLOSED_REFERENCE)
def test_closed_form_reference_values(x, x0, e, want):
    got = gf_closed(UNIT_WELL, x, x0, EnergyPoint(e, 0.0))
    assert got.imag == 0.0
    assert got.real == pytest.approx(want, rel=5e-11)


def test_closed_form_complex_energy_reference():
    got = gf_closed(UNIT_WELL, 0.3, -0.4, EnergyPoint(0.25, 0.001))
    want = -1.8436813698149761 - 0.0078937649921238916j
    assert abs(got - want) <= 5e-11 * abs(want)


def test_closed_form_paper_well_reference():
    got = gf_closed(PAPER_WELL, 0.02, -0.01, EnergyPoint(0.6 * PAPER_OMEGA, 0.0))
    assert got.real == pytest.approx(7.9011932612522031, rel=5e-11)


def test_spectral_sum_converges_to_closed_form():
    e = EnergyPoint(0.25, 0.0)
    gc = gf_closed(UNIT_WELL, 0.3, -0.4, e)
    # off-diagonal truncation error falls like 1/n_max
    g5 = gf_spectral(UNIT_WELL, 0.3, -0.4, e, n_max=100000)
    assert abs(g5 - gc) / abs(gc) < 1e-5
    g6 = gf_spectral(UNIT_WELL, 0.3, -0.4, e, n_max=400000)
    assert abs(g6 - gc) / abs(gc) < 2.5e-6
    assert abs(g6 - gc) < abs(g5 - gc)


def test_spectral_sum_diagonal_slow_but_converging():
    # diagonal tail falls like 1/sqrt(n_max); document the rate, not wish it away
    e = EnergyPoint(0.25, 0.0)
    gc = gf_closed(UNIT_WELL, 0.0, 0.0, e)
    r1 = abs(gf_spectral(UNIT_WELL, 0.0, 0.0, e, n_max=100000) - gc) / abs(gc)
    r2 = abs(gf_spectral(UNIT_WELL, 0.0, 0.0, e, n_max=400000) - gc) / abs(gc)
    assert r1 < 1e-3
    assert r2 == pytest.approx(r1 / 2.0, rel=0.2)  # 4x terms -> 2x accuracy


def test_spectral_n_max_is_inclusive():
    e = EnergyPoint(0.25, 0.0)
    got = gf_spectral(UNIT_WELL, 0.1, 0.2, e, n_max=0)
    want = (eigenfunction(UNIT_WELL, 0, 0.1) * eigenfunction(UNIT_WELL, 0, 0.2)
            / (0.25 - eigen_energy(UNIT_WELL, 0)))
    assert got == pytest.approx(want, rel=1e-14)
    with pytest.raises(ValueError):
        gf_spectral(UNIT_WELL, 0.1, 0.2, e, n_max=-1)


def test_symmetry_in_arguments():
    rng = random.Random(7)
    for _ in range(10):
        x, x0 = rng.uniform(-1, 1), rng.uniform(-1, 1)
        e = EnergyPoint(rng.uniform(0.1, 2.3), 0.0)
        if min(abs(e.re - eigen_energy(UNIT_WELL, n)) for n in range(4)) < 1e-3:
            continue
        a = gf_closed(UNIT_WELL, x, x0, e)
        b = gf_closed(UNIT_WELL, x0, x, e)
        assert a == b  # same max/min decomposition -> bitwise equal


def test_translation_covariance():
    shifted = HarmonicSite(mass=1.0, omega=1.0, center=0.37)
    e = EnergyPoint(0.6, 0.0)
    a = gf_closed(UNIT_WELL, 0.2, -0.1, e)
    b = gf_closed(shifted, 0.2 + 0.37, -0.1 + 0.37, e)
    assert abs(a - b) <= 1e-12 * abs(a)


def test_offset_shifts_energy_argument():
    lifted = HarmonicSite(mass=1.0, omega=1.0, offset=0.9)
    a = gf_closed(UNIT_WELL, 0.2, -0.1, EnergyPoint(0.6, 0.0))
    b = gf_closed(lifted, 0.2, -0.1, EnergyPoint(0.6 + 0.9, 0.0))
    assert abs(a - b) <= 1e-12 * abs(a)


def test_retarded_sign_on_diagonal():
    for eta in (1e-6, 1e-3, 0.1):
        for e in (0.3, 0.5, 1.7):
            g = gf_closed(UNIT_WELL, 0.15, 0.15, EnergyPoint(e, eta))
            assert g.imag < 0.0


def test_pole_guard_trips_only_at_real_energy():
    e0 = eigen_energy(UNIT_WELL, 1)
    with pytest.raises(PoleProximityError):
        gf_closed(UNIT_WELL, 0.1, 0.1, EnergyPoint(e0 + 1e-8, 0.0))
    # exactly at the guard distance: allowed (boundary belongs to the caller)
    gf_closed(UNIT_WELL, 0.1, 0.1, EnergyPoint(e0 + 1e-6, 0.0))
    # with any positive eta the evaluation is regular
    g = gf_closed(UNIT_WELL, 0.1, 0.1, EnergyPoint(e0, 1e-9))
    assert math.isfinite(g.real) and math.isfinite(g.imag)


def test_eigen_energy_ladder():
    site = HarmonicSite(mass=2.0, omega=0.7, offset=1.1)
    for n in range(5):
        assert eigen_energy(site, n) == pytest.approx(1.1 + (n + 0.5) * 0.7,
                                                      rel=1e-15)


def test_eigenfunction_orthonormality():
    # trapezoid on a wide fine grid; ground and first excited
    xs = np.linspace(-8.0, 8.0, 4001)
    p0 = np.array([eigenfunction(UNIT_WELL, 0, x) for x in xs])
    p1 = np.array([eigenfunction(UNIT_WELL, 1, x) for x in xs])
    assert np.trapezoid(p0 * p0, xs) == pytest.approx(1.0, abs=1e-10)
    assert np.trapezoid(p1 * p1, xs) == pytest.approx(1.0, abs=1e-10)
    assert np.trapezoid(p0 * p1, xs) == pytest.approx(0.0, abs=1e-12)


def test_eigenfunction_underflow_is_exact_zero():
    assert eigenfunction(UNIT_WELL, 0, 60.0) == 0.0


def test_spectral_batch_matches_scalar_sum():
    pairs = np.array([[0.3, -0.4], [0.0, 0.2]])
    energies = np.array([0.25 + 0.0j, 0.8 + 1e-4j])
    out = spectral_batch(UNIT_WELL, pairs, energies, [5000])
    for p, (x, x0) in enumerate(pairs):
        for m, ev in enumerate(energies):
            want = gf_spectral(UNIT_WELL, float(x), float(x0),
                               EnergyPoint(ev.real, ev.imag), n_max=5000)
            assert abs(out[0, p, m] - want) <= 1e-12 * abs(want)


def test_spectral_batch_checkpoints_are_prefix_sums():
    pairs = np.array([[0.3, -0.4]])
    energies = np.array([0.25 + 0.0j])
    out = spectral_batch(UNIT_WELL, pairs, energies, [100, 1000, 1000])
    a = gf_spectral(UNIT_WELL, 0.3, -0.4, EnergyPoint(0.25, 0.0), n_max=100)
    b = gf_spectral(UNIT_WELL, 0.3, -0.4, EnergyPoint(0.25, 0.0), n_max=1000)
    assert out.shape[0] == 2  # duplicate checkpoint collapsed
    assert abs(out[0, 0, 0] - a) <= 1e-13 * abs(a)
    assert abs(out[1, 0, 0] - b) <= 1e-13 * abs(b)


def test_site_validation():
    with pytest.raises(ValueError):
        HarmonicSite(mass=-1.0, omega=1.0)
    with pytest.raises(ValueError):
        HarmonicSite(mass=1.0, omega=0.0)
    with pytest.raises(ValueError):
        EnergyPoint(1.0, -1e-9)


def test_retarded_branch_against_spectral_sum_complex_energy():
    # complex energy: both routes regular, must agree
    e = EnergyPoint(1.1, 0.05)
    gc = gf_closed(UNIT_WELL, 0.4, 0.1, e)
    gs = gf_spectral(UNIT_WELL, 0.4, 0.1, e, n_max=200000)
    assert abs(gc - gs) / abs(gc) < 1e-5
    assert gc.imag < 0.0 or abs(gc.imag) < 1e-12
