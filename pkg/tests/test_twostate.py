"""Coupled two-well resolvent: Dyson identity, exchange symmetry, limits."""

import math
import random

import numpy as np
import pytest

from nonadband.errors import ResonanceError
from nonadband.greens import EnergyPoint, HarmonicSite, eigen_energy, eigenfunction
from nonadband.twostate import (
    CoupledPair,
    CouplingSpec,
    GfProvider,
    WavefunctionPair,
    denominator,
    g11,
    g12,
    g21,
    g22,
    half_fourier_wavefunction,
)
from nonadband.units import wavenumber_to_internal

W = wavenumber_to_internal(500.0)
M = 35.4
K0 = 0.12589254117941676


def make_pair(k0=K0, xc=0.0, d=0.05):
    return CoupledPair(
        HarmonicSite(mass=M, omega=W, center=xc - d),
        HarmonicSite(mass=M, omega=W, center=xc + d),
        CouplingSpec(k0=k0, xc=xc),
    )


def test_dyson_identity_residual():
    # G11(x,x0) must re-solve its own scattering equation:
    # G11 = g1 + K0^2 g1(x,xc) g2(xc,xc) G11(xc,x0)
    pair = make_pair()
    rng = random.Random(42)
    for _ in range(20):
        x = rng.uniform(-0.12, 0.12)
        x0 = rng.uniform(-0.12, 0.12)
        e = rng.uniform(0.2, 1.8) * W
        if min(abs(e - (n + 0.5) * W) for n in range(3)) < 2e-2 * W:
            continue
        ep = EnergyPoint(e, 0.0)
        lhs = pair.element(1, 1, x, x0, ep)
        bare = pair.provider1(x, x0, ep)
        kick = (K0 ** 2 * pair.provider1(x, 0.0, ep)
                * pair.provider2(0.0, 0.0, ep)
                * pair.element(1, 1, 0.0, x0, ep))
        assert abs(lhs - (bare + kick)) <= 1e-10 * max(abs(lhs), 1e-30)


def test_offdiagonal_dyson_identity():
    pair = make_pair()
    ep = EnergyPoint(0.73 * W, 0.0)
    for x, x0 in [(0.04, -0.03), (-0.06, 0.02)]:
        lhs = pair.element(1, 2, x, x0, ep)
        want = (K0 * pair.provider1(x, 0.0, ep)
                * pair.element(2, 2, 0.0, x0, ep))
        assert abs(lhs - want) <= 1e-10 * max(abs(lhs), 1e-30)


def test_argument_symmetry():
    pair = make_pair()
    ep = EnergyPoint(0.41 * W, 0.0)
    assert pair.element(1, 1, 0.05, -0.02, ep) == pair.element(1, 1, -0.02, 0.05, ep)
    assert pair.element(1, 2, 0.05, -0.02, ep) == pair.element(2, 1, -0.02, 0.05, ep)


def test_exchange_is_literal_provider_swap():
    c = CouplingSpec(k0=K0, xc=0.0)
    s1 = HarmonicSite(mass=M, omega=W, center=-0.05)
    s2 = HarmonicSite(mass=M, omega=W, center=0.07)
    p1, p2 = GfProvider(s1), GfProvider(s2)
    ep = EnergyPoint(0.66 * W, 0.0)
    assert g22(p1, p2, c, 0.03, -0.01, ep) == g11(p2, p1, c, 0.03, -0.01, ep)
    assert g21(p1, p2, c, 0.03, -0.01, ep) == g12(p2, p1, c, 0.03, -0.01, ep)


def test_decoupled_limit_is_bare():
    pair = make_pair(k0=0.0)
    ep = EnergyPoint(0.58 * W, 0.0)
    assert pair.element(1, 1, 0.02, -0.04, ep) == pair.provider1(0.02, -0.04, ep)
    assert pair.element(1, 2, 0.02, -0.04, ep) == 0j
    assert pair.element(2, 1, 0.02, -0.04, ep) == 0j


def test_resonance_detected():
    # engineer 1 - K0^2 g1 g2 = 0 at the crossing
    pair0 = make_pair(k0=0.0)
    ep = EnergyPoint(0.3 * W, 0.0)
    g = pair0.provider1(0.0, 0.0, ep) * pair0.provider2(0.0, 0.0, ep)
    k_res = 1.0 / math.sqrt(abs(g.real))
    pair = make_pair(k0=k_res)
    with pytest.raises(ResonanceError):
        pair.element(1, 1, 0.02, -0.01, ep)


def test_denominator_value():
    pair = make_pair()
    ep = EnergyPoint(0.44 * W, 0.0)
    den = denominator(pair.provider1, pair.provider2, pair.coupling, ep)
    g1cc = pair.provider1(0.0, 0.0, ep)
    g2cc = pair.provider2(0.0, 0.0, ep)
    assert den == 1.0 - K0 ** 2 * g1cc * g2cc


def test_matrix_agrees_with_elements():
    pair = make_pair()
    ep = EnergyPoint(0.81 * W, 1e-6 * W)
    m = pair.matrix(0.03, -0.02, ep)
    for i in (1, 2):
        for j in (1, 2):
            assert m[i - 1, j - 1] == pair.element(i, j, 0.03, -0.02, ep)


def test_matrix_grid_matches_pointwise_elements():
    pair = make_pair()
    ep = EnergyPoint(0.81 * W, 0.0)
    xg = np.array([-0.06, -0.01, 0.0, 0.035, 0.08])
    gm = pair.matrix_grid(xg, ep)
    for i in (1, 2):
        for j in (1, 2):
            for a, x in enumerate(xg):
                for b, x0 in enumerate(xg):
                    want = pair.element(i, j, float(x), float(x0), ep)
                    got = gm[i - 1, j - 1, a, b]
                    assert abs(got - want) <= 1e-12 * max(abs(want), 1e-30)


def test_spectral_provider_route_agrees_with_closed():
    # dual-route check at the coupled level: spectral bare GFs inside the
    # same scattering solution
    c = CouplingSpec(k0=K0, xc=0.0)
    s1 = HarmonicSite(mass=M, omega=W, center=-0.05)
    s2 = HarmonicSite(mass=M, omega=W, center=0.05)
    closed = CoupledPair(s1, s2, c)
    ep = EnergyPoint(0.6 * W, 0.0)
    want = closed.element(1, 1, 0.03, -0.02, ep)
    p1 = GfProvider(s1, method="spectral", n_max=200000)
    p2 = GfProvider(s2, method="spectral", n_max=200000)
    got = g11(p1, p2, c, 0.03, -0.02, ep)
    # the diagonal g(xc,xc) inside the solution converges ~ 1/sqrt(n_max),
    # so the assembled element carries that slower tail
    assert abs(got - want) / abs(want) < 1e-4


def test_half_fourier_decoupled_oracle():
    # with k0 = 0 and psi0 = ground state of well 1, orthogonality collapses
    # the spectral sum: psi(x; E) = i psi0(x) / (E + i eta - E0)
    pair = make_pair(k0=0.0)
    xg = np.linspace(-0.3, 0.3, 1201)
    p0 = np.array([eigenfunction(pair.site1, 0, x) for x in xg])
    psi0 = WavefunctionPair(psi1=p0, psi2=np.zeros_like(p0))
    ez = complex(0.8 * W, 1e-3 * W)
    res = half_fourier_wavefunction(pair, psi0, xg, EnergyPoint(ez.real, ez.imag))
    want = 1j * p0 / (ez - eigen_energy(pair.site1, 0))
    err = np.abs(res.psi1 - want).max() / np.abs(want).max()
    assert err < 2e-5
    assert np.all(res.psi2 == 0.0)


def test_half_fourier_coupled_populates_second_surface():
    pair = make_pair()
    xg = np.linspace(-0.3, 0.3, 601)
    p0 = np.array([eigenfunction(pair.site1, 0, x) for x in xg])
    psi0 = WavefunctionPair(psi1=p0, psi2=np.zeros_like(p0))
    res = half_fourier_wavefunction(pair, psi0, xg, EnergyPoint(0.8 * W, 1e-3 * W))
    assert np.abs(res.psi2).max() > 1e-3


def test_half_fourier_input_validation():
    pair = make_pair()
    xg = np.linspace(-0.3, 0.3, 101)
    p0 = np.zeros_like(xg)
    good = WavefunctionPair(psi1=p0, psi2=p0)
    with pytest.raises(ValueError):
        half_fourier_wavefunction(pair, good, xg[:2], EnergyPoint(0.8 * W, 1e-3))
    bad_grid = xg.copy()
    bad_grid[50] = bad_grid[49]  # not strictly increasing
    with pytest.raises(ValueError):
        half_fourier_wavefunction(pair, good, bad_grid, EnergyPoint(0.8 * W, 1e-3))
    short = WavefunctionPair(psi1=p0[:-1], psi2=p0[:-1])
    with pytest.raises(ValueError):
        half_fourier_wavefunction(pair, short, xg, EnergyPoint(0.8 * W, 1e-3))


def test_coupling_spec_validation():
    with pytest.raises(ValueError):
        CouplingSpec(k0=-0.1, xc=0.0)
