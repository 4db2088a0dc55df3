"""Exact two-surface solution for a delta coupling at one crossing point.

With V12(x) = k0 * delta(x - xc), the coupled resolvent closes algebraically
in terms of the two uncoupled Green's functions:

    den   = 1 - k0^2 g1(xc,xc) g2(xc,xc)
    G11   = g1(x,x0) + k0^2 g1(x,xc) g2(xc,xc) g1(xc,x0) / den
    G12   = k0 g1(x,xc) g2(xc,x0) / den

G22 and G21 are the same expressions with the two surfaces exchanged, and
are implemented literally that way so the exchange symmetry holds
bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ResonanceError
from .greens import HarmonicSite, as_energy, gf_closed, gf_spectral
from .special import gamma_fn, parabolic_cylinder_d

#: |den| below this is reported as a resonance of the coupled system
RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class CouplingSpec:
    """Contact coupling strength k0 (energy*length) acting at xc."""

    k0: float
    xc: float

    def __post_init__(self):
        if self.k0 < 0.0:
            raise ValueError(f"k0 must be >= 0, got {self.k0}")


@dataclass(frozen=True)
class GfProvider:
    """Uncoupled-GF evaluator for one site: provider(x, x0, E) -> complex."""

    site: HarmonicSite
    method: str = "closed"
    n_max: int = 100_000

    def __post_init__(self):
        if self.method not in ("closed", "spectral"):
            raise ValueError(f"unknown method {self.method!r}")

    def __call__(self, x: float, x0: float, energy) -> complex:
        if self.method == "closed":
            return gf_closed(self.site, x, x0, energy)
        return gf_spectral(self.site, x, x0, energy, self.n_max)


def denominator(g1: Callable, g2: Callable, c: CouplingSpec, energy) -> complex:
    """1 - k0^2 g1(xc,xc;E) g2(xc,xc;E); symmetric in the two providers."""
    return 1.0 - c.k0 ** 2 * g1(c.xc, c.xc, energy) * g2(c.xc, c.xc, energy)


def _checked_denominator(g1, g2, c, energy) -> complex:
    den = denominator(g1, g2, c, energy)
    if abs(den) < RESONANCE_TOL:
        raise ResonanceError(as_energy(energy).value, den)
    return den


def g11(g1, g2, c: CouplingSpec, x: float, x0: float, energy) -> complex:
    """Same-surface coupled GF on surface 1."""
    direct = g1(x, x0, energy)
    if c.k0 == 0.0:
        return direct
    den = _checked_denominator(g1, g2, c, energy)
    via = g1(x, c.xc, energy) * g2(c.xc, c.xc, energy) * g1(c.xc, x0, energy)
    return direct + c.k0 ** 2 * via / den


def g12(g1, g2, c: CouplingSpec, x: float, x0: float, energy) -> complex:
    """Cross-surface coupled GF: observe on surface 1, source on surface 2."""
    if c.k0 == 0.0:
        return 0j
    den = _checked_denominator(g1, g2, c, energy)
    return c.k0 * g1(x, c.xc, energy) * g2(c.xc, x0, energy) / den


def g22(g1, g2, c: CouplingSpec, x: float, x0: float, energy) -> complex:
    """Same-surface coupled GF on surface 2 (provider exchange of g11)."""
    return g11(g2, g1, c, x, x0, energy)


def g21(g1, g2, c: CouplingSpec, x: float, x0: float, energy) -> complex:
    """Cross-surface coupled GF, observe on 2 (provider exchange of g12)."""
    return g12(g2, g1, c, x, x0, energy)


@dataclass(frozen=True)
class CoupledPair:
    """Two harmonic surfaces plus their contact coupling.

    Bundles the standard pointwise elements and a vectorized whole-grid
    assembly that exploits the closed form's product structure (the grid
    path costs O(N) special-function calls instead of O(N^2)).
    """

    site1: HarmonicSite
    site2: HarmonicSite
    coupling: CouplingSpec
    provider1: GfProvider = field(init=False)
    provider2: GfProvider = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "provider1", GfProvider(self.site1))
        object.__setattr__(self, "provider2", GfProvider(self.site2))

    def element(self, i: int, j: int, x: float, x0: float, energy) -> complex:
        """G_ij(x, x0; E) with 1-based surface labels i, j in {1, 2}."""
        if i not in (1, 2) or j not in (1, 2):
            raise ValueError(f"surface labels are 1 or 2, got ({i}, {j})")
        fn = ((g11, g12), (g21, g22))[i - 1][j - 1]
        return fn(self.provider1, self.provider2, self.coupling, x, x0, energy)

    def matrix(self, x: float, x0: float, energy) -> np.ndarray:
        return np.array(
            [
                [self.element(1, 1, x, x0, energy), self.element(1, 2, x, x0, energy)],
                [self.element(2, 1, x, x0, energy), self.element(2, 2, x, x0, energy)],
            ]
        )

    def matrix_grid(self, x_grid: np.ndarray, energy) -> np.ndarray:
        """All four blocks sampled on x_grid x x_grid: shape (2, 2, N, N)."""
        xg = np.asarray(x_grid, dtype=np.float64)
        c = self.coupling
        b1 = _bare_grid(self.site1, xg, c.xc, energy)
        b2 = _bare_grid(self.site2, xg, c.xc, energy)
        den = 1.0 - c.k0 ** 2 * b1.at_cc * b2.at_cc
        if abs(den) < RESONANCE_TOL:
            raise ResonanceError(as_energy(energy).value, den)
        out = np.empty((2, 2, xg.size, xg.size), dtype=np.complex128)
        k2 = c.k0 ** 2
        out[0, 0] = b1.full + k2 * b2.at_cc / den * np.outer(b1.to_c, b1.to_c)
        out[1, 1] = b2.full + k2 * b1.at_cc / den * np.outer(b2.to_c, b2.to_c)
        out[0, 1] = c.k0 / den * np.outer(b1.to_c, b2.to_c)
        out[1, 0] = c.k0 / den * np.outer(b2.to_c, b1.to_c)
        return out


@dataclass(frozen=True)
class _BareGrid:
    full: np.ndarray   # (N, N): g(x_i, x_j)
    to_c: np.ndarray   # (N,):   g(x_i, xc)
    at_cc: complex     # g(xc, xc)


def _bare_grid(site: HarmonicSite, xg: np.ndarray, xc: float, energy) -> _BareGrid:
    """Uncoupled closed-form GF on a grid via its product structure.

    G0(x, x0) = pref * D_nu(s dx_>) * D_nu(-s dx_<) factorizes per ordering,
    so N points need 2N+2 parabolic-cylinder calls, then O(N^2) multiplies.
    """
    ep = as_energy(energy)
    eps = ep.value - site.offset
    ratio = eps / site.omega
    nu = ratio - 0.5
    s = np.sqrt(2.0 * site.mass * site.omega)
    pref = -np.sqrt(site.mass / (np.pi * site.omega)) * gamma_fn(0.5 - ratio)
    dx = xg - site.center
    up = np.array([parabolic_cylinder_d(nu, s * d) for d in dx])
    dn = np.array([parabolic_cylinder_d(nu, -s * d) for d in dx])
    # value is pref * up(larger coordinate) * dn(smaller coordinate)
    full = pref * np.where(
        np.greater.outer(dx, dx),
        np.outer(up, dn),
        np.outer(dn, up),
    )
    np.fill_diagonal(full, pref * up * dn)
    dc = xc - site.center
    up_c = parabolic_cylinder_d(nu, s * dc)
    dn_c = parabolic_cylinder_d(nu, -s * dc)
    to_c = pref * np.where(dx >= dc, up * dn_c, up_c * dn)
    at_cc = pref * up_c * dn_c
    return _BareGrid(full=full, to_c=to_c, at_cc=at_cc)


@dataclass(frozen=True)
class WavefunctionPair:
    """Amplitudes on the two surfaces, sampled on a shared grid."""

    psi1: np.ndarray
    psi2: np.ndarray


def half_fourier_wavefunction(green, psi0: WavefunctionPair, x_grid,
                              energy) -> WavefunctionPair:
    """Energy-domain wavefunction psi_bar(x; E) = i * integral G(x,x0;E) psi(x0,0) dx0.

    Trapezoid quadrature over x_grid, componentwise over the 2x2 coupled
    structure.  ``green`` must offer ``matrix_grid(x_grid, energy)``
    (CoupledPair does); the output is sampled on the same grid.
    """
    xg = np.asarray(x_grid, dtype=np.float64)
    if xg.size < 3:
        raise ValueError("x_grid too coarse: need at least 3 points")
    if np.any(np.diff(xg) <= 0.0):
        raise ValueError("x_grid must be strictly increasing")
    p1 = np.asarray(psi0.psi1, dtype=np.complex128)
    p2 = np.asarray(psi0.psi2, dtype=np.complex128)
    if p1.shape != xg.shape or p2.shape != xg.shape:
        raise ValueError("psi0 samples must match x_grid length")

    w = np.empty_like(xg)
    w[1:-1] = 0.5 * (xg[2:] - xg[:-2])
    w[0] = 0.5 * (xg[1] - xg[0])
    w[-1] = 0.5 * (xg[-1] - xg[-2])

    gm = green.matrix_grid(xg, energy)
    out1 = 1j * (gm[0, 0] @ (w * p1) + gm[0, 1] @ (w * p2))
    out2 = 1j * (gm[1, 0] @ (w * p1) + gm[1, 1] @ (w * p2))
    return WavefunctionPair(psi1=out1, psi2=out2)


def coupled_green(pair: CoupledPair, x: float, x0: float, energy) -> np.ndarray:
    """Convenience: the full 2x2 coupled GF matrix at one point."""
    return pair.matrix(x, x0, energy)
