"""Energy-domain Green's function of one displaced harmonic well, two ways.

``gf_closed`` is the production route: a gamma prefactor times a product of
parabolic-cylinder functions, O(1) per energy.  ``gf_spectral`` is the
independent oracle: the truncated eigenfunction expansion
``sum_n psi_n(x) psi_n(x0) / (E + i eta - E_n)``, summed in ascending n.
The two must agree; the acceptance suite enforces it.

Internal units throughout: hbar = 1, mass in amu, length in Angstrom,
energy in hbar^2/(amu Angstrom^2).  A Green's function then carries units
1/(energy * length).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import PoleProximityError
from .special import gamma_fn, parabolic_cylinder_d

#: evaluations closer than this (times omega) to an eigenvalue at eta=0 refuse
POLE_GUARD_FACTOR = 1e-6


@dataclass(frozen=True)
class HarmonicSite:
    """One diabatic parabola V(x) = offset + m omega^2 (x-center)^2 / 2."""

    mass: float
    omega: float
    center: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass > 0.0):
            raise ValueError(f"mass must be positive and finite, got {self.mass}")
        if not (math.isfinite(self.omega) and self.omega > 0.0):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")


@dataclass(frozen=True)
class EnergyPoint:
    """Complex energy E + i*eta; eta >= 0 selects the retarded branch."""

    re: float
    eta: float = 0.0

    def __post_init__(self):
        if self.eta < 0.0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")

    @property
    def value(self) -> complex:
        return complex(self.re, self.eta)


def as_energy(energy) -> EnergyPoint:
    """Coerce EnergyPoint / complex / real into an EnergyPoint."""
    if isinstance(energy, EnergyPoint):
        return energy
    z = complex(energy)
    return EnergyPoint(z.real, z.imag)


def eigen_energy(site: HarmonicSite, n: int) -> float:
    """E_n = offset + (n + 1/2) omega."""
    if n < 0:
        raise ValueError(f"level index must be >= 0, got {n}")
    return site.offset + (n + 0.5) * site.omega


def eigenfunction(site: HarmonicSite, n: int, x: float) -> float:
    """Normalized oscillator eigenfunction psi_n(x).

    Evaluated by the orthonormal three-term recurrence
    psi_{k+1} = sqrt(2/(k+1)) y psi_k - sqrt(k/(k+1)) psi_{k-1},
    y = sqrt(m omega) (x - center), which cannot overflow.  Returns exactly
    0 when the Gaussian factor underflows float64.
    """
    if n < 0:
        raise ValueError(f"level index must be >= 0, got {n}")
    y = math.sqrt(site.mass * site.omega) * (x - site.center)
    arg = -0.5 * y * y
    if arg < -745.0:
        return 0.0
    p_cur = (site.mass * site.omega / math.pi) ** 0.25 * math.exp(arg)
    p_prev = 0.0
    for k in range(n):
        p_prev, p_cur = p_cur, math.sqrt(2.0 / (k + 1)) * y * p_cur - math.sqrt(
            k / (k + 1.0)
        ) * p_prev
    return p_cur


def _check_pole(site: HarmonicSite, ep: EnergyPoint) -> None:
    """Refuse real-axis evaluation inside the guard radius of an eigenvalue."""
    if ep.eta != 0.0:
        return
    ratio = (ep.re - site.offset) / site.omega
    n_near = max(0, round(ratio - 0.5))
    dist = abs(ep.re - eigen_energy(site, n_near))
    # shrink the strict bound by 1e-9 so E_n +/- exactly 1e-6*omega never
    # trips on rounding
    if dist < POLE_GUARD_FACTOR * site.omega * (1.0 - 1e-9):
        raise PoleProximityError(ep.value, eigen_energy(site, n_near),
                                 POLE_GUARD_FACTOR * site.omega)


def gf_closed(site: HarmonicSite, x: float, x0: float, energy) -> complex:
    """Closed-form G0(x, x0; E) = <x|(E+i eta - H)^{-1}|x0>.

    -sqrt(m/(pi omega)) Gamma(1/2 - eps/omega)
        * D_nu(sqrt(2 m omega) dx_>) * D_nu(-sqrt(2 m omega) dx_<)
    with eps the complex energy measured from the site offset,
    nu = eps/omega - 1/2, and dx_>/dx_< the larger/smaller of the two
    center-relative coordinates.  Retarded: Im G <= 0 on the diagonal for
    eta > 0.
    """
    ep = as_energy(energy)
    _check_pole(site, ep)
    eps = ep.value - site.offset
    ratio = eps / site.omega
    nu = ratio - 0.5
    s = math.sqrt(2.0 * site.mass * site.omega)
    hi = max(x, x0) - site.center
    lo = min(x, x0) - site.center
    pref = -math.sqrt(site.mass / (math.pi * site.omega)) * gamma_fn(0.5 - ratio)
    return pref * parabolic_cylinder_d(nu, s * hi) * parabolic_cylinder_d(nu, -s * lo)


def gf_spectral(site: HarmonicSite, x: float, x0: float, energy,
                n_max: int) -> complex:
    """Truncated spectral sum over levels n = 0 .. n_max inclusive.

    Deterministic ascending-n summation; the oracle route for gf_closed.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    ep = as_energy(energy)
    _check_pole(site, ep)
    e = ep.value
    sm = math.sqrt(site.mass * site.omega)
    y1 = sm * (x - site.center)
    y2 = sm * (x0 - site.center)
    norm = (site.mass * site.omega / math.pi) ** 0.25
    a1 = -0.5 * y1 * y1
    a2 = -0.5 * y2 * y2
    p1c = norm * math.exp(a1) if a1 >= -745.0 else 0.0
    p2c = norm * math.exp(a2) if a2 >= -745.0 else 0.0
    p1p = 0.0
    p2p = 0.0
    e0 = e - site.offset - 0.5 * site.omega
    total = 0j
    for n in range(n_max + 1):
        total += p1c * p2c / (e0 - n * site.omega)
        a = math.sqrt(2.0 / (n + 1))
        b = math.sqrt(n / (n + 1.0))
        p1p, p1c = p1c, a * y1 * p1c - b * p1p
        p2p, p2c = p2c, a * y2 * p2c - b * p2p
    return total


@njit(cache=True)
def _product_blocks(y1, y2, s1p, s1c, s2p, s2c, n0, out):  # pragma: no cover
    """Fill out[j, p] = psi_{n0+j}(x1_p) * psi_{n0+j}(x2_p), advancing the
    recurrence state arrays in place."""
    nb, npair = out.shape
    for j in range(nb):
        n = n0 + j
        a = math.sqrt(2.0 / (n + 1.0))
        b = math.sqrt(n / (n + 1.0))
        for p in range(npair):
            out[j, p] = s1c[p] * s2c[p]
            t1 = a * y1[p] * s1c[p] - b * s1p[p]
            s1p[p] = s1c[p]
            s1c[p] = t1
            t2 = a * y2[p] * s2c[p] - b * s2p[p]
            s2p[p] = s2c[p]
            s2c[p] = t2


def spectral_batch(site: HarmonicSite, pairs, energies, checkpoints):
    """Partial spectral sums for many (x, x0) pairs and energies at once.

    Parameters
    ----------
    pairs : (P, 2) array of (x, x0)
    energies : (M,) complex array (E + i eta baked in)
    checkpoints : increasing level counts; each entry c snapshots the sum
        over n = 0 .. c inclusive (matching ``gf_spectral`` with n_max = c).

    Returns
    -------
    (len(checkpoints), P, M) complex array of partial sums.

    The level loop runs in a compiled kernel; the energy denominators are
    applied blockwise with matrix products, so the cost is one pass over
    the largest checkpoint regardless of how many snapshots are taken.
    """
    pairs = np.asarray(pairs, dtype=np.float64)
    es = np.asarray(energies, dtype=np.complex128)
    cps = sorted({int(c) for c in checkpoints})
    if cps[0] < 1:
        raise ValueError("checkpoints must be >= 1")
    npair = pairs.shape[0]
    nen = es.shape[0]

    sm = math.sqrt(site.mass * site.omega)
    y1 = sm * (pairs[:, 0] - site.center)
    y2 = sm * (pairs[:, 1] - site.center)
    norm = (site.mass * site.omega / math.pi) ** 0.25
    s1c = np.where(y1 * y1 < 1400.0, norm * np.exp(-0.5 * y1 * y1), 0.0)
    s2c = np.where(y2 * y2 < 1400.0, norm * np.exp(-0.5 * y2 * y2), 0.0)
    s1p = np.zeros(npair)
    s2p = np.zeros(npair)

    acc_re = np.zeros((npair, nen))
    acc_im = np.zeros((npair, nen))
    snapshots = []

    block = 8192
    n0 = 0
    cp_iter = iter(cps)
    next_cp = next(cp_iter)
    n_total = cps[-1] + 1
    out = np.empty((block, npair))
    while n0 < n_total:
        nb = min(block, next_cp + 1 - n0)
        w = out[:nb]
        _product_blocks(y1, y2, s1p, s1c, s2p, s2c, n0, w)
        n_arr = np.arange(n0, n0 + nb)
        den = 1.0 / (es[None, :] - site.offset - (n_arr[:, None] + 0.5) * site.omega)
        wt = w.T
        acc_re += wt @ den.real
        acc_im += wt @ den.imag
        n0 += nb
        if n0 == next_cp + 1:
            snapshots.append(acc_re + 1j * acc_im)
            try:
                next_cp = next(cp_iter)
            except StopIteration:
                break
    return np.array(snapshots)
