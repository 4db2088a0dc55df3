"""Semi-infinite chain of delta-coupled wells: recursion, closure, discriminant.

Each site n is a harmonic well whose left/right crossing points connect it
to its neighbors.  Writing S_n for the chain surface GF at the newest
crossing point, attaching one more site gives

    S_n = g_d + k0^2 g_o^2 S_{n-1} / (1 - k0^2 g_d S_{n-1})

with g_d the site's diagonal GF at a crossing point and g_o the off-diagonal
GF across the well.  For the homogeneous semi-infinite chain S_n = S_{n-1},
which turns the recursion into the quadratic

    k0^2 g_d S^2 - [k0^2 g_d^2 - k0^2 g_o^2 + 1] S + g_d = 0.

The sign of its discriminant A(E) decides whether the surface GF is real
(isolated spectrum) or complex (a transmission band): A < 0 inside bands.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Mapping

from .errors import BranchSelectionError, ChainIterationError, ResonanceError
from .greens import HarmonicSite, as_energy, gf_closed

#: attach_site denominator magnitudes below this raise ResonanceError
ATTACH_TOL = 1e-12

#: imaginary contamination allowed in discriminant() inputs, relative
REAL_CELL_TOL = 1e-10


@dataclass(frozen=True)
class ChainSpec:
    """Geometry and coupling of the periodic chain, plus impurity overrides.

    ``overrides`` maps a (1-based) site index to a replacement well; the
    replacement's mass/omega/offset are used but its center is forced onto
    the chain geometry, so crossing points always stay strictly increasing.
    """

    spacing: float
    k0: float
    base_site: HarmonicSite
    crossing_offset: float | None = None
    overrides: Mapping[int, HarmonicSite] = field(default_factory=dict)

    def __post_init__(self):
        if not (self.spacing > 0.0 and math.isfinite(self.spacing)):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if self.k0 < 0.0:
            raise ValueError(f"k0 must be >= 0, got {self.k0}")
        if self.crossing_offset is None:
            object.__setattr__(self, "crossing_offset", 0.5 * self.spacing)
        if not (0.0 < self.crossing_offset < self.spacing):
            raise ValueError(
                f"crossing_offset must lie strictly between 0 and spacing, "
                f"got {self.crossing_offset} vs spacing {self.spacing}"
            )

    def site_at(self, n: int) -> HarmonicSite:
        """The well at site n (1-based), impurity overrides applied."""
        center = self.base_site.center + n * self.spacing
        template = self.overrides.get(n, self.base_site)
        return replace(template, center=center)

    def crossing_at(self, n: int) -> float:
        """x_n: the crossing point to the right of site n."""
        return self.site_at(n).center + self.crossing_offset


@dataclass(frozen=True)
class GfCell:
    """Per-site GF ingredients of the recursion.

    g_d: diagonal value at the site's right crossing point.
    g_o: off-diagonal value between the site's two crossing points.
    For a symmetric well with crossing_offset = spacing/2 the left and right
    diagonal values coincide (parity), so one g_d serves both roles.
    """

    g_d: complex
    g_o: complex


@dataclass(frozen=True)
class SurfaceGf:
    """Fixed-point surface GF with the branch actually taken."""

    value: complex
    branch: str  # "minus" | "plus"
    converged: bool


def gf_cell(site: HarmonicSite, spec: ChainSpec, energy) -> GfCell:
    """Closed-form GF of one well at its two flanking crossing points."""
    x_right = site.center + spec.crossing_offset
    x_left = site.center - (spec.spacing - spec.crossing_offset)
    g_d = gf_closed(site, x_right, x_right, energy)
    g_o = gf_closed(site, x_left, x_right, energy)
    return GfCell(g_d=g_d, g_o=g_o)


def attach_site(s_prev: complex, cell: GfCell, k0: float) -> complex:
    """One recursion step: surface GF after adding a site to the chain."""
    if k0 == 0.0:
        return cell.g_d
    den = 1.0 - k0 ** 2 * cell.g_d * s_prev
    if abs(den) < ATTACH_TOL:
        raise ResonanceError(None, den)
    return cell.g_d + k0 ** 2 * cell.g_o ** 2 * s_prev / den


def closure_coefficients(cell: GfCell, k0: float):
    """(a, b, c) of the closure quadratic a S^2 - b S + c = 0."""
    a = k0 ** 2 * cell.g_d
    b = k0 ** 2 * cell.g_d ** 2 - k0 ** 2 * cell.g_o ** 2 + 1.0
    c = cell.g_d
    return a, b, c


def closure_residual(cell: GfCell, k0: float, s: complex) -> float:
    """Relative residual of a candidate root in the closure quadratic."""
    a, b, c = closure_coefficients(cell, k0)
    num = abs(a * s * s - b * s + c)
    scale = max(abs(a * s * s), abs(b * s), abs(c))
    return num / scale if scale > 0.0 else num


def discriminant(cell: GfCell, k0: float) -> float:
    """A(E) = [k0^2 g_d^2 - k0^2 g_o^2 + 1]^2 - 4 k0^2 g_d^2, real arithmetic.

    Requires a real cell (eta = 0 evaluation); complex contamination means
    the caller regularized the energy, which would silently destroy the
    sign criterion, so it is rejected.
    """
    for name, v in (("g_d", cell.g_d), ("g_o", cell.g_o)):
        if abs(v.imag) > REAL_CELL_TOL * max(1.0, abs(v.real)):
            raise ValueError(
                f"discriminant needs a real GF cell (eta=0); {name} has "
                f"imaginary part {v.imag:.3e}"
            )
    gd = cell.g_d.real
    go = cell.g_o.real
    b = k0 ** 2 * gd * gd - k0 ** 2 * go * go + 1.0
    return b * b - 4.0 * k0 ** 2 * gd * gd


def fixed_point_surface_gf(cell: GfCell, k0: float) -> SurfaceGf:
    """Solve the closure quadratic and pick the physical root.

    Branch rules:
      * real cell, A >= 0: the root continuous with the k0 -> 0 limit
        (the "minus" branch), evaluated in its cancellation-free form;
      * real cell, A < 0: the root with Im S <= 0 (retarded side);
      * complex cell (eta > 0): the unique root with Im S < 0 — the root
        product is 1/k0^2 (real, positive), so exactly one root lies in
        the lower half plane.
    """
    if k0 == 0.0 or cell.g_d == 0.0:
        return SurfaceGf(value=complex(cell.g_d), branch="minus", converged=True)
    a, b, c = closure_coefficients(cell, k0)

    real_cell = (
        abs(cell.g_d.imag) <= REAL_CELL_TOL * max(1.0, abs(cell.g_d.real))
        and abs(cell.g_o.imag) <= REAL_CELL_TOL * max(1.0, abs(cell.g_o.real))
    )
    if real_cell:
        ar, br, cr = a.real, b.real, c.real
        disc = br * br - 4.0 * ar * cr
        if disc >= 0.0:
            sq = math.sqrt(disc)
            if br >= 0.0:
                value = 2.0 * cr / (br + sq)
            else:
                value = (br - sq) / (2.0 * ar)
            return SurfaceGf(value=complex(value), branch="minus", converged=True)
        sq = math.sqrt(-disc)
        # conjugate pair (b +/- i sq)/(2a); retarded root has Im <= 0
        if ar > 0.0:
            return SurfaceGf(
                value=complex(br, -sq) / (2.0 * ar), branch="minus", converged=True
            )
        return SurfaceGf(
            value=complex(br, sq) / (2.0 * ar), branch="plus", converged=True
        )

    disc = b * b - 4.0 * a * c
    q = cmath.sqrt(disc)
    # root pair via the cancellation-free split: t/(2a) and 2c/t
    t = b + q if abs(b + q) >= abs(b - q) else b - q
    roots = (t / (2.0 * a), 2.0 * c / t)
    picked = [r for r in roots if r.imag < 0.0]
    if not picked:
        raise BranchSelectionError(
            roots, "no closure root lies in the lower half plane at eta > 0"
        )
    value = min(picked, key=lambda r: r.imag) if len(picked) == 2 else picked[0]
    minus_dist = abs(2.0 * a * value - (b - q))
    plus_dist = abs(2.0 * a * value - (b + q))
    branch = "minus" if minus_dist <= plus_dist else "plus"
    return SurfaceGf(value=value, branch=branch, converged=True)


def surface_green(spec: ChainSpec, energy) -> SurfaceGf:
    """Fixed-point surface GF of the homogeneous chain at one energy."""
    cell = gf_cell(spec.site_at(1), spec, energy)
    return fixed_point_surface_gf(cell, spec.k0)


def iterate_chain(spec: ChainSpec, energy, n_sites: int):
    """Attach sites 1..n_sites in order; returns the list [S_1 .. S_n].

    The homogeneous cell is computed once (translation invariance); only
    override sites get their own GF evaluation.  Failures carry the site
    index that broke the recursion.
    """
    if n_sites < 1:
        raise ValueError(f"n_sites must be >= 1, got {n_sites}")
    ep = as_energy(energy)
    base_cell = gf_cell(spec.site_at(1), spec, ep)
    out = []
    s = 0j
    for n in range(1, n_sites + 1):
        # an override equal to the base well is no impurity at all; reusing
        # the shared cell keeps such chains bitwise identical to homogeneous
        if n in spec.overrides and spec.overrides[n] != spec.base_site:
            cell = gf_cell(spec.site_at(n), spec, ep)
        else:
            cell = base_cell
        try:
            s = attach_site(s, cell, spec.k0)
        except ResonanceError as exc:
            raise ChainIterationError(n, f"resonant denominator {exc.denominator!r}")
        if not (math.isfinite(s.real) and math.isfinite(s.imag)):
            raise ChainIterationError(n, f"non-finite surface GF {s!r}")
        out.append(s)
    return out
