"""Energy scan of the closure discriminant and band bookkeeping.

A band is a maximal energy interval where the discriminant A(E) of the
chain-closure quadratic is negative — there the semi-infinite chain's
surface GF acquires an imaginary part and the chain transmits.  The scanner
samples A on a uniform grid (skipping pole neighborhoods), bisects every
sign change to pin band edges, and packages the result for the CLI.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace as dc_replace
from typing import Callable, Sequence

from .chain import ChainSpec, discriminant, fixed_point_surface_gf, gf_cell, iterate_chain
from .errors import ConvergenceError, NonadBandError, PoleProximityError
from .greens import EnergyPoint, eigen_energy
from .units import internal_to_wavenumber

#: scan skips samples within this (times omega) of an eigenvalue
SCAN_POLE_GUARD_FACTOR = 1e-4

#: imaginary shift used for the per-sample surface GF
S_ETA = 1e-9

#: |A| target for band-edge bisection
EDGE_TOL_DEFAULT = 1e-8


@dataclass(frozen=True)
class ScanSample:
    e: float          # internal energy, eta = 0
    a: float          # discriminant value
    s: complex        # fixed-point surface GF at e + i*S_ETA
    branch: str


@dataclass(frozen=True)
class Band:
    e_lo: float
    e_hi: float


@dataclass(frozen=True)
class BandReport:
    samples: tuple
    bands: tuple
    pole_exclusions: tuple  # (center, half_width) pairs


def _sample_one(spec: ChainSpec, e: float) -> ScanSample:
    site = spec.site_at(1)
    cell_real = gf_cell(site, spec, EnergyPoint(e, 0.0))
    a = discriminant(cell_real, spec.k0)
    cell_eta = gf_cell(site, spec, EnergyPoint(e, S_ETA))
    s = fixed_point_surface_gf(cell_eta, spec.k0)
    return ScanSample(e=e, a=a, s=s.value, branch=s.branch)


def _pole_exclusions(spec: ChainSpec, e_min: float, e_max: float):
    site = spec.site_at(1)
    guard = SCAN_POLE_GUARD_FACTOR * site.omega
    out = []
    n_lo = max(0, math.floor((e_min - site.offset) / site.omega - 0.5) - 1)
    n_hi = math.ceil((e_max - site.offset) / site.omega) + 1
    for n in range(n_lo, n_hi + 1):
        en = eigen_energy(site, n)
        if e_min - guard <= en <= e_max + guard:
            out.append((en, guard))
    return out


def scan(spec: ChainSpec, e_min: float, e_max: float, n_grid: int,
         threads: int | None = None):
    """Sample A(E) and S(E + i 1e-9) on a uniform grid with pole skipping.

    Samples come back strictly ascending in E regardless of the thread
    count; every sample is a pure function of (spec, E), so the output is
    byte-stable across parallelism degrees.
    """
    if not e_min < e_max:
        raise ValueError(f"need e_min < e_max, got {e_min} >= {e_max}")
    if n_grid < 2:
        raise ValueError(f"n_grid must be >= 2, got {n_grid}")
    exclusions = _pole_exclusions(spec, e_min, e_max)
    step = (e_max - e_min) / (n_grid - 1)
    energies = []
    for i in range(n_grid):
        e = e_min + i * step
        if all(abs(e - c) >= hw for c, hw in exclusions):
            energies.append(e)
    if not energies:
        raise NonadBandError(
            "energy grid is empty after pole exclusions; widen the range "
            "or increase n_grid"
        )
    if threads is None:
        threads = int(os.environ.get("NONAD_BAND_THREADS", "1"))
    threads = max(1, threads)
    if threads == 1:
        samples = [_sample_one(spec, e) for e in energies]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = list(pool.map(lambda e: _sample_one(spec, e), energies))
    return samples


def _bisect_edge(a_eval: Callable[[float], float], lo: float, hi: float,
                 a_lo: float, a_hi: float, edge_tol: float,
                 min_interval: float) -> float:
    """Bisect a bracketed sign change of A down to |A| <= edge_tol."""
    if not (a_lo < 0.0) ^ (a_hi < 0.0):
        raise ConvergenceError(
            f"interval [{lo}, {hi}] does not bracket a sign change "
            f"(A = {a_lo}, {a_hi})"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= min_interval:
            return mid
        try:
            a_mid = a_eval(mid)
        except PoleProximityError:
            # edge essentially on a pole; polishing further is meaningless
            return mid
        if abs(a_mid) <= edge_tol:
            return mid
        if (a_mid < 0.0) == (a_lo < 0.0):
            lo, a_lo = mid, a_mid
        else:
            hi, a_hi = mid, a_mid
    return 0.5 * (lo + hi)


def find_band_edges(samples: Sequence[ScanSample], spec: ChainSpec | None = None,
                    edge_tol: float = EDGE_TOL_DEFAULT,
                    a_eval: Callable[[float], float] | None = None):
    """Bracket every sign change of A among the samples and bisect it.

    Returns the list of Bands (maximal A<0 intervals).  A negative run
    touching the scanned boundary gets its edge at the boundary sample
    (nothing to bracket there).  ``a_eval`` may replace the spec-derived
    discriminant, e.g. for synthetic inputs.
    """
    if a_eval is None:
        if spec is None:
            raise ValueError("need either spec or a_eval")
        site = spec.site_at(1)

        def a_eval(e: float, _spec=spec, _site=site) -> float:
            return discriminant(gf_cell(_site, _spec, EnergyPoint(e, 0.0)), _spec.k0)

        min_interval = 1e-12 * site.omega
    else:
        min_interval = 1e-12 * (samples[-1].e - samples[0].e)

    bands = []
    in_band = samples[0].a < 0.0
    start = samples[0].e if in_band else None
    for prev, cur in zip(samples, samples[1:]):
        if (cur.a < 0.0) == in_band:
            continue
        edge = _bisect_edge(a_eval, prev.e, cur.e, prev.a, cur.a,
                            edge_tol, min_interval)
        if in_band:
            bands.append(Band(e_lo=start, e_hi=edge))
            start = None
        else:
            start = edge
        in_band = not in_band
    if in_band:
        bands.append(Band(e_lo=start, e_hi=samples[-1].e))
    return bands


def scan_bands(spec: ChainSpec, e_min: float, e_max: float, n_grid: int,
               threads: int | None = None,
               edge_tol: float = EDGE_TOL_DEFAULT) -> BandReport:
    """scan + find_band_edges + pole bookkeeping in one call."""
    samples = scan(spec, e_min, e_max, n_grid, threads=threads)
    bands = find_band_edges(samples, spec, edge_tol=edge_tol)
    return BandReport(
        samples=tuple(samples),
        bands=tuple(bands),
        pole_exclusions=tuple(_pole_exclusions(spec, e_min, e_max)),
    )


def out_of_band_baseline(samples: Sequence[ScanSample],
                         bands: Sequence[Band]) -> float:
    """Median |Im S| over samples lying outside every band."""
    vals = sorted(
        abs(s.s.imag)
        for s in samples
        if not any(b.e_lo <= s.e <= b.e_hi for b in bands)
    )
    if not vals:
        raise NonadBandError("no out-of-band samples to form a baseline")
    mid = len(vals) // 2
    if len(vals) % 2:
        return vals[mid]
    return 0.5 * (vals[mid - 1] + vals[mid])


@dataclass(frozen=True)
class ImpurityTable:
    """Per-site surface GF along a finite chain with (or without) impurities."""

    energies: tuple            # complex energies used (eta folded in)
    s_sites: tuple             # tuple per energy: (S_1 .. S_n)
    fixed_point: tuple         # homogeneous fixed-point S per energy
    impurity_index: int | None


def impurity_scan(spec: ChainSpec, e_grid: Sequence[float], n_sites: int,
                  eta: float) -> ImpurityTable:
    """Run the site recursion across a chain holding any overrides in spec.

    Each energy is evaluated at E + i*eta (eta > 0: the iteration needs
    contraction).  The homogeneous fixed point of the override-free chain
    is reported alongside for comparison.
    """
    if eta <= 0.0:
        raise ValueError("impurity iteration requires eta > 0")
    base = dc_replace(spec, overrides={})
    rows = []
    fps = []
    for e in e_grid:
        ep = EnergyPoint(e, eta)
        rows.append(tuple(iterate_chain(spec, ep, n_sites)))
        cell = gf_cell(base.site_at(1), base, ep)
        fps.append(fixed_point_surface_gf(cell, base.k0).value)
    idx = min(spec.overrides) if spec.overrides else None
    return ImpurityTable(
        energies=tuple(complex(e, eta) for e in e_grid),
        s_sites=tuple(rows),
        fixed_point=tuple(fps),
        impurity_index=idx,
    )


def select_coupling(spec_k0_free: ChainSpec, candidates: Sequence[float],
                    probe_levels: Sequence[float] = (0.5, 1.5),
                    probe_delta: float = 0.01) -> float:
    """One-dimensional documented search for a coupling that opens bands.

    For each candidate k0 (ascending), A is probed just above and below
    each requested level energy (n + 1/2) omega at distances
    probe_delta * omega; a candidate passes when A < 0 at all probes, i.e.
    a negative-A window straddles every probed level.  The middle element
    of the longest contiguous run of passing candidates is returned —
    an interior point, so small parameter drift cannot de-band the preset.
    """
    site = spec_k0_free.site_at(1)
    passing = []
    for k0 in candidates:
        spec = dc_replace(spec_k0_free, k0=k0)
        ok = True
        for lev in probe_levels:
            for sgn in (-1.0, 1.0):
                e = site.offset + lev * site.omega + sgn * probe_delta * site.omega
                cell = gf_cell(site, spec, EnergyPoint(e, 0.0))
                if discriminant(cell, k0) >= 0.0:
                    ok = False
                    break
            if not ok:
                break
        passing.append(ok)
    best_start, best_len = None, 0
    run_start = None
    for i, ok in enumerate(list(passing) + [False]):
        if ok and run_start is None:
            run_start = i
        elif not ok and run_start is not None:
            if i - run_start > best_len:
                best_start, best_len = run_start, i - run_start
            run_start = None
    if best_start is None:
        raise NonadBandError(
            "no candidate coupling opened bands at all probed levels"
        )
    return candidates[best_start + best_len // 2]


def samples_to_csv(samples: Sequence[ScanSample], config_line: str) -> str:
    """Canonical samples.csv text; float fields use repr (round-trip exact).

    The leading comment line embeds the fully resolved configuration, so a
    CSV is self-describing and two runs are comparable byte-for-byte.
    """
    lines = [f"# {config_line}", "e_internal,e_cm1,a,s_re,s_im,branch"]
    for s in samples:
        lines.append(
            f"{s.e!r},{internal_to_wavenumber(s.e)!r},{s.a!r},"
            f"{s.s.real!r},{s.s.imag!r},{s.branch}"
        )
    return "\n".join(lines) + "\n"


def bands_to_json_obj(report: BandReport, config: dict) -> dict:
    """bands.json payload: config + band edges in cm^-1 (object wrapper so
    the config can ride along; a bare array cannot carry a header)."""
    return {
        "config": config,
        "bands": [
            {
                "e_lo_cm1": internal_to_wavenumber(b.e_lo),
                "e_hi_cm1": internal_to_wavenumber(b.e_hi),
            }
            for b in report.bands
        ],
    }
