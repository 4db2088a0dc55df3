"""Command-line front end.

Subcommands:
  gf        one Green's-function value of the base well
  twostate  energy sweep of the coupled two-well 2x2 GF at the crossing
  converge  site-recursion trace S_1..S_n at one energy
  scan      discriminant scan -> samples.csv + bands.json

Exit codes: 0 ok, 2 configuration problem, 3 runtime failure,
4 --check invariants failed.  Failures print a one-line JSON object to
stderr so wrappers never have to parse prose.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .chain import gf_cell, fixed_point_surface_gf, closure_residual, iterate_chain
from .config import ALL_KEYS, ResolvedConfig, parse_config_file, resolve
from .errors import ConfigError, NonadBandError, PoleProximityError
from .greens import EnergyPoint, HarmonicSite, gf_closed, spectral_batch
from .scanner import bands_to_json_obj, samples_to_csv, scan_bands
from .twostate import CoupledPair, CouplingSpec, denominator
from .units import internal_to_wavenumber, wavenumber_to_internal


class CheckFailure(Exception):
    pass


def _flag_name(key: str) -> str:
    return "--" + key.replace("_", "-")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=("paper", "paper-banded"))
    p.add_argument("--config", help="flat key=value file")
    for key in ALL_KEYS:
        if key == "k0_unit":
            p.add_argument(_flag_name(key), dest=key,
                           choices=("erg_angstrom", "internal"))
        elif key == "n_grid":
            p.add_argument(_flag_name(key), dest=key, type=int)
        else:
            p.add_argument(_flag_name(key), dest=key, type=float)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--check", action="store_true",
                   help="run invariant checks after the command")


def _resolve_from_args(args: argparse.Namespace) -> ResolvedConfig:
    file_values = parse_config_file(args.config) if args.config else {}
    flag_values = {k: getattr(args, k) for k in ALL_KEYS}
    return resolve(preset=args.preset, file_values=file_values,
                   flag_values=flag_values)


def _write_rows(path_base: str, fmt: str, header: list, rows: list,
                config_line: str) -> str:
    if fmt == "csv":
        path = path_base + ".csv"
        lines = [f"# {config_line}", ",".join(header)]
        for row in rows:
            lines.append(",".join(
                f"{v!r}" if isinstance(v, float) else str(v) for v in row))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        path = path_base + ".json"
        payload = {"config": config_line,
                   "rows": [dict(zip(header, row)) for row in rows]}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
    return path


def _cmd_gf(args: argparse.Namespace, cfg: ResolvedConfig) -> None:
    site = cfg.base_site()
    eta = args.eta if args.eta is not None else cfg.eta_internal
    energy = EnergyPoint(wavenumber_to_internal(args.e_cm1), eta)
    if args.method == "closed":
        g = gf_closed(site, args.x, args.x0, energy)
    else:
        pairs = np.array([[args.x, args.x0]])
        energies = np.array([energy.value], dtype=complex)
        g = spectral_batch(site, pairs, energies, [args.n_max])[0, 0, 0]
    g = complex(g)
    print(f"{g.real!r},{g.imag!r}")


def _cmd_twostate(args: argparse.Namespace, cfg: ResolvedConfig) -> None:
    xc = args.xc
    c1 = xc - cfg.crossing_offset_angstrom
    c2 = xc + (cfg.site_spacing_angstrom - cfg.crossing_offset_angstrom)
    site1 = HarmonicSite(mass=cfg.mass_amu, omega=cfg.omega_internal, center=c1)
    site2 = HarmonicSite(mass=cfg.mass_amu, omega=cfg.omega_internal, center=c2)
    pair = CoupledPair(site1, site2, CouplingSpec(k0=cfg.k0_internal, xc=xc))
    n_e = args.n_e
    e_lo, e_hi = cfg.emin_internal, cfg.emax_internal
    rows = []
    for i in range(n_e):
        e = e_lo + (e_hi - e_lo) * i / (n_e - 1)
        energy = EnergyPoint(e, cfg.eta_internal)
        try:
            den = denominator(pair.provider1, pair.provider2, pair.coupling,
                              energy)
            g11 = pair.element(1, 1, xc, xc, energy)
            g12 = pair.element(1, 2, xc, xc, energy)
        except (PoleProximityError, NonadBandError):
            continue  # unreachable energies on the real axis get no row
        rows.append((internal_to_wavenumber(e), den.real, den.imag,
                     g11.real, g11.imag, g12.real, g12.imag))
    path = _write_rows(os.path.join(args.out_dir, "twostate"), args.format,
                       ["e_cm1", "den_re", "den_im", "g11_re", "g11_im",
                        "g12_re", "g12_im"],
                       rows, cfg.header_line())
    print(f"wrote {path} ({len(rows)} rows)")


def _cmd_converge(args: argparse.Namespace, cfg: ResolvedConfig) -> None:
    spec = cfg.chain_spec()
    eta = args.eta
    if eta is None:
        eta = cfg.eta_internal if cfg.eta_internal > 0.0 \
            else 1e-3 * cfg.omega_internal
    energy = EnergyPoint(wavenumber_to_internal(args.e_cm1), eta)
    trace = iterate_chain(spec, energy, args.n_sites)
    rows = []
    prev = None
    for n, s in enumerate(trace, start=1):
        delta = abs(s - prev) if prev is not None else math.nan
        rows.append((n, s.real, s.imag, delta))
        prev = s
    path = _write_rows(os.path.join(args.out_dir, "converge"), args.format,
                       ["n", "s_re", "s_im", "delta"], rows,
                       cfg.header_line())
    print(f"wrote {path} ({len(rows)} rows)")


def _cmd_scan(args: argparse.Namespace, cfg: ResolvedConfig) -> None:
    spec = cfg.chain_spec()
    report = scan_bands(spec, cfg.emin_internal, cfg.emax_internal, cfg.n_grid)
    os.makedirs(args.out_dir, exist_ok=True)
    samples_path = os.path.join(args.out_dir, "samples.csv")
    with open(samples_path, "w", encoding="utf-8") as fh:
        fh.write(samples_to_csv(report.samples, cfg.header_line()))
    bands_path = os.path.join(args.out_dir, "bands.json")
    with open(bands_path, "w", encoding="utf-8") as fh:
        json.dump(bands_to_json_obj(report, cfg.as_dict()), fh, indent=1)
        fh.write("\n")
    print(f"wrote {samples_path} ({len(report.samples)} samples)")
    print(f"wrote {bands_path} ({len(report.bands)} bands)")
    for b in report.bands:
        print(f"band: {internal_to_wavenumber(b.e_lo):.6f} .. "
              f"{internal_to_wavenumber(b.e_hi):.6f} cm^-1")


def _run_checks(cfg: ResolvedConfig) -> dict:
    """Cross-route and invariant residuals on the resolved configuration."""
    site = cfg.base_site()
    w = site.omega
    # spectral-vs-closed on an off-diagonal pair, partial-sum route
    x, x0 = 0.03, -0.03
    energy = EnergyPoint(site.offset + 0.6 * w, 0.0)
    closed = gf_closed(site, x, x0, energy)
    pairs = np.array([[x, x0]])
    energies = np.array([energy.value], dtype=complex)
    spectral = spectral_batch(site, pairs, energies, [2 ** 21])[0, 0, 0]
    rel_spec = abs(spectral - closed) / abs(closed)

    # coupled 2x2: symmetry of the diagonal element in its arguments
    c1 = -cfg.crossing_offset_angstrom
    c2 = cfg.site_spacing_angstrom - cfg.crossing_offset_angstrom
    pair = CoupledPair(
        HarmonicSite(mass=cfg.mass_amu, omega=w, center=c1),
        HarmonicSite(mass=cfg.mass_amu, omega=w, center=c2),
        CouplingSpec(k0=cfg.k0_internal, xc=0.0),
    )
    ep = EnergyPoint(site.offset + 0.37 * w, 1e-6 * w)
    a = pair.element(1, 1, 0.011, -0.017, ep)
    b = pair.element(1, 1, -0.017, 0.011, ep)
    sym = abs(a - b) / max(abs(a), 1e-300)

    # chain closure: fixed point must satisfy its own quadratic
    spec = cfg.chain_spec()
    cell = gf_cell(spec.site_at(1), spec, EnergyPoint(site.offset + 0.6 * w, 1e-9))
    s = fixed_point_surface_gf(cell, spec.k0)
    res = closure_residual(cell, spec.k0, s.value)
    im_ok = s.value.imag <= 1e-15

    return {
        "spectral_vs_closed_rel": rel_spec,
        "coupled_symmetry_rel": sym,
        "closure_residual_rel": res,
        "surface_im_nonpositive": bool(im_ok),
        "pass": bool(rel_spec < 5e-6 and sym < 1e-10 and res < 1e-10 and im_ok),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nonadband",
        description="Exact Green's functions and transmission bands for "
                    "delta-coupled harmonic wells and chains.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    p_gf = sub.add_parser("gf", help="single base-well GF value")
    p_gf.add_argument("--x", type=float, required=True)
    p_gf.add_argument("--x0", type=float, required=True)
    p_gf.add_argument("--e-cm1", type=float, required=True)
    p_gf.add_argument("--eta", type=float, default=None,
                      help="imaginary energy part (internal units)")
    p_gf.add_argument("--method", choices=("closed", "spectral"),
                      default="closed")
    p_gf.add_argument("--n-max", type=int, default=200000,
                      help="top eigenstate index for --method spectral")
    _add_config_flags(p_gf)

    p_two = sub.add_parser("twostate", help="coupled two-well energy sweep")
    p_two.add_argument("--xc", type=float, default=0.0,
                       help="crossing position (wells placed around it)")
    p_two.add_argument("--n-e", type=int, default=500)
    _add_config_flags(p_two)

    p_conv = sub.add_parser("converge", help="site-recursion trace")
    p_conv.add_argument("--e-cm1", type=float, required=True)
    p_conv.add_argument("--n-sites", type=int, default=200)
    p_conv.add_argument("--eta", type=float, default=None,
                        help="imaginary energy part (internal units)")
    _add_config_flags(p_conv)

    p_scan = sub.add_parser("scan", help="discriminant scan and band report")
    _add_config_flags(p_scan)

    return p


_COMMANDS = {
    "gf": _cmd_gf,
    "twostate": _cmd_twostate,
    "converge": _cmd_converge,
    "scan": _cmd_scan,
}


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_from_args(args)
        os.makedirs(args.out_dir, exist_ok=True)
        _COMMANDS[args.command](args, cfg)
        if args.check:
            report = _run_checks(cfg)
            print("check: " + json.dumps(report))
            if not report["pass"]:
                raise CheckFailure(json.dumps(report))
    except ConfigError as exc:
        print(json.dumps({"error": "ConfigError", "problems": exc.problems}),
              file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(json.dumps({"error": "CheckFailure", "report": str(exc)}),
              file=sys.stderr)
        return 4
    except (NonadBandError, OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
