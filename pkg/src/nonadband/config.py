"""Run configuration: flat key=value files, presets, full validation.

Precedence: command-line flags > config file > preset.  Validation never
stops at the first problem — every issue is collected and reported in one
ConfigError so a bad file is fixed in one round trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .chain import ChainSpec
from .errors import ConfigError
from .greens import HarmonicSite
from .units import erg_angstrom_to_internal, wavenumber_to_internal

K0_UNITS = ("erg_angstrom", "internal")

_FLOAT_KEYS = (
    "mass_amu",
    "omega_cm1",
    "site_spacing_angstrom",
    "crossing_offset_angstrom",
    "k0_value",
    "eta_internal",
    "emin_cm1",
    "emax_cm1",
)
_INT_KEYS = ("n_grid",)
_STR_KEYS = ("k0_unit",)
ALL_KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS

# Coupling for the banded preset was fixed by a one-dimensional search
# (scanner.select_coupling over candidates 10**linspace(-3, 2, 51)): the
# passing run was k0 in [10**-1.6, 10**-0.3] and its middle element is
# 10**-0.9.  With this coupling the scan shows transmission windows
# [0.4349, 0.5539] and [1.3367, 1.6474] in units of the well frequency.
PAPER_BANDED_K0_INTERNAL = 0.12589254117941676

PRESETS: dict[str, dict] = {
    "paper": {
        "mass_amu": 35.4,
        "omega_cm1": 500.0,
        "site_spacing_angstrom": 0.1,
        "crossing_offset_angstrom": 0.05,
        "k0_value": 1.58e-7,
        "k0_unit": "erg_angstrom",
        "eta_internal": 0.0,
        "emin_cm1": 100.0,
        "emax_cm1": 900.0,
        "n_grid": 10000,
    },
}
PRESETS["paper-banded"] = dict(
    PRESETS["paper"], k0_value=PAPER_BANDED_K0_INTERNAL, k0_unit="internal"
)


@dataclass(frozen=True)
class ResolvedConfig:
    preset: str | None
    mass_amu: float
    omega_cm1: float
    site_spacing_angstrom: float
    crossing_offset_angstrom: float
    k0_value: float
    k0_unit: str
    eta_internal: float
    emin_cm1: float
    emax_cm1: float
    n_grid: int
    version: str

    @property
    def omega_internal(self) -> float:
        return wavenumber_to_internal(self.omega_cm1)

    @property
    def k0_internal(self) -> float:
        if self.k0_unit == "internal":
            return self.k0_value
        return erg_angstrom_to_internal(self.k0_value)

    @property
    def emin_internal(self) -> float:
        return wavenumber_to_internal(self.emin_cm1)

    @property
    def emax_internal(self) -> float:
        return wavenumber_to_internal(self.emax_cm1)

    def base_site(self) -> HarmonicSite:
        return HarmonicSite(mass=self.mass_amu, omega=self.omega_internal)

    def chain_spec(self) -> ChainSpec:
        return ChainSpec(
            spacing=self.site_spacing_angstrom,
            k0=self.k0_internal,
            base_site=self.base_site(),
            crossing_offset=self.crossing_offset_angstrom,
        )

    def as_dict(self) -> dict:
        return {
            "preset": self.preset,
            "version": self.version,
            **{k: getattr(self, k) for k in ALL_KEYS},
        }

    def header_line(self) -> str:
        d = self.as_dict()
        return " ".join(f"{k}={d[k]}" for k in sorted(d))


def parse_config_file(path: str) -> dict:
    """Read a flat key=value file; '#' starts a comment, blank lines skipped."""
    problems = []
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                problems.append(f"line {lineno}: expected key=value, got {line!r}")
                continue
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in ALL_KEYS:
                problems.append(f"line {lineno}: unknown key {key!r}")
                continue
            if key in values:
                problems.append(f"line {lineno}: duplicate key {key!r}")
                continue
            values[key] = val
    if problems:
        raise ConfigError(problems)
    return values


def _coerce(values: Mapping[str, object], problems: list) -> dict:
    out = {}
    for key, val in values.items():
        if key in _FLOAT_KEYS and not isinstance(val, float):
            try:
                out[key] = float(val)
            except (TypeError, ValueError):
                problems.append(f"{key}: not a number: {val!r}")
        elif key in _INT_KEYS and not isinstance(val, int):
            try:
                out[key] = int(str(val), 10)
            except (TypeError, ValueError):
                problems.append(f"{key}: not an integer: {val!r}")
        else:
            out[key] = val
    return out


def resolve(preset: str | None = None,
            file_values: Mapping[str, object] | None = None,
            flag_values: Mapping[str, object] | None = None) -> ResolvedConfig:
    """Merge preset < file < flags, validate everything, return the config."""
    from . import __version__

    problems: list = []
    merged: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                [f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}"]
            )
        merged.update(PRESETS[preset])
    for layer in (file_values or {}), (flag_values or {}):
        for key, val in layer.items():
            if val is None:
                continue
            if key not in ALL_KEYS:
                problems.append(f"unknown key {key!r}")
                continue
            merged[key] = val
    merged = _coerce(merged, problems)

    missing = [k for k in ALL_KEYS if k not in merged]
    for k in missing:
        problems.append(f"missing required key {k!r}")
    if problems:
        raise ConfigError(problems)

    def pos(key):
        if merged[key] <= 0.0:
            problems.append(f"{key} must be > 0, got {merged[key]}")

    pos("mass_amu")
    pos("omega_cm1")
    pos("site_spacing_angstrom")
    pos("crossing_offset_angstrom")
    if merged["crossing_offset_angstrom"] >= merged["site_spacing_angstrom"]:
        problems.append(
            "crossing_offset_angstrom must lie strictly inside the site "
            f"spacing ({merged['crossing_offset_angstrom']} >= "
            f"{merged['site_spacing_angstrom']})"
        )
    if merged["k0_value"] < 0.0:
        problems.append(f"k0_value must be >= 0, got {merged['k0_value']}")
    if merged["k0_unit"] not in K0_UNITS:
        problems.append(
            f"k0_unit must be one of {K0_UNITS}, got {merged['k0_unit']!r}"
        )
    if merged["eta_internal"] < 0.0:
        problems.append(f"eta_internal must be >= 0, got {merged['eta_internal']}")
    if merged["emin_cm1"] >= merged["emax_cm1"]:
        problems.append(
            f"need emin_cm1 < emax_cm1, got {merged['emin_cm1']} >= "
            f"{merged['emax_cm1']}"
        )
    if merged["n_grid"] < 2:
        problems.append(f"n_grid must be >= 2, got {merged['n_grid']}")
    if problems:
        raise ConfigError(problems)

    return ResolvedConfig(preset=preset, version=__version__, **merged)
