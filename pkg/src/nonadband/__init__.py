"""Energy-domain Green's functions for delta-coupled harmonic surfaces.

The package computes exact resolvents ``G = (E - H)^{-1}`` for one or two
displaced harmonic wells coupled through a contact (delta-function)
interaction, extends the construction to a semi-infinite periodic chain of
wells via a site-attachment recursion, and scans the closure discriminant of
that recursion to locate the energy bands in which an infinite chain
transmits without reflection.

Internal unit system: hbar = 1, mass in amu, length in Angstrom.  The
derived energy unit is ``hbar**2 / (amu * Angstrom**2)``; see
:mod:`nonadband.units`.
"""

from .errors import (
    BranchSelectionError,
    ConfigError,
    NonadBandError,
    PoleProximityError,
    ResonanceError,
)
from .greens import (
    EnergyPoint,
    HarmonicSite,
    eigen_energy,
    eigenfunction,
    gf_closed,
    gf_spectral,
)
from .twostate import CoupledPair, CouplingSpec, coupled_green
from .chain import ChainSpec, attach_site, discriminant, surface_green
from .scanner import BandReport, find_band_edges, scan, scan_bands

__all__ = [
    "NonadBandError",
    "PoleProximityError",
    "ResonanceError",
    "BranchSelectionError",
    "ConfigError",
    "EnergyPoint",
    "HarmonicSite",
    "gf_closed",
    "gf_spectral",
    "eigen_energy",
    "eigenfunction",
    "CoupledPair",
    "CouplingSpec",
    "coupled_green",
    "ChainSpec",
    "surface_green",
    "discriminant",
    "attach_site",
    "scan",
    "scan_bands",
    "find_band_edges",
    "BandReport",
]

__version__ = "0.1.0"
