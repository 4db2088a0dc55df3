"""Unit system and conversions.

Internal units: hbar = 1, mass in amu, length in Angstrom.  Energies are
then measured in ``EPS0_ERG = hbar**2 / (amu * Angstrom**2)`` erg.  All
conversions live here; nothing else in the package touches CGS constants.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

# CODATA 2018 values, CGS.
HBAR_ERG_S = 1.054571817e-27
AMU_G = 1.66053906660e-24
ANGSTROM_CM = 1.0e-8
PLANCK_ERG_S = 6.62607015e-27
C_CM_S = 2.99792458e10

#: Internal energy unit in erg: hbar^2 / (amu * Angstrom^2).
EPS0_ERG = HBAR_ERG_S**2 / (AMU_G * ANGSTROM_CM**2)

#: h*c in erg*cm; multiply by a wavenumber in cm^-1 to get erg.
HC_ERG_CM = PLANCK_ERG_S * C_CM_S


def wavenumber_to_internal(value_cm1: float) -> float:
    """Convert a spectroscopic wavenumber (cm^-1) to internal energy units."""
    return value_cm1 * HC_ERG_CM / EPS0_ERG


def internal_to_wavenumber(value: float) -> float:
    """Convert an internal energy to cm^-1."""
    return value * EPS0_ERG / HC_ERG_CM


def erg_to_internal(value_erg: float) -> float:
    """Convert an energy in erg to internal units."""
    return value_erg / EPS0_ERG


def erg_angstrom_to_internal(value_erg_angstrom: float) -> float:
    """Convert a contact-coupling strength in erg*Angstrom to internal units.

    The coupling multiplies a delta function in position, so it carries
    dimensions of energy * length; in internal units that is
    ``EPS0_ERG * Angstrom``.
    """
    return value_erg_angstrom / (EPS0_ERG * 1.0)


class Dimension(enum.Enum):
    """The five dimensions the package converts; nothing more general."""

    ENERGY = "energy"                      # laboratory unit: erg
    LENGTH = "length"                      # Angstrom
    MASS = "mass"                          # amu
    FREQUENCY = "frequency"                # wavenumber, cm^-1 (via E = h c nu)
    COUPLING_STRENGTH = "coupling"         # energy * length: erg * Angstrom


@dataclass(frozen=True)
class UnitSystem:
    energy_unit_in_erg: float = EPS0_ERG
    length_unit_in_angstrom: float = 1.0
    mass_unit_in_amu: float = 1.0
    hbar_internal: float = 1.0


DEFAULT_UNITS = UnitSystem()


@dataclass(frozen=True)
class PhysicalQuantity:
    value: float
    dimension: Dimension


def _scale(dim: Dimension, u: UnitSystem) -> float:
    """Laboratory units per internal unit for each dimension."""
    if dim is Dimension.ENERGY:
        return u.energy_unit_in_erg
    if dim is Dimension.LENGTH:
        return u.length_unit_in_angstrom
    if dim is Dimension.MASS:
        return u.mass_unit_in_amu
    if dim is Dimension.FREQUENCY:
        # a wavenumber is an energy in disguise: E = h c * (value in cm^-1)
        return u.energy_unit_in_erg / HC_ERG_CM
    if dim is Dimension.COUPLING_STRENGTH:
        return u.energy_unit_in_erg * u.length_unit_in_angstrom
    raise ValueError(f"unknown dimension: {dim!r}")


def to_internal(q: PhysicalQuantity, u: UnitSystem = DEFAULT_UNITS) -> float:
    """Laboratory value -> internal value; dimension-dispatching."""
    if not isinstance(q.dimension, Dimension):
        raise ValueError(f"unknown dimension: {q.dimension!r}")
    if not math.isfinite(q.value):
        raise ValueError(f"non-finite quantity: {q.value!r}")
    return q.value / _scale(q.dimension, u)


def from_internal(v: float, dim: Dimension,
                  u: UnitSystem = DEFAULT_UNITS) -> PhysicalQuantity:
    """Internal value -> laboratory value; exact inverse of to_internal."""
    if not isinstance(dim, Dimension):
        raise ValueError(f"unknown dimension: {dim!r}")
    if not math.isfinite(v):
        raise ValueError(f"non-finite quantity: {v!r}")
    return PhysicalQuantity(value=v * _scale(dim, u), dimension=dim)
