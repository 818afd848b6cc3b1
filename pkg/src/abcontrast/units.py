"""Physical constants and laboratory <-> natural unit conversions.

Internally everything is expressed in Lorentz-Heaviside natural units with
hbar = c = 1, built on the electronvolt: lengths and times in eV^-1, energy
densities in eV^4, field amplitudes in eV^2, and the electron charge is the
dimensionless sqrt(4 pi alpha).
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from scipy import constants as _si

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "Unit",
    "LabQuantity",
    "DomainError",
    "RelativisticWarning",
    "RELATIVISTIC_SPEED",
    "flux_to_energy_density_natural",
    "energy_density_natural_to_si",
    "speed_from_kinetic_energy",
    "length_to_natural",
    "length_from_natural",
    "time_to_natural",
    "time_from_natural",
    "field_amplitude_to_natural",
    "wavelength_to_omega",
]

RELATIVISTIC_SPEED = 0.3


class DomainError(ValueError):
    """Input outside the physical domain of a formula."""


class RelativisticWarning(UserWarning):
    """The nonrelativistic speed formula is being used where v > 0.3."""


@dataclass(frozen=True)
class PhysicalConstants:
    fine_structure_alpha: float
    electron_mass: float  # eV
    hbar_c: float  # eV m
    thomson_cross_section: float  # m^2
    speed_of_light: float  # m/s
    joule_per_ev: float
    vacuum_permittivity: float  # F/m

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"constant {name} must be positive, got {value!r}")

    @property
    def elementary_charge_natural(self) -> float:
        return math.sqrt(4.0 * math.pi * self.fine_structure_alpha)

    @property
    def hbar(self) -> float:
        """Reduced Planck constant in eV s."""
        return self.hbar_c / self.speed_of_light


CONSTANTS = PhysicalConstants(
    fine_structure_alpha=_si.fine_structure,
    electron_mass=_si.physical_constants["electron mass energy equivalent in MeV"][0] * 1e6,
    hbar_c=_si.hbar * _si.c / _si.e,
    thomson_cross_section=_si.physical_constants["Thomson cross section"][0],
    speed_of_light=_si.c,
    joule_per_ev=_si.e,
    vacuum_permittivity=_si.epsilon_0,
)


def _require_nonnegative(value: float, what: str) -> None:
    if not value >= 0:
        raise DomainError(f"{what} must be non-negative, got {value!r}")


def _require_positive(value: float, what: str) -> None:
    if not value > 0:
        raise DomainError(f"{what} must be positive, got {value!r}")


def length_to_natural(x_m: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Metres -> eV^-1."""
    _require_nonnegative(x_m, "length")
    return x_m / constants.hbar_c


def length_from_natural(x: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """eV^-1 -> metres."""
    _require_nonnegative(x, "length")
    return x * constants.hbar_c


def time_to_natural(t_s: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Seconds -> eV^-1."""
    _require_nonnegative(t_s, "time")
    return t_s / constants.hbar


def time_from_natural(t: float, constants: PhysicalConstants = CONSTANTS) -> float:
    _require_nonnegative(t, "time")
    return t * constants.hbar


def flux_to_energy_density_natural(flux_W_cm2: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Energy flux in W/cm^2 -> energy density in eV^4.

    With c = 1 the flux of a plane wave and its energy density coincide, so
    the same number serves as both.
    """
    _require_nonnegative(flux_W_cm2, "flux")
    density_J_m3 = flux_W_cm2 * 1e4 / constants.speed_of_light
    density_eV_m3 = density_J_m3 / constants.joule_per_ev
    return density_eV_m3 * constants.hbar_c**3


def energy_density_natural_to_si(rho: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """eV^4 -> J/m^3."""
    _require_nonnegative(rho, "energy density")
    return rho / constants.hbar_c**3 * constants.joule_per_ev


def field_amplitude_to_natural(E_V_m: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Electric field amplitude in V/m -> eV^2 via the energy density.

    The conversion goes through rho = eps0 E^2 / 2 (SI) = E_nat^2 / 2, so
    there is only one path from laboratory to natural field units.
    """
    _require_nonnegative(E_V_m, "field amplitude")
    rho_J_m3 = 0.5 * constants.vacuum_permittivity * E_V_m**2
    rho = rho_J_m3 / constants.joule_per_ev * constants.hbar_c**3
    return math.sqrt(2.0 * rho)


def wavelength_to_omega(wavelength_um: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Vacuum wavelength in micrometres -> angular frequency in eV."""
    _require_positive(wavelength_um, "wavelength")
    return 2.0 * math.pi / length_to_natural(wavelength_um * 1e-6, constants)


def speed_from_kinetic_energy(E_k: float, m: float = CONSTANTS.electron_mass) -> float:
    """Nonrelativistic speed sqrt(2 E_k / m) in units of c.

    Both energies must use the same unit. Emits RelativisticWarning when the
    result exceeds 0.3.
    """
    _require_positive(E_k, "kinetic energy")
    _require_positive(m, "mass")
    v = math.sqrt(2.0 * E_k / m)
    if v > RELATIVISTIC_SPEED:
        warnings.warn(
            f"v = {v:.4g} c exceeds {RELATIVISTIC_SPEED}; the nonrelativistic "
            "approximation is degrading",
            RelativisticWarning,
            stacklevel=2,
        )
    return v


class Unit(enum.Enum):
    EV = "eV"
    KEV = "keV"
    W_PER_CM2 = "W/cm2"
    MICROMETRE = "um"
    METRE = "m"
    SECOND = "s"
    V_PER_M = "V/m"
    DIMENSIONLESS = "1"


@dataclass(frozen=True)
class LabQuantity:
    """A value tagged with its laboratory unit.

    `to_natural` maps it onto the canonical eV-based unit for its dimension:
    eV for energies, eV^4 for fluxes, eV^-1 for lengths and times and eV^2
    for field amplitudes.
    """

    value: float
    unit: Unit

    def to_natural(self, constants: PhysicalConstants = CONSTANTS) -> float:
        v, u = self.value, self.unit
        if u is Unit.EV or u is Unit.DIMENSIONLESS:
            return v
        if u is Unit.KEV:
            return v * 1e3
        if u is Unit.W_PER_CM2:
            return flux_to_energy_density_natural(v, constants)
        if u is Unit.MICROMETRE:
            return length_to_natural(v * 1e-6, constants)
        if u is Unit.METRE:
            return length_to_natural(v, constants)
        if u is Unit.SECOND:
            return time_to_natural(v, constants)
        if u is Unit.V_PER_M:
            return field_amplitude_to_natural(v, constants)
        raise AssertionError(u)

    @classmethod
    def from_natural(cls, value: float, unit: Unit, constants: PhysicalConstants = CONSTANTS) -> "LabQuantity":
        if unit is Unit.EV or unit is Unit.DIMENSIONLESS:
            v = value
        elif unit is Unit.KEV:
            v = value * 1e-3
        elif unit is Unit.W_PER_CM2:
            v = energy_density_natural_to_si(value, constants) * constants.speed_of_light * 1e-4
        elif unit is Unit.MICROMETRE:
            v = length_from_natural(value, constants) * 1e6
        elif unit is Unit.METRE:
            v = length_from_natural(value, constants)
        elif unit is Unit.SECOND:
            v = time_from_natural(value, constants)
        elif unit is Unit.V_PER_M:
            _require_nonnegative(value, "field amplitude")
            rho_J_m3 = energy_density_natural_to_si(0.5 * value**2, constants)
            v = math.sqrt(2.0 * rho_J_m3 / constants.vacuum_permittivity)
        else:
            raise AssertionError(unit)
        return cls(v, unit)
