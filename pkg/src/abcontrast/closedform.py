"""Closed-form expressions for C, |C|^2 and the Thomson scattering estimate.

These are independent of the quadrature in `phase` and serve both as fast
parametric tools and as cross-checks of the numerical engine.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .geometry import TrapezoidGeometry
from .units import (
    CONSTANTS,
    DomainError,
    flux_to_energy_density_natural,
    length_from_natural,
    length_to_natural,
    speed_from_kinetic_energy,
    wavelength_to_omega,
)

__all__ = [
    "PlaneWaveScenario",
    "GaussianScenario",
    "planewave_C",
    "planewave_static_limit",
    "planewave_C2_averaged",
    "energy_density_from_amplitude",
    "planewave_C2_parametric",
    "planewave_C2_natural",
    "gaussian_C",
    "photon_density",
    "photon_density_lab",
    "thomson_mfp",
    "scattering_probability",
]

E_CHARGE = CONSTANTS.elementary_charge_natural

# Normalisation point of the parametric |C|^2 formula.
REF_ENERGY_KEV = 5.0
REF_FLUX_W_CM2 = 1.0
REF_WAVELENGTH_UM = 100.0


@dataclass(frozen=True)
class PlaneWaveScenario:
    geom: TrapezoidGeometry
    amplitude_E0: float
    omega: float

    def __post_init__(self):
        if not (self.amplitude_E0 > 0 and self.omega > 0):
            raise DomainError("plane-wave amplitude and omega must be positive")


@dataclass(frozen=True)
class GaussianScenario:
    geom: TrapezoidGeometry
    amplitude_E0: float
    omega: float
    sigma: float

    def __post_init__(self):
        if not (self.amplitude_E0 > 0 and self.omega > 0 and self.sigma > 0):
            raise DomainError("amplitude, omega and sigma must be positive")

    @property
    def validity_flags(self) -> dict:
        """True entries mark a violated small-beam condition."""
        return {
            "sigma_exceeds_2c": self.sigma > 2 * self.geom.half_separation_c,
            "sigma_exceeds_2d": self.sigma > 2 * self.geom.half_middle_d,
        }

    @property
    def valid(self) -> bool:
        return not any(self.validity_flags.values())


def _sinc(u: float) -> float:
    if abs(u) < 1e-4:
        u2 = u * u
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0
    return math.sin(u) / u


def planewave_C(scenario: PlaneWaveScenario, charge: float = E_CHARGE) -> float:
    """4 e E0 (2c / (w^2 Theta)) sin(w Theta / 2) sin(w (T + Theta) / 2).

    Evaluated as 2 e E0 c (T + Theta) sinc(w Theta / 2) sinc(w (T + Theta) / 2),
    which stays accurate as w -> 0.
    """
    g = scenario.geom
    th, T, w = g.slant_time, g.middle_time, scenario.omega
    return (
        planewave_static_limit(g, scenario.amplitude_E0, charge)
        * _sinc(0.5 * w * th)
        * _sinc(0.5 * w * (T + th))
    )


def planewave_static_limit(geom: TrapezoidGeometry, amplitude_E0: float, charge: float = E_CHARGE) -> float:
    """w -> 0 limit of planewave_C: e E0 times the enclosed area 2c (T + Theta)."""
    return 2.0 * charge * amplitude_E0 * geom.half_separation_c * (geom.middle_time + geom.slant_time)


def planewave_C2_averaged(geom: TrapezoidGeometry, rho: float, omega: float, alpha: float = CONSTANTS.fine_structure_alpha) -> float:
    """|C|^2 with both sin^2 factors replaced by 1/2: 32 pi alpha rho (2c / (w^2 Theta))^2."""
    if not rho >= 0:
        raise DomainError("energy density must be non-negative")
    if not omega > 0:
        raise DomainError("omega must be positive")
    lever = 2.0 * geom.half_separation_c / (omega**2 * geom.slant_time)
    return 32.0 * math.pi * alpha * rho * lever**2


def energy_density_from_amplitude(E0: float) -> float:
    """Cycle-averaged energy density E0^2 / 2."""
    if not E0 >= 0:
        raise DomainError("amplitude must be non-negative")
    return 0.5 * E0 * E0


def _check_parametric(E_k_keV, flux_W_cm2, ratio_2c_over_s, wavelength_um):
    for name, v in (
        ("kinetic energy", E_k_keV),
        ("flux", flux_W_cm2),
        ("2c/s", ratio_2c_over_s),
        ("wavelength", wavelength_um),
    ):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")
    if ratio_2c_over_s > 2:
        warnings.warn("2c/s > 2 would need c > s, which no trapezoid path satisfies", stacklevel=3)


def planewave_C2_parametric(E_k_keV: float, flux_W_cm2: float, ratio_2c_over_s: float, wavelength_um: float) -> float:
    """(E_k / 5 keV) (flux / 1 W cm^-2) (2c / s)^2 (lambda / 100 um)^4."""
    _check_parametric(E_k_keV, flux_W_cm2, ratio_2c_over_s, wavelength_um)
    return (
        (E_k_keV / REF_ENERGY_KEV)
        * (flux_W_cm2 / REF_FLUX_W_CM2)
        * ratio_2c_over_s**2
        * (wavelength_um / REF_WAVELENGTH_UM) ** 4
    )


def planewave_C2_natural(E_k_keV: float, flux_W_cm2: float, ratio_2c_over_s: float, wavelength_um: float) -> float:
    """Same quantity as planewave_C2_parametric, computed from CODATA constants.

    Builds a trapezoid with the requested 2c/s (s = 100 um; it cancels),
    converts flux and wavelength to natural units and calls
    planewave_C2_averaged.
    """
    _check_parametric(E_k_keV, flux_W_cm2, ratio_2c_over_s, wavelength_um)
    if ratio_2c_over_s >= 2:
        raise DomainError("2c/s must be below 2 to build a trapezoid")
    v = speed_from_kinetic_energy(E_k_keV * 1e3)
    s = length_to_natural(100e-6)
    c = 0.5 * ratio_2c_over_s * s
    geom = TrapezoidGeometry(c, math.sqrt(s * s - c * c), s, v)
    rho = flux_to_energy_density_natural(flux_W_cm2)
    return planewave_C2_averaged(geom, rho, wavelength_to_omega(wavelength_um))


def gaussian_C(scenario: GaussianScenario, charge: float = E_CHARGE) -> float:
    """Small-beam approximation for a beam centred between the arms.

    -(8 sqrt(pi) e E0 d^2 / (w^2 T sigma)) (1 - cos theta) cos(w T / 2) exp(-d^2 / sigma^2),
    with d the half middle length and theta = arctan(c / l). Only meaningful
    when `scenario.valid`; the flags are not enforced.
    """
    g = scenario.geom
    d, T, w, sig = g.half_middle_d, g.middle_time, scenario.omega, scenario.sigma
    if T == 0:
        return 0.0
    prefactor = 8.0 * math.sqrt(math.pi) * charge * scenario.amplitude_E0 * d * d / (w * w * T * sig)
    return -prefactor * (1.0 - math.cos(g.opening_angle)) * math.cos(0.5 * w * T) * math.exp(-(d * d) / (sig * sig))


def photon_density(rho: float, omega: float) -> float:
    """Mean photon number density rho / w (natural units, eV^3)."""
    if not rho >= 0 or not omega > 0:
        raise DomainError("need rho >= 0 and omega > 0")
    return rho / omega


def photon_density_lab(flux_W_cm2: float, wavelength_um: float) -> float:
    """Photon number density in m^-3."""
    n = photon_density(flux_to_energy_density_natural(flux_W_cm2), wavelength_to_omega(wavelength_um))
    return n / CONSTANTS.hbar_c**3


def thomson_mfp(flux_W_cm2: float, wavelength_um: float) -> float:
    """Thomson-scattering mean free path w / (sigma_T rho), in metres."""
    if not flux_W_cm2 > 0:
        raise DomainError(f"flux must be positive, got {flux_W_cm2!r}")
    rho = flux_to_energy_density_natural(flux_W_cm2)
    omega = wavelength_to_omega(wavelength_um)
    sigma_T = CONSTANTS.thomson_cross_section / CONSTANTS.hbar_c**2
    return length_from_natural(omega / (sigma_T * rho))


def scattering_probability(path_length_m: float, flux_W_cm2: float, wavelength_um: float) -> float:
    """Expected number of Thomson scatterings along a path (small-probability regime)."""
    if not path_length_m >= 0:
        raise DomainError("path length must be non-negative")
    return path_length_m / thomson_mfp(flux_W_cm2, wavelength_um)
