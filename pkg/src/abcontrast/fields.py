"""Applied field configurations.

Only the z component of E is modelled, as E^z = Env(x, y, z) cos(k y - w t)
with k = w (vacuum). A field reports its complex phasor Env(x, y, z) e^{iky};
the e^{-iwt} factor is left to the time quadrature. `omega == 0` marks a
static field whose envelope is the field itself.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FieldConfig",
    "PlaneWaveField",
    "GaussianBeamField",
    "NullField",
    "evaluate_phasor",
    "field_in_time",
]


class FieldConfig:
    omega: float

    def envelope(self, x, y, z):
        """Real, non-negative modulation amplitude (vectorised)."""
        raise NotImplementedError

    def phasor(self, x, y, z):
        k = self.omega
        return self.envelope(x, y, z) * np.exp(1j * k * np.asarray(y, dtype=float))

    @property
    def is_static(self) -> bool:
        return self.omega == 0

    def _check_omega(self):
        if not self.omega >= 0:
            raise ValueError(f"omega must be >= 0, got {self.omega!r}")


@dataclass(frozen=True)
class PlaneWaveField(FieldConfig):
    amplitude_E0: float
    omega: float

    def __post_init__(self):
        self._check_omega()

    def envelope(self, x, y, z):
        shape = np.broadcast(np.asarray(x), np.asarray(y), np.asarray(z)).shape
        return np.full(shape, float(self.amplitude_E0))


@dataclass(frozen=True)
class GaussianBeamField(FieldConfig):
    """Normally incident beam, Env = E0 exp(-((x - x0)^2 + (z - z0)^2) / sigma^2)."""

    amplitude_E0: float
    omega: float
    width_sigma: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        self._check_omega()
        if not self.width_sigma > 0:
            raise ValueError(f"beam width must be positive, got {self.width_sigma!r}")

    def envelope(self, x, y, z):
        x0, z0 = self.center
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        r2 = (x - x0) ** 2 + (z - z0) ** 2
        out = self.amplitude_E0 * np.exp(-r2 / self.width_sigma**2)
        return np.broadcast_to(out, np.broadcast(out, np.asarray(y)).shape)


@dataclass(frozen=True)
class NullField(FieldConfig):
    omega: float = 1.0

    def envelope(self, x, y, z):
        return np.zeros(np.broadcast(np.asarray(x), np.asarray(y), np.asarray(z)).shape)


def evaluate_phasor(field: FieldConfig, x, y, z):
    """Env(x, y, z) e^{iky}; real on the y = 0 plane."""
    out = field.phasor(x, y, z)
    return complex(out) if np.ndim(out) == 0 else out


def field_in_time(field: FieldConfig, x, y, z, t):
    """Real E^z = Env cos(k y - w t)."""
    out = np.real(field.phasor(x, y, z) * np.exp(-1j * field.omega * np.asarray(t, dtype=float)))
    return float(out) if np.ndim(out) == 0 else out
