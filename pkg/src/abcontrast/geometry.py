"""Piecewise-linear spacetime paths of the two interferometer arms.

Coordinates are (t, x, y, z) in natural units. The electrons drift along x
and separate along z; both paths stay in the y = 0 plane. The integration
surface is swept out by the equal-time chord joining the two electrons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .units import DomainError, length_to_natural, speed_from_kinetic_energy

__all__ = [
    "GeometryError",
    "UnsupportedGeometryError",
    "TrapezoidGeometry",
    "TrajectoryPair",
    "ChordSample",
    "SeparationProfile",
    "build_trapezoid",
    "chord_at",
    "separation_profile",
]


class GeometryError(ValueError):
    pass


class UnsupportedGeometryError(GeometryError):
    """The two paths do not share x(t), so equal-time chords are not at fixed x."""


@dataclass(frozen=True)
class TrapezoidGeometry:
    """Diverge / run parallel / converge path pair.

    half_separation_c
        Half the maximum separation between the arms (along z).
    longitudinal_l
        Drift distance along x covered by each slanted segment.
    half_middle_d
        Half the length of the parallel middle segment. Zero gives a
        triangular (two-segment) path.
    speed_v
        Electron speed in units of c.
    """

    half_separation_c: float
    longitudinal_l: float
    half_middle_d: float
    speed_v: float

    def __post_init__(self):
        if not (self.half_separation_c > 0 and self.longitudinal_l > 0):
            raise GeometryError("c and l must be positive")
        if not self.half_middle_d >= 0:
            raise GeometryError("d must be non-negative")
        if not 0 < self.speed_v < 1:
            raise GeometryError(f"speed must lie in (0, 1), got {self.speed_v!r}")

    @classmethod
    def from_lab(
        cls,
        c_um: float,
        l_um: float,
        d_um: float,
        *,
        energy_keV: Optional[float] = None,
        speed: Optional[float] = None,
    ) -> "TrapezoidGeometry":
        """Build from micrometre lengths and either a kinetic energy or a speed."""
        if (energy_keV is None) == (speed is None):
            raise GeometryError("give exactly one of energy_keV and speed")
        if speed is None:
            speed = speed_from_kinetic_energy(energy_keV * 1e3)
        try:
            c, l, d = (length_to_natural(x * 1e-6) for x in (c_um, l_um, d_um))
        except DomainError as exc:
            raise GeometryError(str(exc)) from None
        return cls(c, l, d, speed)

    @property
    def slant_length(self) -> float:
        """s, the length of the first and third segments."""
        return math.hypot(self.half_separation_c, self.longitudinal_l)

    @property
    def slant_time(self) -> float:
        """Theta = s / v."""
        return self.slant_length / self.speed_v

    @property
    def middle_time(self) -> float:
        """T = 2d / v."""
        return 2.0 * self.half_middle_d / self.speed_v

    @property
    def total_time(self) -> float:
        return 2.0 * self.slant_time + self.middle_time

    @property
    def opening_angle(self) -> float:
        """Corner deflection angle arctan(c / l)."""
        return math.atan2(self.half_separation_c, self.longitudinal_l)

    @property
    def path_length(self) -> float:
        return 2.0 * self.slant_length + 2.0 * self.half_middle_d


@dataclass(frozen=True)
class ChordSample:
    t: float
    x_common: float
    z_upper: float
    z_lower: float


def _as_vertices(path) -> np.ndarray:
    arr = np.array(path, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 4 or arr.shape[0] < 2:
        raise GeometryError("a path needs at least two (t, x, y, z) vertices")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("vertex coordinates must be finite")
    arr.setflags(write=False)
    return arr


class TrajectoryPair:
    """Two piecewise-linear paths with common end points.

    Vertices are rows (t, x, y, z). Both paths must start and end at the same
    events, have strictly increasing times, lie in y = 0 and move slower than
    `speed_bound`.
    """

    def __init__(self, upper_path, lower_path, *, speed_bound: float = 1.0):
        upper = _as_vertices(upper_path)
        lower = _as_vertices(lower_path)
        for name, path in (("upper", upper), ("lower", lower)):
            dt = np.diff(path[:, 0])
            if np.any(dt <= 0):
                raise GeometryError(f"{name} path vertex times must strictly increase")
            if np.any(path[:, 2] != 0):
                raise GeometryError(f"{name} path must lie in the y = 0 plane")
            speeds = np.linalg.norm(np.diff(path[:, 1:], axis=0), axis=1) / dt
            if np.any(speeds >= speed_bound):
                raise GeometryError(f"{name} path has a segment at or above speed {speed_bound}")
        if not (np.array_equal(upper[0], lower[0]) and np.array_equal(upper[-1], lower[-1])):
            raise GeometryError("paths must share their first and last vertices")
        self.upper_path = upper
        self.lower_path = lower

    @property
    def t_start(self) -> float:
        return float(self.upper_path[0, 0])

    @property
    def t_end(self) -> float:
        return float(self.upper_path[-1, 0])

    @property
    def total_time(self) -> float:
        return self.t_end - self.t_start

    def breakpoints(self) -> np.ndarray:
        """Sorted union of vertex times of both paths."""
        return np.union1d(self.upper_path[:, 0], self.lower_path[:, 0])

    def swapped(self) -> "TrajectoryPair":
        return TrajectoryPair(self.lower_path, self.upper_path)

    def shifted(self, dt: float) -> "TrajectoryPair":
        """The same pair delayed by dt."""
        shift = np.array([dt, 0.0, 0.0, 0.0])
        return TrajectoryPair(self.upper_path + shift, self.lower_path + shift)

    def is_x_symmetric(self, rtol: float = 1e-12) -> bool:
        # Both x(t) are piecewise linear, so agreement at every breakpoint is sufficient.
        tb = self.breakpoints()
        xu = np.interp(tb, self.upper_path[:, 0], self.upper_path[:, 1])
        xl = np.interp(tb, self.lower_path[:, 0], self.lower_path[:, 1])
        scale = max(np.max(np.abs(self.upper_path[:, 1:])), np.max(np.abs(self.lower_path[:, 1:])), 1e-300)
        return bool(np.all(np.abs(xu - xl) <= rtol * scale))

    def chords(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorised chord evaluation: (x_common, z_upper, z_lower) at times t."""
        t = np.asarray(t, dtype=float)
        if np.any(t < self.t_start) or np.any(t > self.t_end):
            raise DomainError(f"t outside [{self.t_start}, {self.t_end}]")
        if not self.is_x_symmetric():
            raise UnsupportedGeometryError("paths have different x(t); equal-time chords are not supported")
        up, lo = self.upper_path, self.lower_path
        x = np.interp(t, up[:, 0], up[:, 1])
        zu = np.interp(t, up[:, 0], up[:, 3])
        zl = np.interp(t, lo[:, 0], lo[:, 3])
        return x, zu, zl

    def __repr__(self):
        return f"TrajectoryPair(upper={self.upper_path.tolist()}, lower={self.lower_path.tolist()})"


def build_trapezoid(geom: TrapezoidGeometry) -> TrajectoryPair:
    """Fig.-1 style pair, centred so the middle of the parallel stretch is at the origin."""
    c, l, d = geom.half_separation_c, geom.longitudinal_l, geom.half_middle_d
    th, T = geom.slant_time, geom.middle_time
    times = [0.0, th, th + T, 2 * th + T]
    xs = [-(d + l), -d, d, d + l]
    zs = [0.0, c, c, 0.0]
    if d == 0:
        del times[2], xs[2], zs[2]
    upper = [(t, x, 0.0, z) for t, x, z in zip(times, xs, zs)]
    lower = [(t, x, 0.0, -z) for t, x, z in zip(times, xs, zs)]
    return TrajectoryPair(upper, lower)


def chord_at(pair: TrajectoryPair, t: float) -> ChordSample:
    x, zu, zl = pair.chords(t)
    return ChordSample(float(t), float(x), float(zu), float(zl))


@dataclass(frozen=True)
class SeparationProfile:
    """Piecewise-linear separation z_upper - z_lower between breakpoints."""

    breakpoints: np.ndarray
    values: np.ndarray

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.breakpoints)

    @property
    def max_separation(self) -> float:
        return float(np.max(self.values))

    def __call__(self, t):
        return np.interp(t, self.breakpoints, self.values)

    def integral(self) -> float:
        """Exact area under the profile (trapezoid rule is exact for linear pieces)."""
        return float(np.sum(0.5 * (self.values[1:] + self.values[:-1]) * np.diff(self.breakpoints)))


def separation_profile(pair: TrajectoryPair) -> SeparationProfile:
    tb = pair.breakpoints()
    _, zu, zl = pair.chords(tb)
    return SeparationProfile(tb, zu - zl)
