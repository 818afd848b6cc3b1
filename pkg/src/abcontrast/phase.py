"""Surface quadrature for the complex phase amplitude C = A + iB.

    C = e * int dt e^{-iwt} int_{z_lower(t)}^{z_upper(t)} dz Env(x(t), 0, z)

The t integral uses composite Gauss-Legendre panels laid between path
breakpoints, dense enough to resolve the oscillation, and refined by panel
doubling. The z integral at each time node is a vectorised Gauss-Legendre
rule refined the same way. Panel contributions are summed with math.fsum,
which is exactly rounded and therefore independent of evaluation order.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import FieldConfig, NullField
from .geometry import TrajectoryPair, UnsupportedGeometryError
from .units import CONSTANTS

__all__ = [
    "QuadratureSettings",
    "PhaseResult",
    "QuadratureError",
    "StaticFieldError",
    "CancellationWarning",
    "compute_C",
    "phase_at_emission",
    "static_phase",
]

ELECTRON_CHARGE = CONSTANTS.elementary_charge_natural
CANCELLATION_WARN_RATIO = 1e6

_GL_ORDER = 10
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
_EPS = np.finfo(float).eps
_CHUNK = 1 << 20


class QuadratureError(RuntimeError):
    """Refinement budget exhausted; `best_estimate` holds the last PhaseResult."""

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class StaticFieldError(ValueError):
    """compute_C was given omega <= 0; use static_phase instead."""


class CancellationWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class QuadratureSettings:
    relative_tolerance: float = 1e-9
    min_samples_per_period: int = 64
    max_subdivisions: int = 12

    def __post_init__(self):
        if not self.relative_tolerance > 0:
            raise ValueError("relative_tolerance must be positive")
        if self.min_samples_per_period < 8:
            raise ValueError("min_samples_per_period must be at least 8")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


@dataclass(frozen=True)
class PhaseResult:
    C: complex
    quadrature_error_estimate: float
    nodes_used: int
    cancellation_ratio: float = dc_field(default=1.0, compare=False)

    @property
    def A(self) -> float:
        return self.C.real

    @property
    def B(self) -> float:
        return self.C.imag

    @property
    def abs_C(self) -> float:
        return abs(self.C)


def _gl_panels(edges: np.ndarray, n_per_interval: np.ndarray):
    """Nodes and weights for composite GL with n panels inside each [edges[i], edges[i+1]]."""
    starts, widths = [], []
    for a, b, n in zip(edges[:-1], edges[1:], n_per_interval):
        cuts = np.linspace(a, b, int(n) + 1)
        starts.append(cuts[:-1])
        widths.append(np.diff(cuts))
    start = np.concatenate(starts)[:, None]
    width = np.concatenate(widths)[:, None]
    nodes = start + 0.5 * width * (_GL_NODES + 1.0)
    weights = 0.5 * width * _GL_WEIGHTS
    return nodes.ravel(), weights.ravel()


def _chord_integrals(field: FieldConfig, x, z_hi, z_lo, rtol, max_levels):
    """int_{z_lo}^{z_hi} Env(x, 0, z) dz for every node; returns (values, abs error bound)."""

    def rule(n_panels):
        u = (np.arange(n_panels)[:, None] + 0.5 * (_GL_NODES + 1.0)) / n_panels
        u = u.ravel()
        w = np.tile(_GL_WEIGHTS, n_panels) / (2.0 * n_panels)
        out = np.empty_like(x)
        step = max(1, _CHUNK // u.size)
        for i in range(0, x.size, step):
            sl = slice(i, i + step)
            z = z_lo[sl, None] + (z_hi - z_lo)[sl, None] * u[None, :]
            env = field.envelope(x[sl, None], 0.0, z)
            out[sl] = (z_hi - z_lo)[sl] * (env @ w)
        return out

    n = 1
    coarse = rule(n)
    for _ in range(max_levels):
        fine = rule(2 * n)
        err = np.abs(fine - coarse)
        scale = np.max(np.abs(fine)) if fine.size else 0.0
        if np.all(err <= rtol * scale + 16 * _EPS * np.abs(fine)):
            return fine, err
        n *= 2
        coarse = fine
    raise QuadratureError(f"chord integral did not converge with {n} panels")


def _surface_integral(pair, field, omega, settings, n_scale):
    tb = pair.breakpoints()
    span = np.diff(tb)
    cycles = span * omega / (2.0 * math.pi)
    n_panels = np.maximum(1, np.ceil(settings.min_samples_per_period * cycles / _GL_ORDER)).astype(int) * n_scale
    t, w = _gl_panels(tb, n_panels)
    x, zu, zl = pair.chords(t)
    g, g_err = _chord_integrals(
        field, x, zu, zl, 0.1 * settings.relative_tolerance, settings.max_subdivisions
    )
    phase = np.exp(-1j * omega * t) if omega else np.ones_like(t)
    terms = w * g * phase
    value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    l1 = math.fsum(np.abs(terms))
    inner_err = math.fsum(np.abs(w) * g_err)
    return value, l1, inner_err, t.size


def _integrate(pair, field, omega, settings, charge):
    if not pair.is_x_symmetric():
        raise UnsupportedGeometryError("paths have different x(t); equal-time chords are not supported")
    if isinstance(field, NullField):
        return PhaseResult(0j, 0.0, 0)
    prev, _, _, nodes = _surface_integral(pair, field, omega, settings, 1)
    total_nodes = nodes
    scale = 1
    for _ in range(settings.max_subdivisions):
        scale *= 2
        value, l1, inner_err, nodes = _surface_integral(pair, field, omega, settings, scale)
        total_nodes += nodes
        outer_err = abs(value - prev)
        # Rounding of the individual terms bounds what any refinement can resolve.
        floor = 64 * _EPS * l1
        ratio = l1 / abs(value) if value else math.inf
        result = PhaseResult(charge * value, abs(charge) * (outer_err + inner_err), total_nodes, ratio if l1 else 1.0)
        if outer_err <= settings.relative_tolerance * abs(value) + floor:
            if l1 and ratio > CANCELLATION_WARN_RATIO:
                warnings.warn(
                    f"surface integral cancels by a factor {ratio:.3g}; result is "
                    "dominated by rounding of the individual contributions",
                    CancellationWarning,
                    stacklevel=3,
                )
            return result
        prev = value
    raise QuadratureError(
        f"no convergence after {settings.max_subdivisions} panel doublings "
        f"(error estimate {result.quadrature_error_estimate:.3g})",
        best_estimate=result,
    )


def compute_C(
    pair: TrajectoryPair,
    field: FieldConfig,
    settings: QuadratureSettings = QuadratureSettings(),
    charge: float = ELECTRON_CHARGE,
) -> PhaseResult:
    """Complex amplitude C of the emission-time dependent phase."""
    if not isinstance(field, NullField) and not field.omega > 0:
        raise StaticFieldError("field is static (omega <= 0); use static_phase")
    return _integrate(pair, field, field.omega, settings, charge)


def phase_at_emission(result: PhaseResult, omega: float, t0):
    """Phase for an electron emitted at t0: Re[C e^{-iw t0}] = A cos(w t0) + B sin(w t0)."""
    t0 = np.asarray(t0, dtype=float)
    out = result.A * np.cos(omega * t0) + result.B * np.sin(omega * t0)
    return float(out) if out.ndim == 0 else out


def static_phase(
    pair: TrajectoryPair,
    field: FieldConfig,
    settings: QuadratureSettings = QuadratureSettings(),
    charge: float = ELECTRON_CHARGE,
) -> float:
    """Phase e * int dt dz Env for a time-independent field.

    The field's envelope is taken as the static E^z; its omega is ignored.
    There is no emission-time dependence, so the contrast stays 1.
    """
    return _integrate(pair, field, 0.0, settings, charge).C.real
