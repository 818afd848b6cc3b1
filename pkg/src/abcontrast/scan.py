"""One-dimensional parameter sweeps, contrast zeros and revival counting."""
from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .closedform import GaussianScenario, PlaneWaveScenario, gaussian_C, planewave_C
from .config import ConfigError, RunConfig
from .contrast import (
    contrast_analytic,
    contrast_gaussian_model,
    oracle_time_average,
)
from .geometry import build_trapezoid
from .phase import QuadratureError, compute_C
from .units import DomainError

__all__ = [
    "SWEEPABLE",
    "ENGINES",
    "THREADS_ENV",
    "ScanSpec",
    "ScanRow",
    "ZeroCrossing",
    "evaluate_point",
    "closed_form_C",
    "run_scan",
    "find_contrast_zeros",
    "count_revivals",
    "revival_peaks",
    "default_workers",
]

SWEEPABLE = ("amplitude", "flux", "wavelength", "half_separation", "beam_width")
ENGINES = ("numeric", "closed_form", "both")
THREADS_ENV = "ABCONTRAST_THREADS"

ZERO_TOLERANCE = 1e-9
MAX_BISECTIONS = 200


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(THREADS_ENV, f"expected an integer, got {raw!r}") from None
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class ScanSpec:
    """Sweep of one lab-unit parameter over [lo, hi].

    Units follow the config keys: amplitude in V/m, flux in W/cm^2,
    wavelength, half_separation (c) and beam_width (sigma) in micrometres.
    """

    swept_parameter: str
    lo: float
    hi: float
    n_points: int
    base: RunConfig = dataclasses.field(default_factory=RunConfig)
    spacing: str = "linear"
    engine: str = "numeric"

    def __post_init__(self):
        if self.swept_parameter not in SWEEPABLE:
            raise ConfigError("sweep", f"must be one of {', '.join(SWEEPABLE)}, got {self.swept_parameter!r}")
        if self.engine not in ENGINES:
            raise ConfigError("engine", f"must be one of {', '.join(ENGINES)}, got {self.engine!r}")
        if self.spacing not in ("linear", "log"):
            raise ConfigError("spacing", f"must be linear or log, got {self.spacing!r}")
        if not self.lo < self.hi:
            raise ConfigError("range", f"need lo < hi, got {self.lo!r}, {self.hi!r}")
        if self.n_points < 2:
            raise ConfigError("points", "need at least 2 points")
        if self.spacing == "log" and not self.lo > 0:
            raise ConfigError("range", "log spacing requires lo > 0")
        if self.swept_parameter == "beam_width" and self.base.field.type != "gaussian_beam":
            raise ConfigError("sweep", "beam_width sweeps need a gaussian_beam field")

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.n_points)
        return np.linspace(self.lo, self.hi, self.n_points)

    def config_at(self, value: float) -> RunConfig:
        base = self.base
        f, g = base.field, base.geometry
        p = self.swept_parameter
        if p == "amplitude":
            return base.replace(field=dataclasses.replace(f, amplitude_V_m=value, flux_W_cm2=None))
        if p == "flux":
            return base.replace(field=dataclasses.replace(f, amplitude_V_m=None, flux_W_cm2=value))
        if p == "wavelength":
            return base.replace(field=dataclasses.replace(f, wavelength_um=value))
        if p == "half_separation":
            return base.replace(geometry=dataclasses.replace(g, c_um=value))
        return base.replace(field=dataclasses.replace(f, sigma_um=value))


@dataclass(frozen=True)
class ScanRow:
    parameter_value: float
    abs_C: float
    upsilon_analytic: float
    upsilon_oracle: complex
    upsilon_gaussian_model: float
    engine_disagreement: float = math.nan
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


@dataclass(frozen=True)
class ZeroCrossing:
    parameter_value_at_zero: float
    abs_C_at_zero: float
    bracket: tuple
    refined_by: int


def closed_form_C(config: RunConfig) -> float:
    kind = config.field.type
    if kind == "null":
        return 0.0
    geom = config.geometry.build()
    field = config.field.build()
    if field.amplitude_E0 == 0:
        return 0.0
    if kind == "plane_wave":
        return planewave_C(PlaneWaveScenario(geom, field.amplitude_E0, field.omega))
    return gaussian_C(GaussianScenario(geom, field.amplitude_E0, field.omega, field.width_sigma))


def _numeric_C(config: RunConfig) -> complex:
    pair = build_trapezoid(config.geometry.build())
    return compute_C(pair, config.field.build(), config.quadrature.build()).C


def evaluate_point(config: RunConfig, engine: str = "numeric") -> tuple[complex, float]:
    """(C, relative disagreement of |C| between engines).

    The closed-form engine yields a real C (its phase relative to the
    emission-time origin is not tracked). The disagreement is NaN unless
    engine == 'both', in which case C is the numeric value.
    """
    if engine == "closed_form":
        return complex(closed_form_C(config)), math.nan
    numeric = _numeric_C(config)
    if engine == "numeric":
        return numeric, math.nan
    a, b = abs(numeric), abs(closed_form_C(config))
    if a == b:
        return numeric, 0.0
    return numeric, abs(a - b) / max(a, b)


def _row(spec: ScanSpec, value: float) -> ScanRow:
    value = float(value)
    try:
        C, disagreement = evaluate_point(spec.config_at(value), spec.engine)
    except (QuadratureError, DomainError, ConfigError, ValueError) as exc:
        nan = math.nan
        return ScanRow(value, nan, nan, complex(nan, nan), nan, nan, f"{type(exc).__name__}: {exc}")
    abs_C = abs(C)
    return ScanRow(
        parameter_value=value,
        abs_C=abs_C,
        upsilon_analytic=contrast_analytic(abs_C),
        upsilon_oracle=oracle_time_average(C.real, C.imag),
        upsilon_gaussian_model=contrast_gaussian_model(abs_C),
        engine_disagreement=disagreement,
    )


def run_scan(spec: ScanSpec, workers: Optional[int] = None) -> list[ScanRow]:
    grid = spec.grid()
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        return [_row(spec, v) for v in grid]
    rows: list = [None] * len(grid)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(_row, spec, v): i for i, v in enumerate(grid)}
        for fut, i in futures.items():
            rows[i] = fut.result()
    return rows


def find_contrast_zeros(spec: ScanSpec, rows: Optional[list] = None, workers: Optional[int] = None) -> list[ZeroCrossing]:
    """Locate sign changes of J0(|C|) along the sweep and refine each by bisection."""
    if rows is None:
        rows = run_scan(spec, workers)
    engine = "closed_form" if spec.engine == "closed_form" else "numeric"

    def upsilon(value):
        C, _ = evaluate_point(spec.config_at(value), engine)
        return contrast_analytic(C), abs(C)

    zeros = []
    good = [r for r in rows if r.ok]
    for left, right in zip(good[:-1], good[1:]):
        ul, ur = left.upsilon_analytic, right.upsilon_analytic
        if ul == 0:
            zeros.append(ZeroCrossing(left.parameter_value, left.abs_C, (left.parameter_value,) * 2, 0))
            continue
        if ul * ur > 0 or ur == 0:
            continue
        a, b = left.parameter_value, right.parameter_value
        fa = ul
        mid, (fm, cm) = a, (ul, left.abs_C)
        it = 0
        while it < MAX_BISECTIONS:
            it += 1
            mid = 0.5 * (a + b)
            fm, cm = upsilon(mid)
            if abs(fm) <= ZERO_TOLERANCE or mid in (a, b):
                break
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b = mid
        zeros.append(ZeroCrossing(mid, cm, (left.parameter_value, right.parameter_value), it))
    if good and good[-1].upsilon_analytic == 0 and len(good) > 1:
        last = good[-1]
        zeros.append(ZeroCrossing(last.parameter_value, last.abs_C, (last.parameter_value,) * 2, 0))
    return zeros


def revival_peaks(rows: list) -> list[ScanRow]:
    """Rows at interior local maxima of |Upsilon| that come after the first sign change."""
    good = [r for r in rows if r.ok]
    if len(good) < 3:
        return []
    mag = [abs(r.upsilon_analytic) for r in good]
    first_zero = None
    for i in range(len(good) - 1):
        if good[i].upsilon_analytic * good[i + 1].upsilon_analytic <= 0 and mag[i] + mag[i + 1] > 0:
            first_zero = i + 1
            break
    if first_zero is None:
        return []
    return [
        good[i]
        for i in range(max(first_zero, 1), len(good) - 1)
        if mag[i] > mag[i - 1] and mag[i] >= mag[i + 1]
    ]


def count_revivals(rows: list) -> int:
    return len(revival_peaks(rows))
