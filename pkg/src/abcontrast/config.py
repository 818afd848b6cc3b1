"""Declarative run configuration with unit-suffixed keys.

Example::

    {
      "geometry": {"c_um": 50, "l_um": 86.6025, "d_um": 100, "energy_keV": 5},
      "field": {"type": "plane_wave", "flux_W_cm2": 1, "wavelength_um": 100},
      "quadrature": {"rel_tol": 1e-9, "min_samples_per_period": 64},
      "measurement": {"integration_time_s": 1.0},
      "output": {"path": "scan.csv", "format": "csv"}
    }
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .fields import FieldConfig, GaussianBeamField, NullField, PlaneWaveField
from .geometry import GeometryError, TrapezoidGeometry
from .phase import QuadratureSettings
from .units import (
    DomainError,
    field_amplitude_to_natural,
    flux_to_energy_density_natural,
    length_to_natural,
    time_to_natural,
    wavelength_to_omega,
)

__all__ = [
    "ConfigError",
    "GeometryBlock",
    "FieldBlock",
    "QuadratureBlock",
    "MeasurementBlock",
    "OutputBlock",
    "RunConfig",
    "load_config",
    "FIELD_TYPES",
]

FIELD_TYPES = ("plane_wave", "gaussian_beam", "null")


class ConfigError(ValueError):
    """Invalid configuration; `where` names the offending key or line."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def _number(block: dict, key: str, where: str, *, positive=True, optional=False):
    if key not in block or block[key] is None:
        if optional:
            return None
        raise ConfigError(f"{where}.{key}", "missing required value")
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{where}.{key}", f"expected a finite number, got {v!r}")
    if positive and not v > 0:
        raise ConfigError(f"{where}.{key}", f"must be positive, got {v!r}")
    return float(v)


def _reject_unknown(block: dict, allowed, where: str):
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise ConfigError(where, f"unknown key(s) {', '.join(unknown)}")


@dataclass(frozen=True)
class GeometryBlock:
    c_um: float = 50.0
    l_um: float = 86.60254037844386
    d_um: float = 100.0
    energy_keV: Optional[float] = 5.0
    speed: Optional[float] = None

    def __post_init__(self):
        if (self.energy_keV is None) == (self.speed is None):
            raise ConfigError("geometry", "give exactly one of energy_keV and speed")

    @classmethod
    def from_dict(cls, d: dict) -> "GeometryBlock":
        w = "geometry"
        _reject_unknown(d, ("c_um", "l_um", "d_um", "energy_keV", "speed"), w)
        if ("energy_keV" in d) == ("speed" in d):
            raise ConfigError(w, "give exactly one of energy_keV and speed")
        return cls(
            c_um=_number(d, "c_um", w),
            l_um=_number(d, "l_um", w),
            d_um=_number(d, "d_um", w, positive=False),
            energy_keV=_number(d, "energy_keV", w, optional=True),
            speed=_number(d, "speed", w, optional=True),
        )

    def build(self) -> TrapezoidGeometry:
        try:
            return TrapezoidGeometry.from_lab(
                self.c_um, self.l_um, self.d_um, energy_keV=self.energy_keV, speed=self.speed
            )
        except GeometryError as exc:
            raise ConfigError("geometry", str(exc)) from None


@dataclass(frozen=True)
class FieldBlock:
    type: str = "plane_wave"
    amplitude_V_m: Optional[float] = None
    flux_W_cm2: Optional[float] = 1.0
    wavelength_um: float = 100.0
    sigma_um: Optional[float] = None
    center_um: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.type not in FIELD_TYPES:
            raise ConfigError("field.type", f"must be one of {', '.join(FIELD_TYPES)}, got {self.type!r}")
        if self.type != "null":
            if self.amplitude_V_m is not None and self.flux_W_cm2 is not None:
                raise ConfigError("field", "amplitude_V_m and flux_W_cm2 are mutually exclusive; give one")
            if self.amplitude_V_m is None and self.flux_W_cm2 is None:
                raise ConfigError("field", "give one of amplitude_V_m and flux_W_cm2")
        if self.type == "gaussian_beam" and self.sigma_um is None:
            raise ConfigError("field.sigma_um", "required for gaussian_beam")

    @classmethod
    def from_dict(cls, d: dict) -> "FieldBlock":
        w = "field"
        _reject_unknown(d, ("type", "amplitude_V_m", "flux_W_cm2", "wavelength_um", "sigma_um", "center_um"), w)
        kind = d.get("type", "plane_wave")
        center = d.get("center_um", [0.0, 0.0])
        if not (isinstance(center, (list, tuple)) and len(center) == 2):
            raise ConfigError("field.center_um", "expected [x, z]")
        center = tuple(_number({"v": v}, "v", "field.center_um", positive=False) for v in center)
        if kind == "null":
            return cls(type="null", amplitude_V_m=None, flux_W_cm2=None,
                       wavelength_um=_number(d, "wavelength_um", w, optional=True) or 100.0)
        return cls(
            type=kind,
            amplitude_V_m=_number(d, "amplitude_V_m", w, positive=False, optional=True),
            flux_W_cm2=_number(d, "flux_W_cm2", w, positive=False, optional=True),
            wavelength_um=_number(d, "wavelength_um", w),
            sigma_um=_number(d, "sigma_um", w, optional=True),
            center_um=center,
        )

    @property
    def omega(self) -> float:
        return wavelength_to_omega(self.wavelength_um)

    @property
    def amplitude_natural(self) -> float:
        if self.type == "null":
            return 0.0
        if self.amplitude_V_m is not None:
            return field_amplitude_to_natural(self.amplitude_V_m)
        return math.sqrt(2.0 * flux_to_energy_density_natural(self.flux_W_cm2))

    def build(self) -> FieldConfig:
        try:
            omega = self.omega
            if self.type == "null":
                return NullField(omega)
            E0 = self.amplitude_natural
            if self.type == "plane_wave":
                return PlaneWaveField(E0, omega)
            center = tuple(length_to_natural(abs(v) * 1e-6) * math.copysign(1.0, v) for v in self.center_um)
            return GaussianBeamField(E0, omega, length_to_natural(self.sigma_um * 1e-6), center)
        except DomainError as exc:
            raise ConfigError("field", str(exc)) from None


@dataclass(frozen=True)
class QuadratureBlock:
    rel_tol: float = 1e-9
    min_samples_per_period: int = 64
    max_subdivisions: int = 12

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureBlock":
        w = "quadrature"
        _reject_unknown(d, ("rel_tol", "min_samples_per_period", "max_subdivisions"), w)
        out = cls(
            rel_tol=_number(d, "rel_tol", w, optional=True) or cls.rel_tol,
            min_samples_per_period=int(_number(d, "min_samples_per_period", w, optional=True) or cls.min_samples_per_period),
            max_subdivisions=int(_number(d, "max_subdivisions", w, optional=True) or cls.max_subdivisions),
        )
        out.build()
        return out

    def build(self) -> QuadratureSettings:
        try:
            return QuadratureSettings(self.rel_tol, self.min_samples_per_period, self.max_subdivisions)
        except ValueError as exc:
            raise ConfigError("quadrature", str(exc)) from None


@dataclass(frozen=True)
class MeasurementBlock:
    integration_time_s: Optional[float] = None

    @classmethod
    def from_dict(cls, d: dict) -> "MeasurementBlock":
        _reject_unknown(d, ("integration_time_s",), "measurement")
        return cls(_number(d, "integration_time_s", "measurement", optional=True))

    @property
    def integration_time_natural(self) -> Optional[float]:
        if self.integration_time_s is None:
            return None
        return time_to_natural(self.integration_time_s)


@dataclass(frozen=True)
class OutputBlock:
    path: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "structured"):
            raise ConfigError("output.format", f"must be csv or structured, got {self.format!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "OutputBlock":
        _reject_unknown(d, ("path", "format"), "output")
        return cls(d.get("path"), d.get("format", "csv"))


@dataclass(frozen=True)
class RunConfig:
    geometry: GeometryBlock = dataclasses.field(default_factory=GeometryBlock)
    field: FieldBlock = dataclasses.field(default_factory=FieldBlock)
    quadrature: QuadratureBlock = dataclasses.field(default_factory=QuadratureBlock)
    measurement: MeasurementBlock = dataclasses.field(default_factory=MeasurementBlock)
    output: OutputBlock = dataclasses.field(default_factory=OutputBlock)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("<root>", "configuration must be a JSON object")
        _reject_unknown(d, ("geometry", "field", "quadrature", "measurement", "output"), "<root>")
        blocks = {}
        for name, kind in (
            ("geometry", GeometryBlock),
            ("field", FieldBlock),
            ("quadrature", QuadratureBlock),
            ("measurement", MeasurementBlock),
            ("output", OutputBlock),
        ):
            if name in d:
                if not isinstance(d[name], dict):
                    raise ConfigError(name, "expected an object")
                blocks[name] = kind.from_dict(d[name])
        return cls(**blocks)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["field"]["center_um"] = list(self.field.center_um)
        for block in out.values():
            for k in [k for k, v in block.items() if v is None]:
                del block[k]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str, source: str = "<string>") -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None
        return cls.from_dict(data)

    def replace(self, **blocks) -> "RunConfig":
        return dataclasses.replace(self, **blocks)


def load_config(path) -> RunConfig:
    path = Path(path)
    return RunConfig.loads(path.read_text(encoding="utf-8"), source=str(path))
