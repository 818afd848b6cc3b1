"""Command-line front end: contrast, scan, validate, mfp and eval subcommands."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import random
import sys
import warnings
from pathlib import Path

from . import closedform
from .config import ConfigError, RunConfig, load_config
from .contrast import bessel_j0, contrast_report, oracle_time_average
from .fields import GaussianBeamField, PlaneWaveField
from .geometry import TrapezoidGeometry, build_trapezoid
from .phase import QuadratureError, QuadratureSettings, compute_C
from .scan import (
    ENGINES,
    SWEEPABLE,
    ScanSpec,
    closed_form_C,
    count_revivals,
    find_contrast_zeros,
    revival_peaks,
    run_scan,
)
from .units import CONSTANTS, DomainError, RelativisticWarning, length_from_natural

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_QUADRATURE = 4
EXIT_IO = 5
EXIT_VALIDATION = 6

PLANE_WAVE_TOLERANCE = 1e-6
JACOBI_ANGER_TOLERANCE = 1e-8
VALIDATE_GRID = (0.1, 1.0, 3.0, 10.0, 30.0)

SCAN_COLUMNS = (
    "parameter_value",
    "abs_C",
    "upsilon_analytic",
    "upsilon_oracle_re",
    "upsilon_oracle_im",
    "upsilon_gaussian_model",
    "engine_disagreement",
    "error",
)


def fmt(x) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(x))


def _emit(args, payload: dict, out=None):
    out = out or sys.stdout
    if args.format == "structured":
        json.dump(payload, out, indent=2, default=_jsonable)
        out.write("\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("quantity", "value"))
    for k, v in payload.items():
        if isinstance(v, (list, dict)):
            v = json.dumps(v, default=_jsonable)
        elif isinstance(v, float):
            v = fmt(v)
        writer.writerow((k, v))


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    raise TypeError(type(v).__name__)


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    quad = cfg.quadrature
    changes = {}
    if getattr(args, "rel_tol", None) is not None:
        changes["rel_tol"] = args.rel_tol
    if getattr(args, "min_samples_per_period", None) is not None:
        changes["min_samples_per_period"] = args.min_samples_per_period
    if changes:
        quad = dataclasses.replace(quad, **changes)
        quad.build()
        cfg = cfg.replace(quadrature=quad)
    if getattr(args, "format", None) is None:
        args.format = cfg.output.format
    return cfg


def physics_warnings(cfg: RunConfig) -> list[str]:
    """Validity advisories for a configuration; never fatal."""
    out = []
    geom = cfg.geometry.build()
    if geom.speed_v > 0.3:
        out.append(f"electron speed {geom.speed_v:.4g} c is not small; nonrelativistic kinematics degrade")
    if cfg.field.type == "gaussian_beam":
        field = cfg.field.build()
        scen = closedform.GaussianScenario(geom, max(field.amplitude_E0, 1e-300), field.omega, field.width_sigma)
        for flag, bad in scen.validity_flags.items():
            if bad:
                out.append(f"gaussian beam: {flag.replace('_', ' ')}; small-beam closed form not applicable")
    t_meas = cfg.measurement.integration_time_natural
    if t_meas is not None:
        period = 2 * math.pi / cfg.field.omega
        if period > t_meas / 10:
            out.append("field period exceeds a tenth of the integration time; emission-time averaging is not justified")
    return out


def _run_contrast(cfg: RunConfig, engine: str) -> dict:
    geom = cfg.geometry.build()
    field = cfg.field.build()
    pair = build_trapezoid(geom)
    payload = {}
    if engine in ("numeric", "both"):
        res = compute_C(pair, field, cfg.quadrature.build())
        C = res.C
        payload["quadrature_error_estimate"] = res.quadrature_error_estimate
        payload["nodes_used"] = res.nodes_used
    if engine in ("closed_form", "both"):
        cf = closed_form_C(cfg)
        payload["abs_C_closed_form"] = abs(cf)
        if engine == "closed_form":
            C = complex(cf)
    if cfg.field.type == "plane_wave":
        rho = closedform.energy_density_from_amplitude(field.amplitude_E0)
        payload["abs_C2_cycle_averaged"] = closedform.planewave_C2_averaged(geom, rho, field.omega)
        if cfg.geometry.energy_keV is not None and cfg.field.flux_W_cm2:
            payload["abs_C2_parametric"] = closedform.planewave_C2_parametric(
                cfg.geometry.energy_keV,
                cfg.field.flux_W_cm2,
                2 * geom.half_separation_c / geom.slant_length,
                cfg.field.wavelength_um,
            )
    rep = contrast_report(C)
    return {
        "A": C.real,
        "B": C.imag,
        "abs_C": rep.abs_C,
        "abs_C2": rep.abs_C**2,
        "upsilon_analytic": rep.upsilon_analytic,
        "upsilon_oracle_re": rep.upsilon_oracle.real,
        "upsilon_oracle_im": rep.upsilon_oracle.imag,
        "upsilon_gaussian_model": rep.upsilon_gaussian_model,
        "upsilon_taylor": rep.upsilon_taylor,
        **payload,
    }


def cmd_contrast(args) -> int:
    cfg = _config(args)
    payload = _run_contrast(cfg, args.engine)
    payload["warnings"] = physics_warnings(cfg)
    _emit(args, payload)
    return EXIT_OK


def write_scan_csv(rows, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for r in rows:
        writer.writerow(
            (
                fmt(r.parameter_value),
                fmt(r.abs_C),
                fmt(r.upsilon_analytic),
                fmt(r.upsilon_oracle.real),
                fmt(r.upsilon_oracle.imag),
                fmt(r.upsilon_gaussian_model),
                fmt(r.engine_disagreement),
                r.error,
            )
        )


def scan_summary(spec: ScanSpec, rows, zeros) -> dict:
    finite = [r.engine_disagreement for r in rows if r.ok and not math.isnan(r.engine_disagreement)]
    return {
        "sweep": spec.swept_parameter,
        "engine": spec.engine,
        "points": len(rows),
        "failed_points": sum(not r.ok for r in rows),
        "max_engine_disagreement": max(finite) if finite else None,
        "zeros": [
            {"parameter_value": z.parameter_value_at_zero, "abs_C": z.abs_C_at_zero,
             "bracket": list(z.bracket), "bisections": z.refined_by}
            for z in zeros
        ],
        "revivals": count_revivals(rows),
        "revival_peaks": [
            {"parameter_value": r.parameter_value, "abs_C": r.abs_C, "abs_upsilon": abs(r.upsilon_analytic)}
            for r in revival_peaks(rows)
        ],
    }


def cmd_scan(args) -> int:
    cfg = _config(args)
    lo, hi = args.range
    spec = ScanSpec(args.sweep, lo, hi, args.points, cfg, spacing=args.spacing, engine=args.engine)
    rows = run_scan(spec, workers=args.threads)
    zeros = find_contrast_zeros(spec, rows)
    summary = scan_summary(spec, rows, zeros)
    path = args.output or cfg.output.path
    if args.format == "structured":
        body = json.dumps(
            {"columns": SCAN_COLUMNS, "rows": [
                [r.parameter_value, r.abs_C, r.upsilon_analytic, r.upsilon_oracle.real, r.upsilon_oracle.imag,
                 r.upsilon_gaussian_model, r.engine_disagreement, r.error] for r in rows],
             "summary": summary},
            indent=2,
        ) + "\n"
    else:
        buf = io.StringIO()
        write_scan_csv(rows, buf)
        body = buf.getvalue()
    if path:
        Path(path).write_text(body, encoding="utf-8")
        if args.format != "structured":
            Path(str(path) + ".summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
        json.dump(summary, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(body)
        if args.format != "structured":
            sys.stderr.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def _validation_grid(geom: TrapezoidGeometry, E0: float, settings: QuadratureSettings):
    rows = []
    for wth in VALIDATE_GRID:
        omega = wth / geom.slant_time
        for wT in VALIDATE_GRID:
            g = TrapezoidGeometry(geom.half_separation_c, geom.longitudinal_l, 0.5 * geom.speed_v * wT / omega, geom.speed_v)
            numeric = compute_C(build_trapezoid(g), PlaneWaveField(E0, omega), settings).abs_C
            closed = abs(closedform.planewave_C(closedform.PlaneWaveScenario(g, E0, omega)))
            rows.append({"omega_Theta": wth, "omega_T": wT, "abs_C_closed_form": closed,
                         "abs_C_quadrature": numeric, "rel_error": abs(numeric - closed) / closed})
    return rows


def _gaussian_diagnostic(geom: TrapezoidGeometry, E0: float, omega: float, settings: QuadratureSettings):
    rows = []
    d = geom.half_middle_d
    if d == 0:
        return rows
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for ratio in (0.25, 1 / 3, 0.5, 1.0):
            sigma = ratio * d
            numeric = compute_C(build_trapezoid(geom), GaussianBeamField(E0, omega, sigma), settings).abs_C
            closed = abs(closedform.gaussian_C(closedform.GaussianScenario(geom, E0, omega, sigma)))
            rows.append({"sigma_over_d": ratio, "abs_C_quadrature": numeric, "abs_C_closed_form": closed,
                         "ratio": numeric / closed if closed else None})
    return rows


def cmd_validate(args) -> int:
    cfg = _config(args)
    settings = cfg.quadrature.build()
    soft = settings.relative_tolerance > PLANE_WAVE_TOLERANCE
    geom = cfg.geometry.build()
    field = cfg.field.build()
    E0 = field.amplitude_E0 if cfg.field.type != "null" and field.amplitude_E0 > 0 else 1.0

    grid = _validation_grid(geom, E0, settings)
    pw_max = max(r["rel_error"] for r in grid)
    rng = random.Random(20040101)
    ja_max = 0.0
    for _ in range(200):
        r, phi = 10.0 * math.sqrt(rng.random()), 2 * math.pi * rng.random()
        A, B = r * math.cos(phi), r * math.sin(phi)
        ja_max = max(ja_max, abs(oracle_time_average(A, B) - bessel_j0(math.hypot(A, B))))
    gauss = _gaussian_diagnostic(geom, E0, field.omega, settings)

    checks = {
        "plane_wave_closed_form_vs_quadrature": pw_max <= PLANE_WAVE_TOLERANCE,
        "jacobi_anger_oracle": ja_max <= JACOBI_ANGER_TOLERANCE,
    }
    passed = all(checks.values())
    payload = {
        "plane_wave_max_rel_error": pw_max,
        "plane_wave_tolerance": PLANE_WAVE_TOLERANCE,
        "jacobi_anger_max_abs_error": ja_max,
        "jacobi_anger_tolerance": JACOBI_ANGER_TOLERANCE,
        "checks": checks,
        "plane_wave_grid": grid,
        "gaussian_beam_diagnostic (diagnostic - no hard tolerance)": gauss,
        "mode": "soft" if soft else "hard",
        "result": "pass" if passed else "fail",
    }
    _emit(args, payload)
    if not passed:
        if soft:
            print(f"warning: validation degraded at rel_tol={settings.relative_tolerance:g} (soft mode)", file=sys.stderr)
            return EXIT_OK
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_mfp(args) -> int:
    cfg = _config(args)
    l_mfp = closedform.thomson_mfp(args.flux, args.wavelength)
    n = closedform.photon_density_lab(args.flux, args.wavelength)
    path = length_from_natural(cfg.geometry.build().path_length)
    payload = {
        "flux_W_cm2": args.flux,
        "wavelength_um": args.wavelength,
        "mean_free_path_m": l_mfp,
        "photon_density_m3": n,
        "path_length_m": path,
        "scattering_probability": path / l_mfp,
    }
    _emit(args, payload)
    return EXIT_OK


EVAL_TARGETS = (
    "planewave_C",
    "planewave_C2_averaged",
    "planewave_C2_parametric",
    "planewave_C2_natural",
    "energy_density_from_amplitude",
    "gaussian_C",
    "photon_density",
    "thomson_mfp",
)


def cmd_eval(args) -> int:
    """Closed forms by name. Scenario-based targets read the config;
    the parametric ones take energy_keV, flux_W_cm2, ratio_2c_over_s and
    wavelength_um from the config unless overridden by --set key=value."""
    cfg = _config(args)
    overrides = {}
    for item in args.set or []:
        key, _, value = item.partition("=")
        try:
            overrides[key] = float(value)
        except ValueError:
            raise ConfigError(f"--set {key}", f"expected a number, got {value!r}") from None
    geom, field = cfg.geometry.build(), cfg.field.build()
    name = args.name
    if name == "planewave_C":
        value = closedform.planewave_C(closedform.PlaneWaveScenario(geom, field.amplitude_E0, field.omega))
    elif name == "planewave_C2_averaged":
        rho = closedform.energy_density_from_amplitude(field.amplitude_E0)
        value = closedform.planewave_C2_averaged(geom, rho, field.omega)
    elif name == "energy_density_from_amplitude":
        value = closedform.energy_density_from_amplitude(field.amplitude_E0)
    elif name == "gaussian_C":
        if not isinstance(field, GaussianBeamField):
            raise ConfigError("field.type", "gaussian_C needs a gaussian_beam field")
        value = closedform.gaussian_C(closedform.GaussianScenario(geom, field.amplitude_E0, field.omega, field.width_sigma))
    elif name == "photon_density":
        value = closedform.photon_density(closedform.energy_density_from_amplitude(field.amplitude_E0), field.omega)
    else:
        flux = cfg.field.flux_W_cm2
        if flux is None and cfg.field.amplitude_V_m is not None:
            rho_si = 0.5 * CONSTANTS.vacuum_permittivity * cfg.field.amplitude_V_m**2
            flux = rho_si * CONSTANTS.speed_of_light * 1e-4
        params = {
            "energy_keV": cfg.geometry.energy_keV,
            "flux_W_cm2": flux,
            "ratio_2c_over_s": 2 * geom.half_separation_c / geom.slant_length,
            "wavelength_um": cfg.field.wavelength_um,
        }
        unknown = set(overrides) - set(params)
        if unknown:
            raise ConfigError("--set", f"unknown parameter(s) {', '.join(sorted(unknown))}")
        params.update(overrides)
        if name == "thomson_mfp":
            value = closedform.thomson_mfp(params["flux_W_cm2"], params["wavelength_um"])
        else:
            if params["energy_keV"] is None:
                raise ConfigError("geometry.energy_keV", f"{name} needs a kinetic energy")
            fn = getattr(closedform, name)
            value = fn(params["energy_keV"], params["flux_W_cm2"], params["ratio_2c_over_s"], params["wavelength_um"])
    _emit(args, {"name": name, "value": value})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abcontrast",
        description="Contrast loss of a two-path electron interferometer in an oscillating field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, quadrature=True):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--format", choices=("csv", "structured"), default=None)
        if quadrature:
            p.add_argument("--rel-tol", type=float, dest="rel_tol")
            p.add_argument("--min-samples-per-period", type=int, dest="min_samples_per_period")

    p = sub.add_parser("contrast", help="|C| and all contrast estimates for one configuration")
    common(p)
    p.add_argument("--engine", choices=ENGINES, default="numeric")
    p.set_defaults(func=cmd_contrast)

    p = sub.add_parser("scan", help="sweep one parameter and write a CSV table")
    common(p)
    p.add_argument("--sweep", choices=SWEEPABLE, required=True)
    p.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"), required=True)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--engine", choices=ENGINES, default="numeric")
    p.add_argument("--output", help="CSV path (summary goes to PATH.summary.json)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: $ABCONTRAST_THREADS)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("validate", help="closed form vs quadrature and oracle checks")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mfp", help="Thomson mean free path and scattering probability")
    common(p, quadrature=False)
    p.add_argument("--flux", type=float, required=True, help="W/cm^2")
    p.add_argument("--wavelength", type=float, required=True, help="micrometres")
    p.set_defaults(func=cmd_mfp)

    p = sub.add_parser("eval", help="evaluate a closed-form expression by name")
    common(p, quadrature=False)
    p.add_argument("name", choices=EVAL_TARGETS)
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            code = args.func(args)
        except ConfigError as exc:
            print(f"error: config {exc}", file=sys.stderr)
            code = EXIT_PARSE
        except DomainError as exc:
            print(f"error: {exc}", file=sys.stderr)
            code = EXIT_DOMAIN
        except QuadratureError as exc:
            print(f"error: quadrature: {exc}", file=sys.stderr)
            code = EXIT_QUADRATURE
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            code = EXIT_IO
    for w in caught:
        if not issubclass(w.category, RelativisticWarning) or args.command != "contrast":
            print(f"warning: {w.message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
