import dataclasses
import math

import pytest

from abcontrast.config import ConfigError, FieldBlock, RunConfig
from abcontrast.contrast import J0_ZEROS
from abcontrast.scan import (
    THREADS_ENV,
    ScanSpec,
    closed_form_C,
    count_revivals,
    default_workers,
    evaluate_point,
    find_contrast_zeros,
    revival_peaks,
    run_scan,
)

# Frozen from the integral-representation oracle.
FIRST_MIN_MAG = 0.40275939570255297
SECOND_MAX_MAG = 0.30011575252613256

AMPLITUDE_FOR_C9 = 30000.0  # V/m; |C| ~ 9.5 on the default geometry


@pytest.fixture(scope="module")
def wide_spec():
    return ScanSpec("amplitude", 0.0, AMPLITUDE_FOR_C9, 181)


@pytest.fixture(scope="module")
def wide_rows(wide_spec):
    return run_scan(wide_spec, workers=4)


def test_rows_are_ordered_and_complete(wide_spec, wide_rows):
    assert [r.parameter_value for r in wide_rows] == list(wide_spec.grid())
    assert all(r.ok for r in wide_rows)


@pytest.mark.parametrize("workers", [1, 3, 8])
def test_identical_rows_for_any_worker_count(wide_spec, wide_rows, workers):
    assert run_scan(wide_spec, workers=workers) == wide_rows


def test_zeros_match_bessel_roots(wide_spec, wide_rows):
    zeros = find_contrast_zeros(wide_spec, wide_rows)
    assert [z.abs_C_at_zero for z in zeros] == pytest.approx(list(J0_ZEROS[:3]), abs=1e-6)
    for z in zeros:
        lo, hi = z.bracket
        assert lo <= z.parameter_value_at_zero <= hi


def test_revivals_decrease(wide_rows):
    peaks = revival_peaks(wide_rows)
    mags = [abs(r.upsilon_analytic) for r in peaks]
    assert count_revivals(wide_rows) == 2
    assert mags[0] == pytest.approx(FIRST_MIN_MAG, abs=1e-2)
    assert mags[1] == pytest.approx(SECOND_MAX_MAG, abs=1e-2)
    assert mags[0] > mags[1]


def test_no_revival_before_first_zero():
    rows = run_scan(ScanSpec("amplitude", 0.0, 5000.0, 21), workers=1)
    assert count_revivals(rows) == 0
    assert find_contrast_zeros(ScanSpec("amplitude", 0.0, 5000.0, 21), rows) == []


def test_null_field_scan_has_full_contrast():
    base = RunConfig(field=FieldBlock(type="null", amplitude_V_m=None, flux_W_cm2=None))
    rows = run_scan(ScanSpec("wavelength", 50, 200, 5, base), workers=2)
    assert all(r.abs_C == 0 and r.upsilon_analytic == 1.0 for r in rows)


def test_closed_form_linear_in_amplitude():
    base = RunConfig()
    c1 = closed_form_C(base.replace(field=dataclasses.replace(base.field, amplitude_V_m=1.0, flux_W_cm2=None)))
    c7 = closed_form_C(base.replace(field=dataclasses.replace(base.field, amplitude_V_m=7.0, flux_W_cm2=None)))
    assert c7 / c1 == pytest.approx(7.0, rel=1e-12, abs=0)


def test_engine_both_agrees(wide_rows):
    rows = run_scan(ScanSpec("amplitude", 100.0, AMPLITUDE_FOR_C9, 11, engine="both"), workers=2)
    assert max(r.engine_disagreement for r in rows) <= 1e-6
    assert all(math.isnan(r.engine_disagreement) for r in wide_rows)


def test_wavelength_scan_engines_agree():
    rows = run_scan(ScanSpec("wavelength", 20, 400, 9, spacing="log", engine="both"), workers=2)
    assert max(r.engine_disagreement for r in rows) <= 1e-6


def test_evaluate_point_closed_form_is_real():
    C, dis = evaluate_point(RunConfig(), "closed_form")
    assert C.imag == 0 and math.isnan(dis)


def test_gaussian_width_scan():
    base = RunConfig(field=FieldBlock(type="gaussian_beam", flux_W_cm2=1.0, sigma_um=50.0))
    rows = run_scan(ScanSpec("beam_width", 30, 100, 3, base), workers=1)
    assert all(r.ok for r in rows)
    assert rows[0].abs_C < rows[-1].abs_C


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(swept_parameter="temperature", lo=0, hi=1, n_points=3),
        dict(swept_parameter="amplitude", lo=1, hi=0, n_points=3),
        dict(swept_parameter="amplitude", lo=0, hi=1, n_points=1),
        dict(swept_parameter="amplitude", lo=0, hi=1, n_points=3, spacing="log"),
        dict(swept_parameter="amplitude", lo=0, hi=1, n_points=3, engine="fast"),
        dict(swept_parameter="beam_width", lo=1, hi=2, n_points=3),
    ],
)
def test_scan_spec_validation(kwargs):
    with pytest.raises(ConfigError):
        ScanSpec(**kwargs)


def test_failed_point_is_recorded_not_raised():
    rows = run_scan(ScanSpec("flux", -1.0, 1.0, 3), workers=1)
    assert not rows[0].ok
    assert rows[0].error.startswith("ConfigError") and "flux" in rows[0].error
    assert math.isnan(rows[0].abs_C)
    assert rows[2].ok


def test_threads_env(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_workers() == 3
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError):
        default_workers()
