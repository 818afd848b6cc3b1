import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abcontrast.units import (
    CONSTANTS,
    DomainError,
    LabQuantity,
    PhysicalConstants,
    RelativisticWarning,
    Unit,
    field_amplitude_to_natural,
    flux_to_energy_density_natural,
    length_from_natural,
    length_to_natural,
    speed_from_kinetic_energy,
)


def test_constants_positive_and_charge_consistent():
    for v in vars(CONSTANTS).values():
        assert v > 0
    e = CONSTANTS.elementary_charge_natural
    assert e**2 / (4 * math.pi) == pytest.approx(CONSTANTS.fine_structure_alpha, rel=1e-15, abs=0)


def test_constants_reject_nonpositive():
    kw = dict(vars(CONSTANTS))
    kw["hbar_c"] = 0.0
    with pytest.raises(ValueError):
        PhysicalConstants(**kw)


def test_codata_values():
    assert 1 / CONSTANTS.fine_structure_alpha == pytest.approx(137.036, rel=1e-6, abs=0)
    assert CONSTANTS.electron_mass == pytest.approx(510998.95, rel=1e-8, abs=0)
    assert CONSTANTS.hbar_c == pytest.approx(1.97326980e-7, rel=1e-8, abs=0)
    assert CONSTANTS.thomson_cross_section == pytest.approx(6.6524587e-29, rel=1e-7, abs=0)


def test_flux_conversion():
    assert flux_to_energy_density_natural(0.0) == 0.0
    # 1 W/cm^2 -> 3.336e-5 J/m^3 -> 2.082e14 eV/m^3 -> times (hbar c)^3
    by_hand = 1e4 / 2.99792458e8 / 1.602176634e-19 * 1.97326980e-7**3
    one = flux_to_energy_density_natural(1.0)
    assert one == pytest.approx(1.600e-6, rel=1e-3, abs=0)
    assert one == pytest.approx(by_hand, rel=1e-8, abs=0)
    assert flux_to_energy_density_natural(2.0) == 2 * one
    with pytest.raises(DomainError):
        flux_to_energy_density_natural(-1.0)


def test_speed_from_kinetic_energy():
    assert speed_from_kinetic_energy(5e3, 511e3) == pytest.approx(0.13989, abs=1e-5)
    assert speed_from_kinetic_energy(1e-12, 511e3) < 1e-8
    with pytest.warns(RelativisticWarning):
        assert speed_from_kinetic_energy(255.5e3, 511e3) == pytest.approx(1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        speed_from_kinetic_energy(5e3)
    for bad in ((0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)):
        with pytest.raises(DomainError):
            speed_from_kinetic_energy(*bad)


def test_length_conversion():
    assert length_to_natural(0.0) == 0.0
    assert length_to_natural(1e-4) == pytest.approx(506.8, rel=1e-3, abs=0)
    with pytest.raises(DomainError):
        length_to_natural(-1.0)


@given(st.floats(min_value=1e-30, max_value=1e30))
def test_length_round_trip(x):
    assert length_from_natural(length_to_natural(x)) == pytest.approx(x, rel=1e-12, abs=0)


@given(st.floats(min_value=1e-30, max_value=1e30), st.floats(min_value=0, max_value=1e6))
def test_conversions_linear(x, a):
    assert length_to_natural(a * x) == pytest.approx(a * length_to_natural(x), rel=1e-12, abs=1e-300)
    assert flux_to_energy_density_natural(a * x) == pytest.approx(
        a * flux_to_energy_density_natural(x), rel=1e-12, abs=1e-300
    )


def test_field_amplitude_matches_charge_times_field():
    # e_nat * E_nat must equal (e E_SI in eV/m) * (hbar c in eV m).
    E = 1234.5
    lhs = CONSTANTS.elementary_charge_natural * field_amplitude_to_natural(E)
    rhs = E * CONSTANTS.hbar_c
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=0)


@pytest.mark.parametrize("unit", list(Unit))
@pytest.mark.parametrize("value", [1e-30, 3.7, 1e30])
def test_lab_quantity_round_trip(unit, value):
    q = LabQuantity(value, unit)
    back = LabQuantity.from_natural(q.to_natural(), unit)
    assert back.unit is unit
    assert back.value == pytest.approx(value, rel=1e-12, abs=0)
