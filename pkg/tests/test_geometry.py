import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abcontrast.geometry import (
    GeometryError,
    TrajectoryPair,
    TrapezoidGeometry,
    UnsupportedGeometryError,
    build_trapezoid,
    chord_at,
    separation_profile,
)
from abcontrast.units import DomainError, length_to_natural

geoms = st.builds(
    TrapezoidGeometry,
    st.floats(0.1, 100.0),
    st.floats(0.1, 100.0),
    # A middle segment far shorter than the slant ones loses its speed to time rounding.
    st.one_of(st.just(0.0), st.floats(0.1, 100.0)),
    st.floats(0.01, 0.9),
)


def test_trapezoid_vertices(unit_geom):
    pair = build_trapezoid(unit_geom)
    assert pair.upper_path.shape == (4, 4)
    th, T = unit_geom.slant_time, unit_geom.middle_time
    assert pair.upper_path[:, 0].tolist() == [0.0, th, th + T, 2 * th + T]
    assert pair.upper_path[:, 3].tolist() == [0.0, 1.0, 1.0, 0.0]
    assert pair.upper_path[:, 1].tolist() == [-2.0, -1.0, 1.0, 2.0]
    assert np.all(pair.upper_path[:, 2] == 0)
    assert chord_at(pair, th + T / 2).z_upper == 1.0


def test_shared_endpoints(unit_geom):
    pair = build_trapezoid(unit_geom)
    end = 2 * unit_geom.slant_time + unit_geom.middle_time
    assert tuple(pair.upper_path[0]) == tuple(pair.lower_path[0]) == (0.0, -2.0, 0.0, 0.0)
    assert tuple(pair.upper_path[-1]) == tuple(pair.lower_path[-1]) == (end, 2.0, 0.0, 0.0)


def test_slant_length():
    c, l = length_to_natural(50e-6), length_to_natural(86.60254037844386e-6)
    g = TrapezoidGeometry(c, l, c, 0.1)
    assert g.slant_length == pytest.approx(length_to_natural(100e-6), rel=1e-9, abs=0)


def test_derived_quantities(unit_geom):
    assert unit_geom.slant_time == pytest.approx(math.sqrt(2) / 0.1)
    assert unit_geom.middle_time == pytest.approx(20.0)
    assert unit_geom.opening_angle == pytest.approx(math.pi / 4)


@pytest.mark.parametrize(
    "args", [(0, 1, 1, 0.1), (1, 0, 1, 0.1), (1, 1, -1, 0.1), (1, 1, 1, 0), (1, 1, 1, 1.0), (1, 1, 1, 1.5)]
)
def test_invalid_geometry(args):
    with pytest.raises(GeometryError):
        TrapezoidGeometry(*args)


def test_chords(unit_geom):
    pair = build_trapezoid(unit_geom)
    th, T = unit_geom.slant_time, unit_geom.middle_time
    s0 = chord_at(pair, 0.0)
    assert s0.z_upper == s0.z_lower == 0.0
    mid = chord_at(pair, th + T / 2)
    assert (mid.z_upper, mid.z_lower, mid.x_common) == (1.0, -1.0, 0.0)
    assert chord_at(pair, th / 2).z_upper == pytest.approx(0.5)
    for t in (-1e-9, pair.t_end * (1 + 1e-12) + 1e-9):
        with pytest.raises(DomainError):
            chord_at(pair, t)


def test_asymmetric_pair_rejected():
    upper = [(0, 0, 0, 0), (1, 0.5, 0, 0.2), (2, 1, 0, 0)]
    lower = [(0, 0, 0, 0), (1, 0.3, 0, -0.2), (2, 1, 0, 0)]
    pair = TrajectoryPair(upper, lower)
    assert not pair.is_x_symmetric()
    with pytest.raises(UnsupportedGeometryError):
        chord_at(pair, 0.5)


def test_general_pair_validation():
    ok_u = [(0, 0, 0, 0), (1, 0.5, 0, 0.2), (2, 1, 0, 0)]
    ok_l = [(0, 0, 0, 0), (1, 0.5, 0, -0.2), (2, 1, 0, 0)]
    TrajectoryPair(ok_u, ok_l)
    with pytest.raises(GeometryError, match="share"):
        TrajectoryPair(ok_u, [(0, 0, 0, 0), (1, 0.5, 0, -0.2), (2, 1, 0, 0.1)])
    with pytest.raises(GeometryError, match="increase"):
        TrajectoryPair([(0, 0, 0, 0), (0, 0.5, 0, 0.2), (2, 1, 0, 0)], ok_l)
    with pytest.raises(GeometryError, match="y = 0"):
        TrajectoryPair([(0, 0, 0, 0), (1, 0.5, 0.1, 0.2), (2, 1, 0, 0)], ok_l)
    with pytest.raises(GeometryError, match="speed"):
        TrajectoryPair([(0, 0, 0, 0), (1, 5.0, 0, 0.2), (2, 1, 0, 0)], ok_l)


def test_separation_profile(unit_geom):
    pair = build_trapezoid(unit_geom)
    prof = separation_profile(pair)
    th, T = unit_geom.slant_time, unit_geom.middle_time
    assert prof.breakpoints.tolist() == [0.0, th, th + T, 2 * th + T]
    assert prof.values.tolist() == [0.0, 2.0, 2.0, 0.0]
    assert prof.slopes[0] == pytest.approx(2.0 / th)
    assert prof.slopes[1] == 0.0
    assert prof.max_separation == 2.0
    assert prof.integral() == pytest.approx(2.0 * (T + th), rel=1e-14, abs=0)


def test_degenerate_middle_segment():
    g = TrapezoidGeometry(1.0, 1.0, 0.0, 0.1)
    prof = separation_profile(build_trapezoid(g))
    assert len(prof.breakpoints) == 3
    assert prof.values.tolist() == [0.0, 2.0, 0.0]
    assert prof.integral() == pytest.approx(2.0 * g.slant_time)


def test_from_lab_requires_one_kinematic_input():
    with pytest.raises(GeometryError):
        TrapezoidGeometry.from_lab(50, 50, 50)
    with pytest.raises(GeometryError):
        TrapezoidGeometry.from_lab(50, 50, 50, energy_keV=5, speed=0.1)
    g = TrapezoidGeometry.from_lab(50, 50, 50, energy_keV=5)
    assert g.speed_v == pytest.approx(0.13989, abs=1e-5)


@given(geoms)
def test_closure_speed_and_symmetry(g):
    pair = build_trapezoid(g)
    assert np.array_equal(pair.upper_path[0], pair.lower_path[0])
    assert np.array_equal(pair.upper_path[-1], pair.lower_path[-1])
    for path in (pair.upper_path, pair.lower_path):
        d = np.diff(path, axis=0)
        speeds = np.linalg.norm(d[:, 1:], axis=1) / d[:, 0]
        np.testing.assert_allclose(speeds, g.speed_v, rtol=1e-12)
    t = np.linspace(pair.t_start, pair.t_end, 57)
    _, zu, zl = pair.chords(t)
    np.testing.assert_array_equal(zl, -zu)
    prof = separation_profile(pair)
    scale = 2 * g.half_separation_c
    np.testing.assert_allclose(prof(t), prof(pair.t_end - t), rtol=0, atol=1e-12 * scale)
    assert prof.max_separation == pytest.approx(2 * g.half_separation_c)


def test_shift_and_swap(unit_geom):
    pair = build_trapezoid(unit_geom)
    shifted = pair.shifted(3.0)
    assert shifted.t_start == 3.0
    assert chord_at(shifted, 3.0 + unit_geom.slant_time).z_upper == pytest.approx(1.0)
    swapped = pair.swapped()
    assert chord_at(swapped, unit_geom.slant_time).z_upper == -1.0
