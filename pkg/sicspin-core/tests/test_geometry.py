import logging

import numpy as np
import pytest

from sicspin_core.exceptions import ParameterError
from sicspin_spin.geometry import (
    THETA_TETRAHEDRAL,
    MwField,
    axial_coupling,
    axial_orientation,
    basal_orientations,
    is_equally_spaced,
    is_one_to_two,
    multiplet_pattern,
    rabi_couplings,
    scan_azimuth_offsets,
)


def test_orientation_frames():
    for o in basal_orientations():
        frame = np.array([o.x_axis, o.y_axis, o.z_axis])
        np.testing.assert_allclose(frame @ frame.T, np.eye(3), atol=1e-12)
        # right handed
        np.testing.assert_allclose(np.cross(o.x_axis, o.y_axis), o.z_axis, atol=1e-12)
        assert o.z_axis[2] == pytest.approx(-1.0 / 3.0)
    assert np.degrees(THETA_TETRAHEDRAL) == pytest.approx(109.4712, abs=1e-4)


def test_six_distinct_orientations():
    axes = np.array([o.z_axis for o in basal_orientations()])
    assert len(axes) == 6
    assert len({tuple(np.round(a, 9)) for a in axes}) == 6


def test_default_field_multiplets():
    couplings = rabi_couplings(MwField(5.0), basal_orientations())
    pattern = multiplet_pattern(couplings)
    x_values = [v for v, _ in pattern["x"]]
    y_values = [v for v, _ in pattern["y"]]
    assert len(x_values) == 3
    low, mid, high = x_values
    assert abs((high - mid) - (mid - low)) <= 1e-9 * (high - low)
    assert len(y_values) == 2
    assert y_values[1] / y_values[0] == pytest.approx(2.0, rel=1e-9)
    # four orientations on the slow y line, two on the fast one
    assert [n for _, n in pattern["y"]] == [4, 2]
    assert [n for _, n in pattern["x"]] == [2, 2, 2]


def test_coupling_values():
    b1 = 5.0
    couplings = rabi_couplings(MwField(b1, elevation_deg=45.0), basal_orientations())
    pattern = multiplet_pattern(couplings)
    x_values = [v for v, _ in pattern["x"]]
    c = b1 / np.sqrt(2)
    expected = sorted([c * (np.sqrt(8) - np.sqrt(3) / 2) / 3, c * np.sqrt(8) / 3, c * (np.sqrt(8) + np.sqrt(3) / 2) / 3])
    np.testing.assert_allclose(x_values, expected, rtol=1e-9)
    y_values = [v for v, _ in pattern["y"]]
    np.testing.assert_allclose(y_values, [c / 2, c], rtol=1e-9)


def test_azimuth_oracle():
    admitted = scan_azimuth_offsets(MwField(5.0), step_deg=1.0)
    assert admitted == [30.0, 90.0]
    assert all(a % 60 == 30 for a in admitted)


def test_sqrt_power():
    field = MwField.from_power(4.0, b1_ref=5.0)
    assert field.b1_mhz == pytest.approx(10.0)
    assert MwField.from_power(0.0).b1_mhz == 0.0
    with pytest.raises(ParameterError):
        MwField.from_power(-1.0)


def test_direction():
    np.testing.assert_allclose(MwField(1.0, elevation_deg=0.0).direction, [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(MwField(1.0, elevation_deg=90.0).direction, [0, 0, 1], atol=1e-15)
    d = MwField(1.0, elevation_deg=30.0, misalignment_deg=10.0).direction
    assert np.linalg.norm(d) == pytest.approx(1.0)
    assert d[1] > 0


def test_axial_coupling():
    field = MwField(5.0, elevation_deg=45.0)
    assert axial_coupling(field) == pytest.approx(5.0 / np.sqrt(2))
    # a field along the c axis does not drive an axial defect
    assert axial_coupling(MwField(5.0, elevation_deg=90.0)) == pytest.approx(0.0, abs=1e-12)
    assert axial_orientation().z_axis.tolist() == [0.0, 0.0, 1.0]


def test_in_plane_field_warns(caplog):
    with caplog.at_level(logging.WARNING):
        rabi_couplings(MwField(5.0, elevation_deg=0.0), basal_orientations())
    assert "degenerate" in caplog.text


@pytest.mark.parametrize("elevation", [10.0, 15.0])
def test_low_elevation_breaks_x_multiplet(caplog, elevation):
    with caplog.at_level(logging.WARNING):
        couplings = rabi_couplings(MwField(5.0, elevation_deg=elevation), basal_orientations())
    pattern = multiplet_pattern(couplings)
    assert len(pattern["x"]) == 3
    assert not pattern["x_equally_spaced"]
    assert "not equally spaced" in caplog.text


def test_default_field_is_quiet(caplog):
    with caplog.at_level(logging.WARNING):
        couplings = rabi_couplings(MwField(5.0), basal_orientations())
    pattern = multiplet_pattern(couplings)
    assert pattern["x_equally_spaced"] and pattern["y_one_to_two"]
    assert caplog.text == ""


def test_pattern_helpers():
    assert is_equally_spaced([1.0, 2.0, 3.0], 1e-9)
    assert not is_equally_spaced([1.0, 2.0, 3.5], 0.1)
    assert not is_equally_spaced([1.0, 2.0], 0.1)
    assert is_one_to_two([1.0, 2.0], 1e-9)
    assert not is_one_to_two([1.0, 3.0], 0.1)


def test_negative_field():
    with pytest.raises(ParameterError):
        MwField(-1.0)
