import numpy as np
import pytest

from sicspin_charge import default_registry
from sicspin_core.exceptions import ParameterError
from sicspin_core.models import Transition
from sicspin_spin.zfs import (
    ZfsParams,
    analytic_energies,
    build_hamiltonian,
    eigenstructure,
    spin_operators,
    transition_frequencies,
    transition_frequency,
    zero_field_basis,
    zfs_from_transitions,
)

ZFS_CASES = [(1233.6, 99.0), (1358.5, 16.4), (1350.9, 0.0), (2870.0, 5.0)]


def test_spin_operators_commutation():
    sx, sy, sz = spin_operators()
    np.testing.assert_allclose(sx @ sy - sy @ sx, 1j * sz, atol=1e-15)
    np.testing.assert_allclose(sx @ sx + sy @ sy + sz @ sz, 2 * np.eye(3), atol=1e-15)


def test_matrix_elements():
    sx, sy, _ = spin_operators()
    basis = zero_field_basis()
    assert basis.plus.conj() @ sx @ basis.zero == pytest.approx(1.0)
    assert basis.zero.conj() @ sy @ basis.minus == pytest.approx(1j)
    # each drive axis couples |0> to one level only
    assert abs(basis.minus.conj() @ sx @ basis.zero) < 1e-15
    assert abs(basis.plus.conj() @ sy @ basis.zero) < 1e-15


@pytest.mark.parametrize("d, e", ZFS_CASES)
def test_hamiltonian(d, e):
    zfs = ZfsParams(d, e)
    h = build_hamiltonian(zfs)
    assert np.array_equal(h, h.conj().T)
    assert abs(np.trace(h)) < 1e-9
    energies, _ = eigenstructure(zfs)
    np.testing.assert_allclose(energies, sorted(analytic_energies(zfs)), atol=1e-9)


@pytest.mark.parametrize("d, e", ZFS_CASES)
def test_zero_field_eigenvectors(d, e):
    zfs = ZfsParams(d, e)
    h = build_hamiltonian(zfs)
    basis = zero_field_basis()
    e0, e_minus, e_plus = analytic_energies(zfs)
    np.testing.assert_allclose(h @ basis.zero, e0 * basis.zero, atol=1e-9)
    np.testing.assert_allclose(h @ basis.plus, e_plus * basis.plus, atol=1e-9)
    np.testing.assert_allclose(h @ basis.minus, e_minus * basis.minus, atol=1e-9)


def test_transitions():
    zfs = ZfsParams(1233.6, 99.0)
    f_minus, f_plus = transition_frequencies(zfs)
    assert f_minus == pytest.approx(1134.6)
    assert f_plus == pytest.approx(1332.6)
    assert transition_frequency(zfs, Transition.PLUS) == f_plus
    assert transition_frequency(zfs, "minus") == f_minus


def test_zfs_from_transitions_exact():
    zfs = zfs_from_transitions(1134.6, 1332.6)
    assert zfs.d_mhz == 1233.6
    assert zfs.e_mhz == 99.0


def test_registry_roundtrip():
    for species in default_registry():
        back = zfs_from_transitions(*transition_frequencies(species.zfs))
        assert back.d_mhz == pytest.approx(species.zfs.d_mhz, abs=1e-9)
        assert back.e_mhz == pytest.approx(species.zfs.e_mhz, abs=1e-9)


def test_axial():
    zfs = ZfsParams(1350.9, 0.0)
    assert zfs.is_axial
    f_minus, f_plus = transition_frequencies(zfs)
    assert f_minus == f_plus == 1350.9


@pytest.mark.parametrize("d, e", [(0.0, 0.0), (-5.0, 1.0), (100.0, -1.0), (100.0, 100.0)])
def test_invalid(d, e):
    with pytest.raises(ParameterError):
        ZfsParams(d, e)


def test_unordered_transitions():
    with pytest.raises(ParameterError):
        zfs_from_transitions(1332.6, 1134.6)
    with pytest.raises(ParameterError):
        zfs_from_transitions(0.0, 10.0)
