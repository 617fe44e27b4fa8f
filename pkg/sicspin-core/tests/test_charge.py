import numpy as np
import pytest

from sicspin_charge.rates import (
    Level,
    PhotoCycleRates,
    PhotoPhysics,
    SingularSystemError,
    rate_matrix,
    steady_state,
)
from sicspin_charge.readout import (
    PHOTON_ENERGY_905NM_EV,
    pdmr_visible,
    power_dependence,
    readout_curve,
    readout_signal,
)
from sicspin_charge.registry import default_registry
from sicspin_core.exceptions import ParameterError
from sicspin_core.models import Channel


@pytest.fixture(scope="module")
def registry():
    return default_registry()


def test_rates_validation():
    with pytest.raises(ParameterError):
        PhotoCycleRates(k_pump=-1, k_rad=72, k_isc0=5, k_isc1=25, k_s=5, k_ion=0, k_rec=0)
    # no spin contrast without a faster ms=+-1 crossing
    with pytest.raises(ParameterError):
        PhotoCycleRates(k_pump=1, k_rad=72, k_isc0=5, k_isc1=5, k_s=5, k_ion=0, k_rec=0)
    with pytest.raises(ParameterError):
        PhotoPhysics().at_power(-1.0)


def test_rate_matrix_conserves_population():
    q = rate_matrix(PhotoPhysics().at_power(2.0))
    np.testing.assert_allclose(q.sum(axis=0), 0.0, atol=1e-9)
    off_diagonal = q - np.diag(np.diag(q))
    assert np.all(off_diagonal >= 0)


def test_steady_state_polarizes():
    state = steady_state(PhotoPhysics().at_power(1.0))
    assert state.occupations.sum() == pytest.approx(1.0, abs=1e-12)
    assert state.residual <= 1e-10
    assert np.all(state.occupations >= 0)
    # the singlet decays into ms=0, so illumination polarizes above thermal
    assert state.ms0_polarization > 1.0 / 3.0
    assert state.pl_rate > 0
    assert state.current_rate > 0
    assert state[Level.IONIZED] > 0


def test_dark_state():
    rates = PhotoPhysics().at_power(0.0)
    assert rates.is_dark
    state = steady_state(rates)
    assert state[Level.GS0] == pytest.approx(1.0 / 3.0)
    assert state.pl_rate == 0.0
    assert state.current_rate == 0.0
    assert steady_state(rates, 0.9)[Level.GS0] == pytest.approx(0.9)


def test_conditioned_state():
    rates = PhotoPhysics().at_power(5.0)
    for f in (0.0, 0.3, 0.7, 1.0):
        state = steady_state(rates, f)
        assert state.ms0_polarization == pytest.approx(f, abs=1e-12)
        assert state.occupations.sum() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ParameterError):
        steady_state(rates, 1.5)


def test_no_ionization_leaves_ionized_level_empty():
    rates = PhotoCycleRates(k_pump=10, k_rad=72, k_isc0=5, k_isc1=25, k_s=5, k_ion=0, k_rec=0)
    state = steady_state(rates)
    assert state[Level.IONIZED] == 0.0
    assert state.current_rate == 0.0


def test_singular_system():
    # the singlet fills up with no way out
    rates = PhotoCycleRates(k_pump=10, k_rad=72, k_isc0=1, k_isc1=5, k_s=0, k_ion=0, k_rec=0)
    with pytest.raises(SingularSystemError):
        steady_state(rates)


def test_odmr_contrast_sign(registry):
    pl6 = registry["PL6"]
    # moving population out of ms=0 feeds the dark singlet
    assert readout_signal(pl6, 0.0, Channel.ODMR, 1.0) < 0
    reference = steady_state(pl6.photophysics.at_power(1.0)).ms0_polarization
    assert readout_signal(pl6, reference, Channel.ODMR, 1.0) == pytest.approx(0.0, abs=1e-12)
    # negative-sign species flip the response
    minor = registry["minor1277"]
    assert readout_signal(minor, 0.0, Channel.ODMR, 1.0) > 0


@pytest.mark.parametrize("channel", [Channel.ODMR, Channel.PDMR])
def test_readout_curve_matches_signal(registry, channel):
    species = registry["PL7"]
    curve = readout_curve(species, channel, 2.0)
    for f in (0.0, 0.1, 0.25, 0.5, 0.8, 1.0):
        assert curve(f) == pytest.approx(readout_signal(species, f, channel, 2.0), rel=1e-8, abs=1e-12)
    assert curve.full_contrast > 0


def test_pdmr_visibility(registry):
    assert pdmr_visible(registry["PL7"], PHOTON_ENERGY_905NM_EV)
    assert pdmr_visible(registry["PL3"], PHOTON_ENERGY_905NM_EV)
    assert not pdmr_visible(registry["PLX1"], PHOTON_ENERGY_905NM_EV)
    assert pdmr_visible(registry["PLX1"], 2.5)
    with pytest.raises(ParameterError):
        pdmr_visible(registry["PL7"], 0.0)


def test_invisible_species_has_no_pdmr_signal(registry):
    plx1 = registry["PLX1"]
    assert readout_signal(plx1, 0.0, Channel.PDMR, 1.0) == 0.0
    assert readout_curve(plx1, Channel.PDMR, 1.0).full_contrast == 0.0
    assert readout_signal(plx1, 0.0, Channel.ODMR, 1.0) != 0.0


def _slope(powers, values):
    return np.polyfit(np.log10(powers), np.log10(values), 1)[0]


def test_low_power_exponents():
    physics = PhotoPhysics()
    powers = np.geomspace(0.01, 0.1, 6)
    states = [steady_state(physics.at_power(p)) for p in powers]
    assert _slope(powers, [s.current_rate for s in states]) == pytest.approx(2.0, abs=0.1)
    assert _slope(powers, [s.pl_rate for s in states]) == pytest.approx(1.0, abs=0.1)


def test_current_grows_with_laser_power():
    physics = PhotoPhysics()
    currents = [steady_state(physics.at_power(p)).current_rate for p in np.geomspace(0.01, 100.0, 25)]
    assert np.all(np.diff(currents) >= 0)
    assert currents[-1] > currents[0]


def test_power_dependence(registry):
    powers = [10.0, 20.0, 50.0, 100.0]
    species = [registry[n] for n in ("PL5", "PL6", "PL7")]
    odmr = power_dependence(species, powers, Channel.ODMR, normalize_to="PL6")
    pdmr = power_dependence(species, powers, Channel.PDMR, normalize_to="PL6")

    assert odmr["PL6"][-1] == pytest.approx(1.0)
    assert _slope(powers, odmr["PL6"]) <= 0.1
    assert _slope(powers, pdmr["PL7"]) >= 0.8
    assert odmr["PL6"][-1] > odmr["PL5"][-1] > odmr["PL7"][-1]
    assert pdmr["PL7"][-1] > pdmr["PL5"][-1] > pdmr["PL6"][-1]


def test_power_dependence_unknown_normalization(registry):
    with pytest.raises(ParameterError):
        power_dependence([registry["PL6"]], [1.0, 2.0], Channel.ODMR, normalize_to="PL99")
