import numpy as np
import pytest

from sicspin_analysis.rabi import RabiComponent, RabiComponentFit, fit_rabi, fourier_seeds
from sicspin_core.exceptions import ParameterError

from .utils import damped_cosines


def test_two_components():
    trace = damped_cosines([1.0, 2.5], [1.0, 0.5])
    fit = fit_rabi(trace, 2)
    np.testing.assert_allclose(fit.frequencies, [1.0, 2.5], atol=1e-6)
    np.testing.assert_allclose([c.amplitude for c in fit.components], [1.0, 0.5], atol=1e-6)
    np.testing.assert_allclose([c.decay_rate for c in fit.components], [0.5, 0.5], atol=1e-6)
    for c in fit.components:
        assert np.cos(c.phase) == pytest.approx(1.0, abs=1e-6)
    assert not fit.degenerate
    assert fit.residual_rms < 1e-8


def test_background():
    trace = damped_cosines([1.5], [0.3], intercept=0.2, slope=-0.05, noise=0.01, seed=2)
    fit = fit_rabi(trace, 1)
    assert fit.intercept == pytest.approx(0.2, abs=0.01)
    assert fit.slope == pytest.approx(-0.05, abs=0.01)
    assert fit.components[0].frequency == pytest.approx(1.5, abs=0.01)
    assert fit.components[0].frequency_err > 0
    np.testing.assert_allclose(fit.model(trace.times), trace.signal, atol=0.05)


def test_explicit_seeds():
    trace = damped_cosines([0.8, 3.0], [1.0, 1.0])
    fit = fit_rabi(trace, 2, seeds=[0.75, 3.1])
    np.testing.assert_allclose(fit.frequencies, [0.8, 3.0], atol=1e-6)
    with pytest.raises(ParameterError):
        fit_rabi(trace, 2, seeds=[1.0])


def test_fourier_seeds():
    trace = damped_cosines([1.0, 2.5], [1.0, 0.5])
    seeds = fourier_seeds(trace, 2)
    assert seeds == sorted(seeds)
    np.testing.assert_allclose(seeds, [1.0, 2.5], atol=0.1)
    # asking for more peaks than the trace has still gives enough seeds
    assert len(fourier_seeds(damped_cosines([1.0], [1.0], decay_rate=0.0), 6)) == 6


def test_invalid_requests():
    trace = damped_cosines([1.0], [1.0], n_points=12)
    with pytest.raises(ParameterError):
        fit_rabi(trace, 0)
    with pytest.raises(ParameterError):
        fit_rabi(trace, 3)


def test_fit_validation():
    component = RabiComponent(1.0, 1.0, 0.5, 0.0)
    with pytest.raises(ParameterError):
        RabiComponentFit([], 0.0, 0.0, 0.0, 0.0, 10)
    with pytest.raises(ParameterError):
        RabiComponentFit([RabiComponent(2.0, 1.0, 0.5, 0.0), component], 0.0, 0.0, 0.0, 0.0, 10)
    fit = RabiComponentFit([component], 0.1, 0.0, 0.0, 0.0, 10, scores={1: 3.0, 2: np.inf})
    assert fit.n_params == 6
    d = fit.to_json_dict()
    assert d["scores"] == {"1": 3.0, "2": None}
    assert d["components"][0]["frequency_mhz"] == 1.0
    assert fit.component_curve(0, [0.0])[0] == pytest.approx(1.0)
    assert fit.model([0.0])[0] == pytest.approx(1.1)
