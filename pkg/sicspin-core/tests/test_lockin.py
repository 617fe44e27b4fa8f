import numpy as np
import pytest

from sicspin_core.exceptions import ParameterError
from sicspin_sequence.lockin import demodulate, demodulated_noise, square_wave_envelope


def test_envelope():
    envelope = square_wave_envelope(8, 4)
    assert envelope.tolist() == [True, True, False, False] * 2


@pytest.mark.parametrize("n, period", [(8, 3), (8, 0), (6, 4), (2, 4)])
def test_envelope_invalid(n, period):
    with pytest.raises(ParameterError):
        square_wave_envelope(n, period)


def test_demodulate():
    envelope = square_wave_envelope(4, 2)
    samples = np.array([[3.0, 1.0, 3.0, 1.0], [0.0, 0.0, 0.0, 0.0]])
    np.testing.assert_array_equal(demodulate(samples, envelope), [2.0, 0.0])


def test_demodulate_invalid():
    with pytest.raises(ParameterError):
        demodulate(np.zeros(3), square_wave_envelope(4, 2))
    with pytest.raises(ParameterError):
        demodulate(np.zeros(2), np.array([True, True]))


def test_demodulated_noise():
    envelope = square_wave_envelope(8, 2)
    assert demodulated_noise(1.0, envelope) == pytest.approx(np.sqrt(0.5))
    rng = np.random.default_rng(0)
    samples = rng.normal(0.0, 1.0, size=(20000, len(envelope)))
    assert np.std(demodulate(samples, envelope)) == pytest.approx(np.sqrt(0.5), rel=0.03)
