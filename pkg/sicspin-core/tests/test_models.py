import numpy as np
import pytest

from sicspin_core.exceptions import ParameterError
from sicspin_core.models import Channel, RabiTrace, ResponseMatrix, Spectrum


def test_spectrum():
    spectrum = Spectrum([1.0, 1.5, 2.0], [0.0, 1.0, 0.0], "ODMR")
    assert spectrum.channel is Channel.ODMR
    assert spectrum.step == 0.5
    assert len(spectrum) == 3
    d = spectrum.to_json_dict()
    assert d["freq_mhz"] == [1.0, 1.5, 2.0]
    assert d["channel"] == "ODMR"


def test_spectrum_invalid():
    with pytest.raises(ParameterError):
        Spectrum([1.0, 2.0], [0.0], Channel.PDMR)
    with pytest.raises(ParameterError):
        Spectrum([2.0, 1.0], [0.0, 0.0], Channel.PDMR)
    with pytest.raises(ParameterError):
        Spectrum([[1.0, 2.0]], [[0.0, 0.0]], Channel.PDMR)
    with pytest.raises(ValueError):
        Spectrum([1.0], [0.0], "ESR")


def test_rabi_trace():
    trace = RabiTrace(np.linspace(0.0, 1.0, 11), np.zeros(11), Channel.PDMR)
    assert trace.dt == pytest.approx(0.1)
    assert trace.duration == 1.0


@pytest.mark.parametrize(
    "times, signal",
    [
        ([0.0], [1.0]),
        ([0.0, 1.0], [1.0]),
        ([0.0, 0.1, 0.05], [1.0, 1.0, 1.0]),
        ([0.0, 0.1, 0.3], [1.0, 1.0, 1.0]),
        ([0.0, 0.1, 0.2], [1.0, np.nan, 1.0]),
    ],
)
def test_rabi_trace_invalid(times, signal):
    with pytest.raises(ParameterError):
        RabiTrace(times, signal, Channel.PDMR)


def test_response_matrix():
    matrix = ResponseMatrix([1.0, 2.0], np.eye(2), 0.1, "PDMR")
    assert len(matrix) == 2
    assert matrix.to_json_dict()["values"] == [[1.0, 0.0], [0.0, 1.0]]
    with pytest.raises(ParameterError):
        ResponseMatrix([1.0, 2.0], np.eye(3), 0.1, Channel.PDMR)
    with pytest.raises(ParameterError):
        ResponseMatrix([1.0, 2.0], np.eye(2), -0.1, Channel.PDMR)
