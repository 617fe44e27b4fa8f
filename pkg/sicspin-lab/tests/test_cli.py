import json

import numpy as np
import pandas as pd
import pytest
from sicspin_analysis import AmbiguousPairingError, FitConvergenceError
from sicspin_core.exceptions import ParameterError

from sicspin_lab.exceptions import EXIT_AMBIGUOUS, EXIT_FIT, EXIT_USAGE, exit_code_for
from sicspin_lab.main import run


def _json(path):
    with open(path) as f:
        return json.load(f)


def _spectrum(out_dir, *args):
    code = run(["spectrum", "--out-dir", str(out_dir), "--f-start", "1120", "--f-stop", "1390", *args])
    assert code == 0
    return pd.read_csv(out_dir / "spectrum.csv")


def test_spectrum_pdmr_hides_plx1(out_dir):
    df = _spectrum(out_dir, "--fit")
    assert list(df.columns) == ["freq_mhz", "signal"]
    report = _json(out_dir / "spectrum_fit.json")
    centers = [p["center_mhz"] for p in report["fit"]["peaks"]]
    for expected in (1134.55, 1291.8, 1332.6, 1342.1, 1350.9, 1374.9):
        assert min(abs(c - expected) for c in centers) < 0.5, expected
    assert all(abs(c - 1321.9) > 2.0 for c in centers)
    assert report["provenance"]["PL7"]["provenance"] == "assumed"
    assert (out_dir / "spectrum.svg").exists()


def test_spectrum_odmr_shows_plx1(out_dir):
    _spectrum(out_dir, "--fit", "--channel", "odmr")
    centers = [p["center_mhz"] for p in _json(out_dir / "spectrum_fit.json")["fit"]["peaks"]]
    assert min(abs(c - 1321.9) for c in centers) < 0.5


def test_spectrum_without_mw_is_flat(out_dir):
    df = _spectrum(out_dir, "--mw-power", "0", "--noise", "0")
    assert np.all(df["signal"].to_numpy() == 0.0)
    assert not (out_dir / "spectrum_fit.json").exists()


def test_reruns_are_byte_identical(tmp_path):
    outputs = []
    for name in ("first", "second"):
        d = tmp_path / name
        args = ["rabi", "--out-dir", str(d), "--fit", "--n-max", "3", "--n-points", "201", "--seed", "5"]
        assert run(args) == 0
        outputs.append({f: (d / f).read_bytes() for f in ("rabi.csv", "rabi_fit.json", "rabi.svg")})
    assert outputs[0] == outputs[1]


def test_seed_changes_noise(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["rabi", "--out-dir", str(a), "--n-points", "101", "--seed", "1"]) == 0
    assert run(["rabi", "--out-dir", str(b), "--n-points", "101", "--seed", "2"]) == 0
    assert (a / "rabi.csv").read_bytes() != (b / "rabi.csv").read_bytes()


def test_rabi_fit_pl7(out_dir):
    assert run(["rabi", "--out-dir", str(out_dir), "--fit", "--frequency", "1332.6"]) == 0
    report = _json(out_dir / "rabi_fit.json")
    assert report["selected_n"] == 3
    assert [c["species"] for c in report["simulated_components"]] == ["PL7"]
    assert set(report["scores"]) == {"1", "2", "3", "4", "5"}


def test_rabi_axial_single_component(out_dir):
    assert run(["rabi", "--out-dir", str(out_dir), "--fit", "--frequency", "1350.9", "--n-max", "3"]) == 0
    assert _json(out_dir / "rabi_fit.json")["selected_n"] == 1


def test_rabi_no_transition(out_dir, capsys):
    assert run(["rabi", "--out-dir", str(out_dir), "--frequency", "1200"]) == EXIT_USAGE
    assert "1200" in capsys.readouterr().err


def test_fit_rabi_roundtrip(out_dir):
    assert run(["rabi", "--out-dir", str(out_dir), "--frequency", "1332.6"]) == 0
    code = run(["fit-rabi", str(out_dir / "rabi.csv"), "--out-dir", str(out_dir)])
    assert code == 0
    report = _json(out_dir / "rabi_fit.json")
    assert report["input"] == "rabi.csv"
    assert report["selected_n"] == 3
    assert (out_dir / "rabi_fit.svg").exists()


def test_fit_rabi_malformed(tmp_path, out_dir, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("time_us,signal\n0,1\n0.1,x\n")
    assert run(["fit-rabi", str(path), "--out-dir", str(out_dir)]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "row 3" in err
    assert "column 'signal'" in err


POWERS = ",".join(f"{p:.6g}" for p in np.geomspace(1.0, 10.0, 8))


@pytest.mark.parametrize(
    "frequency, n, verdict",
    [
        ("1332.6", 3, "x_driven"),  # PL7 upper line
        ("1342.1", 2, "y_driven"),  # PL5 lower line
    ],
)
def test_rabi_power_sqrt_law(out_dir, frequency, n, verdict):
    code = run(["rabi-power", "--out-dir", str(out_dir), "--frequency", frequency, "--mw-powers", POWERS])
    assert code == 0
    report = _json(out_dir / "rabi_power.json")
    assert report["selected_n"] == n
    for e in report["exponents"]:
        assert abs(e["exponent"] - 0.5) <= 0.02
    assert report["classification"]["verdict"] == verdict
    assert (out_dir / "rabi_power_07.csv").exists()


def test_laser_power_saturation(out_dir):
    assert run(["laser-power", "--out-dir", str(out_dir), "--channel", "ODMR"]) == 0
    odmr = _json(out_dir / "laser_power.json")
    assert run(["laser-power", "--out-dir", str(out_dir), "--channel", "PDMR"]) == 0
    pdmr = _json(out_dir / "laser_power.json")

    assert odmr["top_decade_exponents"]["PL6"] <= 0.1
    assert pdmr["top_decade_exponents"]["PL7"] >= 0.8
    rank = odmr["ranking_at_max_power"]
    assert rank.index("PL6") < rank.index("PL5") < rank.index("PL7")
    rank = pdmr["ranking_at_max_power"]
    assert rank.index("PL7") < rank.index("PL5") < rank.index("PL6")
    assert "PLX1" not in rank
    header = (out_dir / "laser_power.csv").read_text().splitlines()[0]
    assert header.startswith("laser_power,PL3,")


def test_two_freq_per_f1(out_dir):
    code = run(
        ["two-freq", "--out-dir", str(out_dir), "--f1", "1332.6", "--f1", "1374.9",
         "--f-start", "1120", "--f-stop", "1390", "--noise", "0"]
    )
    assert code == 0
    pl7 = pd.read_csv(out_dir / "two_freq_1332p6.csv")
    signal = pl7["signal"].to_numpy()
    freqs = pl7["freq_mhz"].to_numpy()
    # the strongest response sits on MW1 itself, the partner is the strongest one elsewhere
    low = freqs < 1300
    peak = freqs[low][np.argmax(np.abs(signal[low]))]
    assert abs(peak - 1134.6) < 0.5
    for other in (1291.8, 1342.1, 1350.9, 1374.9):
        assert np.all(np.abs(signal[np.abs(freqs - other) < 1.0]) < 1e-12)
    summary = _json(out_dir / "two_freq.json")
    assert [s["f1_mhz"] for s in summary["spectra"]] == [1332.6, 1374.9]
    assert (out_dir / "two_freq_1374p9.svg").exists()


def test_assign_default_registry(out_dir, capsys):
    assert run(["assign", "--out-dir", str(out_dir)]) == 0
    report = _json(out_dir / "assignment.json")
    pairs = {p["label"]: p for p in report["pairs"]}
    assert set(pairs) == {"PL5", "PL7"}
    assert pairs["PL7"]["d_mhz"] == pytest.approx(1233.6, abs=0.1)
    assert pairs["PL7"]["e_mhz"] == pytest.approx(99.0, abs=0.1)
    assert pairs["PL5"]["d_mhz"] == pytest.approx(1358.5, abs=0.1)
    assert pairs["PL5"]["e_mhz"] == pytest.approx(16.4, abs=0.1)
    assert any(abs(f - 1350.9) < 0.1 for f in report["unpaired_mhz"])
    assert "PL7" in report["provenance"]

    matrix = _json(out_dir / "response_matrix.json")
    values = np.array(matrix["values"])
    assert values.shape == (len(matrix["lines_mhz"]),) * 2
    assert "PL7" in capsys.readouterr().out


def test_assign_without_pl7(out_dir):
    assert run(["assign", "--out-dir", str(out_dir), "--exclude", "PL7", "--no-refine"]) == 0
    report = _json(out_dir / "assignment.json")
    assert [p["label"] for p in report["pairs"]] == ["PL5"]
    assert any(abs(f - 1134.5) < 0.1 for f in report["unpaired_mhz"])


def test_assign_ambiguous(out_dir, conflicting_registry):
    code = run(["assign", "--out-dir", str(out_dir), "--registry", conflicting_registry, "--noise", "0"])
    assert code == EXIT_AMBIGUOUS
    conflicts = _json(out_dir / "conflicts.json")["conflicts"]
    assert [c["line_mhz"] for c in conflicts] == [1350.0]
    assert conflicts[0]["partners_mhz"] == [1250.0, 1450.0]
    assert not (out_dir / "assignment.json").exists()


def test_unknown_config_key(tmp_path, out_dir, capsys):
    path = tmp_path / "bad.toml"
    path.write_text("[experiment]\nnoize = 0.1\n")
    assert run(["spectrum", "--config", str(path), "--out-dir", str(out_dir)]) == EXIT_USAGE
    assert "noize" in capsys.readouterr().err


def test_bad_registry(tmp_path, out_dir, capsys):
    path = tmp_path / "registry.json"
    path.write_text(json.dumps([{"name": "X", "d_mhz": 1300.0}]))
    assert run(["spectrum", "--registry", str(path), "--out-dir", str(out_dir)]) == EXIT_USAGE
    assert "row 0" in capsys.readouterr().err


def test_exclude_unknown(out_dir):
    assert run(["spectrum", "--exclude", "PL99", "--out-dir", str(out_dir)]) == EXIT_USAGE


def test_weight_override(tmp_path):
    def pl6_signal(*args):
        df = _spectrum(tmp_path / "-".join(args or ("default",)), "--noise", "0", *args)
        i = np.argmin(np.abs(df["freq_mhz"].to_numpy() - 1350.9))
        return df["signal"].to_numpy()[i]

    base = pl6_signal()
    assert pl6_signal("--weight", "PL6=2") == pytest.approx(2 * base, rel=0.05)
    assert abs(pl6_signal("--weight", "PL6=0")) < 0.05 * abs(base)


@pytest.mark.parametrize("weight", ["PL6", "PL6=heavy", "PL99=1", "PL6=-1"])
def test_weight_invalid(out_dir, weight):
    assert run(["spectrum", "--weight", weight, "--out-dir", str(out_dir)]) == EXIT_USAGE


def test_usage_error():
    assert run(["spectrum", "--channel", "ESR"]) == EXIT_USAGE
    assert run(["no-such-command"]) == EXIT_USAGE


def test_help():
    assert run(["--help"]) == 0


def test_registry_export_roundtrip(tmp_path, capsys):
    exported = tmp_path / "registry.json"
    assert run(["registry", "--export", str(exported)]) == 0
    out = capsys.readouterr().out
    assert "PL7" in out and "assumed" in out
    assert run(["registry", "--registry", str(exported)]) == 0
    assert capsys.readouterr().out.splitlines()[:7] == out.splitlines()[:7]


def test_directories(capsys):
    assert run(["directories"]) == 0
    assert "logs" in capsys.readouterr().out


def test_exit_codes():
    assert exit_code_for(FitConvergenceError("no", best_params=None, residual_rms=1.0)) == EXIT_FIT
    assert exit_code_for(AmbiguousPairingError("two partners", [])) == EXIT_AMBIGUOUS
    assert exit_code_for(ParameterError("bad")) == EXIT_USAGE
