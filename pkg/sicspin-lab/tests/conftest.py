import json
import logging

import pytest

logging.basicConfig(level=logging.WARN)


@pytest.fixture()
def out_dir(tmp_path):
    d = tmp_path / "out"
    d.mkdir()
    return d


@pytest.fixture()
def conflicting_registry(tmp_path):
    """Two basal species sharing their middle line at 1350 MHz."""
    thresholds = {"zpl": 1.19, "ionization": 0.9, "recovery": 1.3}
    species = [
        {"name": "A", "d_mhz": 1300.0, "e_mhz": 50.0, "orientation_class": "basal", "thresholds_ev": thresholds, "provenance": "assumed"},
        {"name": "B", "d_mhz": 1400.0, "e_mhz": 50.0, "orientation_class": "basal", "thresholds_ev": thresholds, "provenance": "assumed"},
    ]
    path = tmp_path / "conflicting.json"
    path.write_text(json.dumps(species))
    return str(path)
