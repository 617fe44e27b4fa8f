import logging
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from sicspin_core.config import load_config_toml
from sicspin_core.dirs import ensure_dir
from sicspin_core.exceptions import ConfigError
from sicspin_core.models import Channel
from sicspin_core.schema import get_json_schema
from sicspin_sequence import AcquisitionSettings

logger = logging.getLogger(__name__)

default_config = """
[experiment]
channel = "PDMR"
seed = 0
noise = 0.02
laser_power = 1.0
mw_power = 1.0
linewidth_mhz = 2.0
out_dir = "."

[field]
elevation_deg = 45.0
misalignment_deg = 0.0
b1_ref_mhz = 5.0

[spectrum]
f_start = 1100.0
f_stop = 1400.0
f_step = 0.25

[two_freq]
f1_list = [1134.6, 1332.6]

[rabi]
frequency_mhz = 1332.6
duration_us = 4.0
n_points = 401
n_max = 5
decay_time_us = 2.0

[sweep]
# 8 points over one decade, log-spaced
mw_powers = [1.0, 1.389495, 1.930698, 2.682696, 3.727594, 5.179475, 7.196857, 10.0]
laser_powers = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0]
""".strip()

KINDS = ("spectrum", "rabi", "two_freq", "power_sweep", "laser_sweep", "assign")

# config file section -> {key in section: ExperimentConfig field}
_SECTIONS: Dict[str, Dict[str, str]] = {
    "experiment": {
        "channel": "channel",
        "seed": "seed",
        "noise": "noise",
        "laser_power": "laser_power",
        "mw_power": "mw_power",
        "linewidth_mhz": "linewidth_mhz",
        "out_dir": "out_dir",
    },
    "field": {
        "elevation_deg": "field_elevation_deg",
        "misalignment_deg": "field_misalignment_deg",
        "b1_ref_mhz": "b1_ref_mhz",
    },
    "spectrum": {"f_start": "f_start", "f_stop": "f_stop", "f_step": "f_step"},
    "two_freq": {"f1_list": "f1_list"},
    "rabi": {
        "frequency_mhz": "frequency_mhz",
        "duration_us": "duration_us",
        "n_points": "n_points",
        "n_max": "n_max",
        "decay_time_us": "decay_time_us",
    },
    "sweep": {"mw_powers": "mw_powers", "laser_powers": "laser_powers"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Flattened, validated settings for one experiment run."""

    kind: str
    channel: Channel = Channel.PDMR
    seed: int = 0
    noise: float = 0.02
    laser_power: float = 1.0
    mw_power: float = 1.0
    linewidth_mhz: float = 2.0
    out_dir: str = "."
    field_elevation_deg: float = 45.0
    field_misalignment_deg: float = 0.0
    b1_ref_mhz: float = 5.0
    f_start: float = 1100.0
    f_stop: float = 1400.0
    f_step: float = 0.25
    f1_list: Tuple[float, ...] = (1134.6, 1332.6)
    frequency_mhz: float = 1332.6
    duration_us: float = 4.0
    n_points: int = 401
    n_max: int = 5
    decay_time_us: float = 2.0
    mw_powers: Tuple[float, ...] = (1.0, 10.0)
    laser_powers: Tuple[float, ...] = (0.1, 100.0)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"Unknown experiment kind '{self.kind}', expected one of {', '.join(KINDS)}")
        try:
            object.__setattr__(self, "channel", Channel(self.channel.upper()))
        except ValueError:
            raise ConfigError(f"Unknown channel '{self.channel}'") from None
        for name in ("f1_list", "mw_powers", "laser_powers"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

        if not 0 < self.f_start < self.f_stop:
            raise ConfigError(f"Sweep bounds must satisfy 0 < f_start < f_stop, got {self.f_start}, {self.f_stop}")
        if not 0 < self.f_step <= self.f_stop - self.f_start:
            raise ConfigError(f"Sweep step {self.f_step} MHz does not fit in {self.f_start}-{self.f_stop} MHz")
        if self.seed < 0:
            raise ConfigError(f"Seed must be >= 0, got {self.seed}")
        if self.noise < 0:
            raise ConfigError(f"Noise must be >= 0, got {self.noise}")
        if self.laser_power < 0 or self.mw_power < 0:
            raise ConfigError("Laser and microwave powers must be >= 0")
        if not self.linewidth_mhz > 0:
            raise ConfigError(f"Linewidth must be > 0, got {self.linewidth_mhz}")
        if self.n_points < 8 or not self.duration_us > 0:
            raise ConfigError("Rabi traces need duration_us > 0 and at least 8 points")
        if self.n_max < 1:
            raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
        for name in ("mw_powers", "laser_powers"):
            powers = getattr(self, name)
            if len(powers) < 2 or any(p <= 0 for p in powers):
                raise ConfigError(f"{name} needs at least two positive values")
            if list(powers) != sorted(set(powers)):
                raise ConfigError(f"{name} must be strictly increasing")

    @property
    def acquisition(self) -> AcquisitionSettings:
        return AcquisitionSettings(
            channel=self.channel,
            laser_power=self.laser_power,
            linewidth_mhz=self.linewidth_mhz,
            noise=self.noise,
            seed=self.seed,
        )

    @property
    def tone_kwargs(self) -> Dict[str, float]:
        return {
            "b1_ref": self.b1_ref_mhz,
            "elevation_deg": self.field_elevation_deg,
            "misalignment_deg": self.field_misalignment_deg,
        }

    def durations(self) -> np.ndarray:
        return np.linspace(0.0, self.duration_us, self.n_points)

    def ensure_out_dir(self) -> str:
        try:
            ensure_dir(self.out_dir)
        except OSError as e:
            raise ConfigError(f"Cannot create output directory {self.out_dir}: {e}") from e
        if not os.access(self.out_dir, os.W_OK):
            raise ConfigError(f"Output directory {self.out_dir} is not writable")
        return self.out_dir

    def to_json_dict(self) -> Dict[str, Any]:
        """Settings that determine the results; the output directory is left out."""
        d = asdict(self)
        del d["out_dir"]
        d["channel"] = self.channel.value
        for name in ("f1_list", "mw_powers", "laser_powers"):
            d[name] = list(d[name])
        return d


def load_experiment_config(kind: str, path: Optional[str] = None, **overrides: Any) -> ExperimentConfig:
    """
    Defaults, then the file at ``path``, then every override that is not None.
    """
    config = load_config_toml(default_config, path, get_json_schema("experiment"))
    values: Dict[str, Any] = {}
    for section, keys in _SECTIONS.items():
        for key, name in keys.items():
            if key in config.get(section, {}):
                values[name] = config[section][key]
    for name, value in overrides.items():
        if value is None:
            continue
        if name not in ExperimentConfig.__dataclass_fields__:
            raise ConfigError(f"Unknown setting '{name}'")
        values[name] = value
    experiment = ExperimentConfig(kind=kind, **values)
    logger.debug(f"Experiment config: {experiment.to_json_dict()}")
    return experiment
