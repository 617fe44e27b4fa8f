import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Union

import numpy as np

from sicspin_core.exceptions import ParameterError
from sicspin_core.models import Channel

from .rates import StationaryState, steady_state
from .species import DefectSpecies

logger = logging.getLogger(__name__)

# hc / 905 nm
PHOTON_ENERGY_905NM_EV = 1239.841984 / 905.0

ArrayLike = Union[float, np.ndarray]


def pdmr_visible(species: DefectSpecies, photon_energy_ev: float) -> bool:
    """True if the photon energy sustains continuous ionization and recovery."""
    if not photon_energy_ev > 0:
        raise ParameterError(f"Photon energy must be > 0, got {photon_energy_ev}")
    return photon_energy_ev >= species.thresholds.cycling_ev


def _channel_rate(state: StationaryState, channel: Channel) -> float:
    return state.pl_rate if Channel(channel) is Channel.ODMR else state.current_rate


@dataclass(frozen=True)
class ReadoutCurve:
    """
    Differential readout of one species as a function of the ground-state
    |0> fraction f, at fixed laser power and channel.

    The conditioned stationary state is a rank-one update in f, so each
    observable rate is (a + b f) / (1 + c f). Three solves pin it down.
    """

    a: float
    b: float
    c: float
    reference: float
    scale: float

    def rate(self, ms0_fraction: ArrayLike) -> ArrayLike:
        f = np.asarray(ms0_fraction, dtype=float)
        return (self.a + self.b * f) / (1.0 + self.c * f)

    def __call__(self, ms0_fraction: ArrayLike) -> ArrayLike:
        if self.scale == 0:
            return np.zeros_like(np.asarray(ms0_fraction, dtype=float))
        return self.scale * (self.rate(ms0_fraction) - self.rate(self.reference))

    @property
    def full_contrast(self) -> float:
        """|signal| after a complete swap of |0> with one ms=+-1 level."""
        return float(abs(self((1.0 - self.reference) / 2.0)))


def readout_curve(
    species: DefectSpecies,
    channel: Channel,
    laser_power: float,
    photon_energy_ev: float = PHOTON_ENERGY_905NM_EV,
) -> ReadoutCurve:
    rates = species.photophysics.at_power(laser_power)
    reference = steady_state(rates).ms0_polarization
    if Channel(channel) is Channel.PDMR and not pdmr_visible(species, photon_energy_ev):
        logger.debug(f"{species.name} is not PDMR-visible at {photon_energy_ev:.3f} eV")
        return ReadoutCurve(0.0, 0.0, 0.0, reference, 0.0)

    r0, r_half, r1 = (_channel_rate(steady_state(rates, f), channel) for f in (0.0, 0.5, 1.0))
    denominator = r_half - r1
    c = (r0 + r1 - 2.0 * r_half) / denominator if denominator != 0 else 0.0
    b = r1 * (1.0 + c) - r0
    return ReadoutCurve(r0, b, c, reference, species.weight * species.sign)


def readout_signal(
    species: DefectSpecies,
    ms0_fraction: float,
    channel: Channel,
    laser_power: float,
    photon_energy_ev: float = PHOTON_ENERGY_905NM_EV,
    reference_fraction: Optional[float] = None,
) -> float:
    """
    Differential response weight * sign * [rate(f) - rate(reference)].

    The reference defaults to the laser-polarized state with the microwave
    off, matching on/off modulation of the drive.
    """
    if Channel(channel) is Channel.PDMR and not pdmr_visible(species, photon_energy_ev):
        return 0.0
    rates = species.photophysics.at_power(laser_power)
    if reference_fraction is None:
        reference_fraction = steady_state(rates).ms0_polarization
    value = _channel_rate(steady_state(rates, ms0_fraction), channel) - _channel_rate(
        steady_state(rates, reference_fraction), channel
    )
    return species.weight * species.sign * value


def power_dependence(
    species: Sequence[DefectSpecies],
    laser_powers: Sequence[float],
    channel: Channel,
    photon_energy_ev: float = PHOTON_ENERGY_905NM_EV,
    normalize_to: Optional[str] = None,
) -> Dict[str, np.ndarray]:
    """
    Full-contrast resonance intensity of each species against laser power.

    With ``normalize_to`` every curve is divided by that species' intensity
    at the highest power.
    """
    powers = np.asarray(laser_powers, dtype=float)
    intensities = {
        s.name: np.array(
            [readout_curve(s, channel, p, photon_energy_ev).full_contrast for p in powers]
        )
        for s in species
    }
    if normalize_to is not None:
        if normalize_to not in intensities:
            raise ParameterError(f"Unknown normalization species {normalize_to!r}")
        norm = intensities[normalize_to][int(np.argmax(powers))]
        if norm > 0:
            intensities = {name: values / norm for name, values in intensities.items()}
        else:
            logger.warning(f"{normalize_to} has no {Channel(channel).value} signal; not normalizing")
    return intensities
