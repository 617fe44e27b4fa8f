"""
Experiment runners: pulsed spectra, Rabi sweeps, two-frequency spectra,
and laser/microwave power sweeps.

Each species starts in its laser-polarized state, every microwave pulse
swaps population between |0> and the addressed level with an
orientation-resolved transfer probability, and the readout converts the
final |0> population through the charge model. Noise is keyed by
(seed, stream, acquisition, sweep index) so sweeps can be evaluated in
any order with identical results.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from sicspin_charge.readout import (
    PHOTON_ENERGY_905NM_EV,
    ReadoutCurve,
    pdmr_visible,
    power_dependence,
    readout_curve,
)
from sicspin_charge.registry import DefectRegistry
from sicspin_charge.species import DefectSpecies
from sicspin_core.exceptions import ParameterError, SicSpinException
from sicspin_core.models import Channel, RabiTrace, ResponseMatrix, Spectrum, Transition
from sicspin_spin.dynamics import DEFAULT_DECAY_TIME_US, simulate_ensemble_rabi, transition_couplings

from .lockin import demodulate, demodulated_noise, square_wave_envelope
from .pulses import MwTone, PulseSequence, Segment, pulsed_odmr_sequence, two_frequency_sequence

logger = logging.getLogger(__name__)

DEFAULT_LINEWIDTH_MHZ = 2.0
# A tone addresses a line only within this many linewidths
LINE_CUTOFF_FWHM = 3.0


class NoMatchingTransitionError(SicSpinException):
    pass


@dataclass(frozen=True)
class AcquisitionSettings:
    channel: Channel = Channel.PDMR
    laser_power: float = 1.0
    linewidth_mhz: float = DEFAULT_LINEWIDTH_MHZ
    noise: float = 0.02
    seed: int = 0
    n_periods: int = 1
    photon_energy_ev: float = PHOTON_ENERGY_905NM_EV

    def __post_init__(self) -> None:
        object.__setattr__(self, "channel", Channel(self.channel))
        if not self.linewidth_mhz > 0:
            raise ParameterError(f"Linewidth must be > 0, got {self.linewidth_mhz}")
        if self.noise < 0:
            raise ParameterError(f"Noise must be >= 0, got {self.noise}")
        if self.seed < 0:
            raise ParameterError(f"Seed must be >= 0, got {self.seed}")
        if self.n_periods < 1:
            raise ParameterError(f"Need at least one modulation period, got {self.n_periods}")
        if self.laser_power < 0:
            raise ParameterError(f"Laser power must be >= 0, got {self.laser_power}")

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["channel"] = self.channel.value
        return d


def frequency_grid(f_start: float, f_stop: float, step: float) -> np.ndarray:
    if not f_start < f_stop:
        raise ParameterError(f"Sweep bounds must be ordered, got {f_start} >= {f_stop}")
    if not step > 0:
        raise ParameterError(f"Sweep step must be > 0, got {step}")
    n = int(np.floor((f_stop - f_start) / step + 1e-9)) + 1
    return f_start + step * np.arange(n)


def lorentzian(detuning, fwhm: float) -> np.ndarray:
    """Unit-height Lorentzian, zero beyond LINE_CUTOFF_FWHM linewidths."""
    detuning = np.asarray(detuning, dtype=float)
    half = 0.5 * fwhm
    shape = half**2 / (detuning**2 + half**2)
    return np.where(np.abs(detuning) <= LINE_CUTOFF_FWHM * fwhm, shape, 0.0)


@dataclass(frozen=True)
class SpeciesModel:
    species: DefectSpecies
    curve: ReadoutCurve

    @property
    def reference(self) -> float:
        return self.curve.reference

    def couplings(self, tone: MwTone, transition: Transition, nominal: bool = False) -> np.ndarray:
        field = tone.nominal_field if nominal else tone.field
        return transition_couplings(self.species, field, transition)

    def pi_duration(self, tone: MwTone, transition: Transition) -> float:
        return 0.5 / float(np.median(self.couplings(tone, transition, nominal=True)))


def species_models(registry: DefectRegistry, settings: AcquisitionSettings) -> List[SpeciesModel]:
    return [
        SpeciesModel(
            s,
            readout_curve(s, settings.channel, settings.laser_power, settings.photon_energy_ev),
        )
        for s in registry
    ]


def _noise_sigma(models: Sequence[SpeciesModel], noise: float) -> float:
    """Noise of one demodulated point, relative to the strongest complete-transfer signal."""
    contrast = max((m.curve.full_contrast for m in models), default=0.0)
    return noise * (contrast if contrast > 0 else 1.0)


def _apply_segment(
    model: SpeciesModel,
    segment: Segment,
    frequencies: np.ndarray,
    linewidth: float,
    p0: np.ndarray,
    levels: Dict[Transition, np.ndarray],
) -> None:
    tone = segment.tone
    assert tone is not None
    for transition, line_mhz in model.species.lines():
        shape = lorentzian(frequencies - line_mhz, linewidth)
        if not shape.any():
            continue
        duration = model.pi_duration(tone, transition) if segment.is_pi_calibrated else segment.duration_us
        flip = np.sin(np.pi * model.couplings(tone, transition) * duration) ** 2
        moved = flip[:, None] * shape[None, :] * (p0 - levels[transition])
        p0 -= moved
        levels[transition] += moved


def evaluate_sequence(
    models: Sequence[SpeciesModel],
    sequence: PulseSequence,
    frequencies: np.ndarray,
    sweep_tone: str,
    linewidth: float,
    disabled: Sequence[str] = (),
) -> np.ndarray:
    """Noiseless single-repetition signal with ``sweep_tone`` stepped over ``frequencies``."""
    frequencies = np.asarray(frequencies, dtype=float)
    total = np.zeros(len(frequencies))
    segments = sequence.mw_segments(disabled)
    for model in models:
        if model.curve.scale == 0:
            continue
        n_orientations = 1 if model.species.is_axial else 6
        shape = (n_orientations, len(frequencies))
        p0 = np.full(shape, model.reference)
        levels = {t: np.full(shape, 0.5 * (1.0 - model.reference)) for t in Transition}
        for segment in segments:
            tone = segment.tone
            assert tone is not None
            tone_frequencies = (
                frequencies if tone.label == sweep_tone else np.full(len(frequencies), tone.frequency_mhz)
            )
            _apply_segment(model, segment, tone_frequencies, linewidth, p0, levels)
        total += np.asarray(model.curve(p0)).mean(axis=0)
    return total


def _acquire(
    on: np.ndarray,
    off: np.ndarray,
    period: int,
    settings: AcquisitionSettings,
    sigma: float,
    stream: int,
    acquisition: int,
) -> np.ndarray:
    envelope = square_wave_envelope(period * settings.n_periods, period)
    samples = np.where(envelope[None, :], on[:, None], off[:, None])
    if sigma > 0:
        # per-repetition noise that demodulates to sigma
        per_repetition = sigma / demodulated_noise(1.0, envelope)
        for i in range(len(samples)):
            rng = np.random.default_rng([settings.seed, stream, acquisition, i])
            samples[i] += rng.normal(0.0, per_repetition, size=len(envelope))
    return demodulate(samples, envelope)


def _provenance_metadata(registry: DefectRegistry, settings: AcquisitionSettings) -> dict:
    return {
        "acquisition": settings.to_json_dict(),
        "species": registry.names,
    }


def run_pulsed_spectrum(
    registry: DefectRegistry,
    f_start: float,
    f_stop: float,
    step: float,
    settings: AcquisitionSettings = AcquisitionSettings(),
    mw_power: float = 1.0,
    period: int = 2,
    **tone_kwargs,
) -> Spectrum:
    """
    Lock-in detected pulsed spectrum.

    Every line within a few linewidths of the swept tone receives a
    pi pulse calibrated on its median orientation coupling at the
    reference microwave power.
    """
    grid = frequency_grid(f_start, f_stop, step)
    sequence = pulsed_odmr_sequence(grid[0], mw_power, period=period, **tone_kwargs)
    models = species_models(registry, settings)
    target = sequence.modulation.target

    on = evaluate_sequence(models, sequence, grid, target, settings.linewidth_mhz)
    off = evaluate_sequence(models, sequence, grid, target, settings.linewidth_mhz, disabled=(target,))
    sigma = _noise_sigma(models, settings.noise)
    signal = _acquire(on, off, period, settings, sigma, stream=0, acquisition=0)

    logger.info(
        f"Simulated {settings.channel.value} spectrum {grid[0]:.1f}-{grid[-1]:.1f} MHz "
        f"({len(grid)} points, {len(registry)} species)"
    )
    return Spectrum(
        grid,
        signal,
        settings.channel,
        metadata={
            **_provenance_metadata(registry, settings),
            "mw_power": mw_power,
            "noise_sigma": sigma,
            "sequence": sequence.describe(),
        },
    )


def matching_transitions(registry: DefectRegistry, frequency_mhz: float, tolerance_mhz: float):
    """(species, transition, line frequency) of every line within ``tolerance_mhz``."""
    return [
        (s, transition, line)
        for s in registry
        for transition, line in s.lines()
        if abs(line - frequency_mhz) <= tolerance_mhz
    ]


def run_rabi_sweep(
    registry: DefectRegistry,
    frequency_mhz: float,
    durations: Sequence[float],
    settings: AcquisitionSettings = AcquisitionSettings(),
    mw_power: float = 1.0,
    decay_time: Optional[float] = DEFAULT_DECAY_TIME_US,
    drift_slope: float = 0.0,
    drift_offset: float = 0.0,
    stream: int = 0,
    **tone_kwargs,
) -> RabiTrace:
    """
    Rabi oscillation at ``frequency_mhz``: the summed response of every
    line within one linewidth, in units of the channel signal.
    """
    matches = matching_transitions(registry, frequency_mhz, settings.linewidth_mhz)
    if not matches:
        raise NoMatchingTransitionError(
            f"No registry transition within {settings.linewidth_mhz} MHz of {frequency_mhz} MHz"
        )
    tone = MwTone("MW", frequency_mhz, mw_power, **tone_kwargs)
    models = {m.species.name: m for m in species_models(registry, settings)}
    times = np.asarray(durations, dtype=float)

    signal = np.zeros_like(times)
    components = []
    for species, transition, line in matches:
        model = models[species.name]
        ensemble = simulate_ensemble_rabi(
            species,
            tone.field,
            transition,
            times,
            detuning=frequency_mhz - line,
            decay_time=decay_time,
            noise=0.0,
            channel=settings.channel,
        )
        # pi-transfer response scaled by the transferred fraction
        full = float(model.curve(0.5 * (1.0 - model.reference)))
        signal += full * (1.0 - ensemble.signal)
        components.append(
            {
                "species": species.name,
                "transition": transition.value,
                "line_mhz": line,
                "couplings_mhz": ensemble.metadata["couplings_mhz"],
            }
        )

    signal += drift_offset + drift_slope * times
    sigma = _noise_sigma(list(models.values()), settings.noise)
    if sigma > 0:
        signal += np.random.default_rng([settings.seed, stream]).normal(0.0, sigma, size=len(times))

    logger.info(
        f"Simulated Rabi sweep at {frequency_mhz} MHz: "
        f"{', '.join(c['species'] + '(' + c['transition'] + ')' for c in components)}"
    )
    return RabiTrace(
        times,
        signal,
        settings.channel,
        metadata={
            **_provenance_metadata(registry, settings),
            "frequency_mhz": frequency_mhz,
            "mw_power": mw_power,
            "b1_mhz": tone.field.b1_mhz,
            "components": components,
            "noise_sigma": sigma,
        },
    )


def run_power_sweep(
    registry: DefectRegistry,
    frequency_mhz: float,
    durations: Sequence[float],
    mw_powers: Sequence[float],
    settings: AcquisitionSettings = AcquisitionSettings(),
    **kwargs,
) -> List[RabiTrace]:
    """One Rabi trace per microwave power, each with its own noise stream."""
    if len(mw_powers) < 2:
        raise ParameterError("A power sweep needs at least two powers")
    return [
        run_rabi_sweep(registry, frequency_mhz, durations, settings, mw_power=p, stream=i, **kwargs)
        for i, p in enumerate(mw_powers)
    ]


def run_two_frequency(
    registry: DefectRegistry,
    f1_mhz: float,
    frequencies: Sequence[float],
    settings: AcquisitionSettings = AcquisitionSettings(),
    mw_power: float = 1.0,
    period: int = 2,
    stream: int = 0,
    **tone_kwargs,
) -> Spectrum:
    """
    Two-frequency differential spectrum with MW1 fixed at ``f1_mhz``.

    The lock-in output (MW1 modulated, MW2 swept) is corrected by a second
    acquisition with MW2 disabled, which removes the MW1-only baseline.
    Lines of species not addressed by MW1 cancel exactly.
    """
    grid = np.asarray(frequencies, dtype=float)
    if grid.size == 0:
        raise ParameterError("Two-frequency sweep needs at least one MW2 frequency")
    sequence = two_frequency_sequence(f1_mhz, grid[0], mw_power, period=period, **tone_kwargs)
    models = species_models(registry, settings)
    width = settings.linewidth_mhz

    both = evaluate_sequence(models, sequence, grid, "MW2", width)
    mw2_only = evaluate_sequence(models, sequence, grid, "MW2", width, disabled=("MW1",))
    mw1_only = evaluate_sequence(models, sequence, grid, "MW2", width, disabled=("MW2",))
    dark = np.zeros(len(grid))

    sigma = _noise_sigma(models, settings.noise)
    differential = _acquire(both, mw2_only, period, settings, sigma, stream, acquisition=1)
    baseline = _acquire(mw1_only, dark, period, settings, sigma, stream, acquisition=2)

    return Spectrum(
        grid,
        differential - baseline,
        settings.channel,
        metadata={
            **_provenance_metadata(registry, settings),
            "f1_mhz": f1_mhz,
            "mw_power": mw_power,
            "noise_sigma": float(np.sqrt(2.0) * sigma),
            "sequence": sequence.describe(),
        },
    )


def candidate_lines(
    registry: DefectRegistry,
    channel: Channel,
    merge_mhz: float = DEFAULT_LINEWIDTH_MHZ,
    photon_energy_ev: float = PHOTON_ENERGY_905NM_EV,
) -> np.ndarray:
    """Resonance lines visible in ``channel``; lines closer than ``merge_mhz`` are merged."""
    lines = sorted(
        line
        for s in registry
        if s.weight > 0
        and (Channel(channel) is Channel.ODMR or pdmr_visible(s, photon_energy_ev))
        for _, line in s.lines()
    )
    clusters: List[List[float]] = []
    for line in lines:
        if clusters and line - clusters[-1][-1] <= merge_mhz:
            clusters[-1].append(line)
        else:
            clusters.append([line])
    for c in clusters:
        if len(c) > 1:
            logger.info(f"Unresolved lines {', '.join(f'{v:.1f}' for v in c)} MHz treated as one")
    return np.array([float(np.mean(c)) for c in clusters])


def scan_response_matrix(
    registry: DefectRegistry,
    lines: Sequence[float],
    settings: AcquisitionSettings = AcquisitionSettings(),
    mw_power: float = 1.0,
    **kwargs,
) -> ResponseMatrix:
    """Two-frequency response at every candidate line with MW1 at each line in turn."""
    grid = np.unique(np.asarray(lines, dtype=float))
    rows = []
    sigma = 0.0
    for i, f1 in enumerate(grid):
        spectrum = run_two_frequency(registry, f1, grid, settings, mw_power, stream=i, **kwargs)
        rows.append(spectrum.signal)
        sigma = spectrum.metadata["noise_sigma"]
    logger.info(f"Scanned {len(grid)}x{len(grid)} two-frequency response matrix")
    return ResponseMatrix(
        grid,
        np.array(rows),
        sigma,
        settings.channel,
        metadata={**_provenance_metadata(registry, settings), "mw_power": mw_power},
    )


def run_laser_sweep(
    registry: DefectRegistry,
    laser_powers: Sequence[float],
    channel: Channel,
    photon_energy_ev: float = PHOTON_ENERGY_905NM_EV,
    normalize_to: Optional[str] = "PL6",
) -> Dict[str, np.ndarray]:
    """Per-species resonance intensity against laser power."""
    if normalize_to is not None and normalize_to not in registry:
        logger.warning(f"{normalize_to} is not in the registry; intensities are not normalized")
        normalize_to = None
    return power_dependence(list(registry), laser_powers, channel, photon_energy_ev, normalize_to)
