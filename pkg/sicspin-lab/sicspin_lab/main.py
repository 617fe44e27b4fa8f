"""
``sicspin``: simulated zero-field ODMR/PDMR experiments on spin-1 defects
in 4H-SiC, and the analyses that go with them.

Every simulating subcommand reads the built-in defaults, then ``--config``,
then its flags, and writes CSV, JSON and SVG files into ``--out-dir``.
"""

import logging
import os
from typing import Any, List, Optional, Tuple

import click
import numpy as np

from sicspin_analysis import (
    AmbiguousPairingError,
    assign_transitions,
    classify_transition,
    fit_peaks,
    fit_power_law,
    fit_rabi,
    select_components,
)
from sicspin_charge.registry import DefectRegistry, load_registry
from sicspin_core.dirs import get_log_dir
from sicspin_core.exceptions import ConfigError, SicSpinException
from sicspin_core.log import setup_logging
from sicspin_sequence import (
    frequency_grid,
    run_laser_sweep,
    run_power_sweep,
    run_pulsed_spectrum,
    run_rabi_sweep,
    run_two_frequency,
)

from . import io, plots
from .__about__ import __version__
from .config import ExperimentConfig, load_experiment_config
from .exceptions import EXIT_OK, EXIT_USAGE, exit_code_for

logger = logging.getLogger(__name__)


def _float_list(ctx, param, value: Optional[str]) -> Optional[Tuple[float, ...]]:
    if value is None:
        return None
    try:
        return tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'") from None


def experiment_options(f):
    """Options shared by every subcommand that runs an experiment."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="TOML file merged over the defaults"),
        click.option("--registry", "registry_path", type=click.Path(dir_okay=False), help="Defect registry JSON (default: bundled)"),
        click.option("--exclude", multiple=True, help="Drop a species from the registry (repeatable)"),
        click.option("--weight", "weights", multiple=True, metavar="NAME=W", help="Override a species weight (repeatable)"),
        click.option("--channel", type=click.Choice(["ODMR", "PDMR"], case_sensitive=False)),
        click.option("--seed", type=click.IntRange(min=0)),
        click.option("--noise", type=float, help="Noise sigma relative to the strongest line's full contrast"),
        click.option("--laser-power", type=float),
        click.option("--mw-power", type=float),
        click.option("--linewidth", "linewidth_mhz", type=float, help="Resonance FWHM in MHz"),
        click.option("--out-dir", type=click.Path(file_okay=False)),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def rabi_options(f):
    options = [
        click.option("--frequency", "frequency_mhz", type=float, help="Microwave frequency in MHz"),
        click.option("--duration", "duration_us", type=float, help="Longest pulse in us"),
        click.option("--n-points", type=int),
        click.option("--n-max", type=int, help="Largest component count tried"),
        click.option("--decay-time", "decay_time_us", type=float),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def sweep_options(f):
    options = [
        click.option("--f-start", type=float),
        click.option("--f-stop", type=float),
        click.option("--f-step", type=float),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _parse_weights(weights: Tuple[str, ...]) -> List[Tuple[str, float]]:
    parsed = []
    for item in weights:
        name, sep, value = item.partition("=")
        try:
            if not sep:
                raise ValueError
            parsed.append((name.strip(), float(value)))
        except ValueError:
            raise ConfigError(f"Expected NAME=WEIGHT, got '{item}'") from None
    return parsed


def _prepare(
    kind: str,
    config_path: Optional[str],
    registry_path: Optional[str],
    exclude: Tuple[str, ...],
    weights: Tuple[str, ...] = (),
    **overrides: Any,
) -> Tuple[ExperimentConfig, DefectRegistry]:
    experiment = load_experiment_config(kind, config_path, **overrides)
    registry = load_registry(registry_path)
    unknown = [name for name in exclude if name not in registry]
    if unknown:
        raise ConfigError(f"Cannot exclude unknown species: {', '.join(unknown)}")
    for name, weight in _parse_weights(weights):
        if name not in registry:
            raise ConfigError(f"Cannot reweight unknown species: {name}")
        registry = registry.replace(registry[name].with_weight(weight))
        logger.info(f"Set weight of {name} to {weight:g}")
    if exclude:
        registry = registry.without(*exclude)
        logger.info(f"Excluded {', '.join(exclude)} from the registry")
    experiment.ensure_out_dir()
    return experiment, registry


def _out(experiment: ExperimentConfig, name: str) -> str:
    path = os.path.join(experiment.out_dir, name)
    click.echo(f"Wrote {path}")
    return path


def _tag(frequency_mhz: float) -> str:
    return f"{frequency_mhz:g}".replace(".", "p")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
@click.option("--log-file", is_flag=True, help="Also log to a rotating file in the log directory")
@click.version_option(__version__, prog_name="sicspin")
def main(verbose: bool = False, log_file: bool = False) -> None:
    """Simulated zero-field ODMR/PDMR experiments on spin-1 defects in 4H-SiC."""
    setup_logging("sicspin", verbose=verbose, log_stderr=True, log_file=log_file)


@main.command()
@experiment_options
@sweep_options
@click.option("--fit", is_flag=True, help="Fit Lorentzians and write a peak report")
def spectrum(fit: bool, **kwargs) -> None:
    """Lock-in detected pulsed spectrum."""
    experiment, registry = _prepare("spectrum", **kwargs)
    result = run_pulsed_spectrum(
        registry,
        experiment.f_start,
        experiment.f_stop,
        experiment.f_step,
        experiment.acquisition,
        mw_power=experiment.mw_power,
        **experiment.tone_kwargs,
    )
    io.write_spectrum_csv(_out(experiment, "spectrum.csv"), result)
    peaks = None
    if fit:
        peaks = fit_peaks(result)
        io.write_json(
            _out(experiment, "spectrum_fit.json"),
            {"config": experiment.to_json_dict(), "fit": peaks.to_json_dict()},
            registry,
        )
    plots.plot_spectrum(_out(experiment, "spectrum.svg"), result, peaks)


@main.command()
@experiment_options
@rabi_options
@click.option("--fit", is_flag=True, help="Decompose the trace into damped cosines")
def rabi(fit: bool, **kwargs) -> None:
    """Rabi oscillation at a fixed microwave frequency."""
    experiment, registry = _prepare("rabi", **kwargs)
    trace = run_rabi_sweep(
        registry,
        experiment.frequency_mhz,
        experiment.durations(),
        experiment.acquisition,
        mw_power=experiment.mw_power,
        decay_time=experiment.decay_time_us,
        **experiment.tone_kwargs,
    )
    io.write_trace_csv(_out(experiment, "rabi.csv"), trace)
    best = None
    if fit:
        selection = select_components(trace, experiment.n_max)
        best = selection.best
        io.write_json(
            _out(experiment, "rabi_fit.json"),
            {
                "config": experiment.to_json_dict(),
                "simulated_components": trace.metadata["components"],
                **selection.to_json_dict(),
            },
            registry,
        )
    plots.plot_rabi(_out(experiment, "rabi.svg"), trace, best, title=f"Rabi at {experiment.frequency_mhz:g} MHz")


@main.command("fit-rabi")
@click.argument("input_csv", type=click.Path(dir_okay=False))
@experiment_options
@click.option("--n-max", type=int, help="Largest component count tried")
def fit_rabi_cmd(input_csv: str, **kwargs) -> None:
    """Decompose a measured or simulated Rabi trace (CSV: time_us,signal)."""
    experiment, registry = _prepare("rabi", **kwargs)
    trace = io.read_trace_csv(input_csv, experiment.channel)
    selection = select_components(trace, experiment.n_max)
    stem = os.path.splitext(os.path.basename(input_csv))[0]
    io.write_json(
        _out(experiment, f"{stem}_fit.json"),
        {"config": experiment.to_json_dict(), "input": os.path.basename(input_csv), **selection.to_json_dict()},
        registry,
    )
    plots.plot_rabi(_out(experiment, f"{stem}_fit.svg"), trace, selection.best, title=stem)


@main.command("rabi-power")
@experiment_options
@rabi_options
@click.option("--mw-powers", callback=_float_list, help="Comma-separated microwave powers")
def rabi_power(**kwargs) -> None:
    """
    Rabi traces over a microwave power sweep, the power law of every
    component, and the x/y-driven classification of the transition.
    """
    experiment, registry = _prepare("power_sweep", **kwargs)
    powers = list(experiment.mw_powers)
    traces = run_power_sweep(
        registry,
        experiment.frequency_mhz,
        experiment.durations(),
        powers,
        experiment.acquisition,
        decay_time=experiment.decay_time_us,
        **experiment.tone_kwargs,
    )
    for i, trace in enumerate(traces):
        io.write_trace_csv(_out(experiment, f"rabi_power_{i:02d}.csv"), trace)

    # N is chosen on the strongest drive and reused, seeded along sqrt(P)
    selection = select_components(traces[-1], experiment.n_max)
    top = selection.best
    fits = [
        fit_rabi(trace, top.n_components, seeds=list(top.frequencies * np.sqrt(p / powers[-1])))
        for p, trace in zip(powers[:-1], traces[:-1])
    ] + [top]
    frequencies = np.array([f.frequencies for f in fits])
    exponents = [fit_power_law(powers, frequencies[:, k]) for k in range(top.n_components)]
    classification = classify_transition(powers, fits) if len(powers) >= 3 else None

    io.write_json(
        _out(experiment, "rabi_power.json"),
        {
            "config": experiment.to_json_dict(),
            "selected_n": selection.best_n,
            "scores": selection.to_json_dict()["scores"],
            "rejected": selection.to_json_dict()["rejected"],
            "mw_powers": powers,
            "frequencies_mhz": frequencies,
            "exponents": [e.to_json_dict() for e in exponents],
            "classification": classification.to_json_dict() if classification else None,
            "fits": [f.to_json_dict() for f in fits],
        },
        registry,
    )
    plots.plot_power_law(
        _out(experiment, "rabi_power.svg"),
        powers,
        frequencies,
        [e.prefactor for e in exponents],
        [e.exponent for e in exponents],
    )


@main.command("laser-power")
@experiment_options
@click.option("--laser-powers", callback=_float_list, help="Comma-separated laser powers")
@click.option("--normalize-to", default="PL6", show_default=True, help="Species whose highest-power intensity is 1")
def laser_power(normalize_to: str, **kwargs) -> None:
    """Per-species resonance intensity against laser power."""
    experiment, registry = _prepare("laser_sweep", **kwargs)
    powers = np.array(experiment.laser_powers)
    intensities = run_laser_sweep(
        registry, powers, experiment.channel, experiment.acquisition.photon_energy_ev, normalize_to
    )
    io.write_table_csv(_out(experiment, "laser_power.csv"), {"laser_power": powers, **intensities})

    top = powers >= powers[-1] / 10.0
    slopes = {}
    for name, values in intensities.items():
        magnitude = np.abs(values[top])
        slopes[name] = (
            fit_power_law(powers[top], magnitude).exponent if top.sum() >= 2 and np.all(magnitude > 0) else None
        )
    ranking = sorted(
        (name for name in intensities if abs(intensities[name][-1]) > 0),
        key=lambda name: -abs(intensities[name][-1]),
    )
    io.write_json(
        _out(experiment, "laser_power.json"),
        {
            "config": experiment.to_json_dict(),
            "channel": experiment.channel.value,
            "normalized_to": normalize_to if normalize_to in registry else None,
            "laser_powers": powers,
            "intensities": intensities,
            "top_decade_exponents": slopes,
            "ranking_at_max_power": ranking,
        },
        registry,
    )
    plots.plot_laser_sweep(_out(experiment, "laser_power.svg"), powers, intensities, experiment.channel.value)


@main.command("two-freq")
@experiment_options
@sweep_options
@click.option("--f1", "f1_list", type=float, multiple=True, help="Fixed MW1 frequency in MHz (repeatable)")
@click.option("--fit", is_flag=True, help="Fit the responding lines of every spectrum")
def two_freq(f1_list: Tuple[float, ...], fit: bool, **kwargs) -> None:
    """Two-frequency differential spectra, one per fixed MW1 frequency."""
    experiment, registry = _prepare("two_freq", f1_list=f1_list or None, **kwargs)
    grid = frequency_grid(experiment.f_start, experiment.f_stop, experiment.f_step)
    summary = []
    for i, f1 in enumerate(experiment.f1_list):
        result = run_two_frequency(
            registry, f1, grid, experiment.acquisition, experiment.mw_power, stream=i, **experiment.tone_kwargs
        )
        name = f"two_freq_{_tag(f1)}"
        io.write_spectrum_csv(_out(experiment, f"{name}.csv"), result)
        peaks = fit_peaks(result) if fit else None
        plots.plot_spectrum(_out(experiment, f"{name}.svg"), result, peaks, title=f"MW1 at {f1:g} MHz")
        entry = {"f1_mhz": f1, "file": f"{name}.csv", "noise_sigma": result.metadata["noise_sigma"]}
        if peaks is not None:
            entry["fit"] = peaks.to_json_dict()
        summary.append(entry)
    io.write_json(
        _out(experiment, "two_freq.json"),
        {"config": experiment.to_json_dict(), "spectra": summary},
        registry,
    )


@main.command()
@experiment_options
@click.option("--no-refine", is_flag=True, help="Report pair lines at their candidate positions")
def assign(no_refine: bool, **kwargs) -> None:
    """
    Pair transitions by two-frequency cross responses and derive (D, E).

    Exits with status 3, after writing conflicts.json, when a line responds
    to more than one partner.
    """
    experiment, registry = _prepare("assign", **kwargs)
    try:
        result = assign_transitions(
            registry, experiment.acquisition, experiment.mw_power, refine=not no_refine, **experiment.tone_kwargs
        )
    except AmbiguousPairingError as e:
        io.write_json(
            _out(experiment, "conflicts.json"),
            {"config": experiment.to_json_dict(), "conflicts": e.conflicts},
            registry,
        )
        raise
    io.write_json(
        _out(experiment, "response_matrix.json"),
        {"config": experiment.to_json_dict(), **result.matrix.to_json_dict()},
        registry,
    )
    io.write_json(
        _out(experiment, "assignment.json"),
        {"config": experiment.to_json_dict(), **result.to_json_dict()},
        registry,
    )
    for p in result.pairing.pairs:
        click.echo(
            f"{p.f_lo:.2f} + {p.f_hi:.2f} MHz -> D = {p.zfs.d_mhz:.2f} MHz, E = {p.zfs.e_mhz:.2f} MHz"
            + (f" ({p.label})" if p.label else "")
        )
    for line in result.pairing.unpaired:
        click.echo(f"{line:.2f} MHz unpaired")


@main.command("registry")
@click.option("--registry", "registry_path", type=click.Path(dir_okay=False), help="Registry JSON to validate (default: bundled)")
@click.option("--export", "export_path", type=click.Path(dir_okay=False), help="Write the registry as JSON")
def registry_cmd(registry_path: Optional[str], export_path: Optional[str]) -> None:
    """Validate and list a defect registry."""
    registry = load_registry(registry_path)
    for s in registry:
        assumed = f" (assumed: {', '.join(s.assumed_fields)})" if s.assumed_fields else ""
        click.echo(
            f"{s.name:<10} D={s.zfs.d_mhz:8.2f} E={s.zfs.e_mhz:6.2f} "
            f"{s.orientation_class.value:<5} {s.provenance}{assumed}"
        )
    if export_path:
        io.write_registry_json(export_path, registry)
        click.echo(f"Wrote {export_path}")


@main.command()
def directories() -> None:
    """Print the directories sicspin uses."""
    click.echo("Directory paths used")
    click.echo(f" - logs:   {get_log_dir(None)}")


def run(args: Optional[List[str]] = None) -> int:
    """Console entry point: runs ``main`` and maps errors to exit codes."""
    try:
        rv = main.main(args=args, prog_name="sicspin", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except SicSpinException as e:
        click.echo(f"Error: {e}", err=True)
        return exit_code_for(e)
    return rv if isinstance(rv, int) else EXIT_OK
