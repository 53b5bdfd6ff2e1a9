"""Contains the CLI."""

import json
import logging
import sys
import time
from typing import Dict, NoReturn, Optional

import click

# To enable colour cross platform
import colorama
import oyaml as yaml

from dapsim.api import analyze, estimate, list_config_info, simulate
from dapsim.cli.formatters import (
    CallbackFormatter,
    format_config_info,
    format_detectors,
    format_error,
)
from dapsim.cli.helpers import (
    cli_table,
    colorize,
    get_package_version,
    path_label,
    sibling_path,
)
from dapsim.core import (
    DapsBaseError,
    DapsConfig,
    DapsDataError,
    DapsNumericError,
    ExperimentConfig,
    TimingSummary,
    detector_readout,
)
from dapsim.core.estimator import calibration_fit
from dapsim.core.experiment import AnalysisOptions, EstimateOptions
from dapsim.core.fock.distribution import StateSpec
from dapsim.core.serialization import (
    dumps,
    read_dataset,
    read_json,
    write_csv,
    write_dataset,
    write_report,
)

EXIT_IO = 1
EXIT_CONFIG = 66
EXIT_NUMERIC = 67
EXIT_DATA = 68

LOGGERS = [
    "config",
    "fock",
    "detectors",
    "simulator",
    "runner",
    "estimator",
    "analysis",
    "io",
    "api",
]


class RedWarningsFilter(logging.Filter):
    """This filter makes all warnings or above red."""

    def filter(self, record):
        """Filter any warnings (or above) to turn them red."""
        if record.levelno >= logging.WARNING:
            record.msg = colorize(str(record.msg), "red") + " "
        return True


def set_logging_level(verbosity, logger=None, stderr_output=False):
    """Set up logging for the CLI.

    We either set up global logging based on the verbosity
    or, if `logger` is specified, we only limit to a single
    dapsim logger. Verbosity is applied in the same way.

    Implementation: If `logger` is not specified, the handler
    is attached to the `dapsim` logger. If it is specified
    then it attaches the logger in question.
    """
    daps_logger = logging.getLogger("dapsim")
    # Don't propagate logging
    daps_logger.propagate = False

    # Enable colorama
    colorama.init()

    handler = logging.StreamHandler(stream=sys.stderr if stderr_output else sys.stdout)
    # NB: the unicode character at the beginning is to squash any badly
    # tamed ANSI colour statements, and return us to normality.
    handler.setFormatter(logging.Formatter("\u001b[0m%(levelname)-10s %(message)s"))
    handler.addFilter(RedWarningsFilter())
    if logger:
        focus_logger = logging.getLogger(f"dapsim.{logger}")
        focus_logger.addHandler(handler)
    else:
        daps_logger.addHandler(handler)

    # The runner logs every work unit, so it only speaks up at higher
    # verbosity. Levels are set on every call so that tests don't leak
    # granularity into each other.
    runner_logger = logging.getLogger("dapsim.runner")
    if verbosity < 1:
        daps_logger.setLevel(logging.WARNING)
        runner_logger.setLevel(logging.NOTSET)
    elif verbosity == 1:
        daps_logger.setLevel(logging.INFO)
        runner_logger.setLevel(logging.WARNING)
    elif verbosity == 2:
        daps_logger.setLevel(logging.DEBUG)
        runner_logger.setLevel(logging.INFO)
    else:
        daps_logger.setLevel(logging.DEBUG)
        runner_logger.setLevel(logging.DEBUG)


def exit_code_for(err: Exception) -> int:
    """The process exit code for an error."""
    if isinstance(err, DapsNumericError):
        return EXIT_NUMERIC
    if isinstance(err, DapsDataError):
        return EXIT_DATA
    if isinstance(err, DapsBaseError):
        return EXIT_CONFIG
    return EXIT_IO


def fail(err: Exception, color=None) -> NoReturn:
    """Report an error on stderr and exit with its code."""
    if isinstance(err, DapsBaseError):
        message = format_error(err)
    else:
        message = colorize(f"Error: {err}", "red")
    click.echo(message, err=True, color=color)
    sys.exit(exit_code_for(err))


def common_options(f):
    """Add common options to commands via a decorator.

    These are applied to all of the cli commands.
    """
    f = click.version_option()(f)
    f = click.option(
        "-v",
        "--verbose",
        count=True,
        help=(
            "Verbosity, how detailed should the output be. This is *stackable*, "
            "so `-vv` is more verbose than `-v`. For the most verbose option "
            "try `-vvv`."
        ),
    )(f)
    f = click.option(
        "-n",
        "--nocolor",
        is_flag=True,
        help="No color - if this is set then the output will be without ANSI "
        "color codes.",
    )(f)
    return f


def core_options(f):
    """Add core operation options to commands via a decorator.

    These are applied to the commands which run the pipeline:
    `simulate`, `estimate` and `analyze`.
    """
    f = click.option(
        "--config",
        "extra_config_path",
        default=None,
        type=click.Path(exists=True, dir_okay=False),
        help="Config file applied on top of the discovered ones.",
    )(f)
    f = click.option(
        "--seed",
        type=int,
        default=None,
        help="Override the master seed of the config.",
    )(f)
    f = click.option(
        "-f",
        "--format",
        "format",
        default="human",
        type=click.Choice(["human", "json", "yaml"], case_sensitive=False),
        help="What format to print the result in (default=human).",
    )(f)
    f = click.option(
        "--bench",
        is_flag=True,
        help="Set this flag to engage the benchmarking tool output.",
    )(f)
    f = click.option(
        "--logger",
        type=click.Choice(LOGGERS, case_sensitive=False),
        help="Choose to limit the logging to one of the loggers.",
    )(f)
    return f


def get_config(extra_config_path=None, sections: Optional[dict] = None, **kwargs):
    """Get a config object from kwargs.

    Top level kwargs override the core section, `sections` holds
    overrides of the other sections as {section: {field: value}}.
    """
    overrides = {k: kwargs[k] for k in kwargs if kwargs[k] is not None}
    for section, values in (sections or {}).items():
        values = {k: v for k, v in values.items() if v is not None}
        if values:
            overrides[section] = values
    try:
        return DapsConfig.from_path(
            path=".", extra_config_path=extra_config_path, overrides=overrides
        )
    except DapsBaseError as err:
        fail(err)


def get_formatter(cfg: DapsConfig, silent=False) -> CallbackFormatter:
    """A formatter echoing to stdout, or discarding output when silent."""
    if silent:
        return CallbackFormatter(callback=lambda m: None, verbosity=0)
    return CallbackFormatter(
        callback=lambda m: click.echo(m, color=cfg.get("color")),
        verbosity=cfg.get("verbose"),
    )


def echo_record(record, format: str):
    """Print a record as json or yaml."""
    if format == "json":
        click.echo(dumps(record), nl=False)
    elif format == "yaml":
        # Round trip through json for plain python types.
        click.echo(yaml.dump(json.loads(dumps(record))))


def echo_timings(clock_time: float, timing: Optional[TimingSummary] = None):
    """The `--bench` output."""
    click.echo("==== overall timings ====")
    click.echo(cli_table([("Clock time", clock_time)]))
    if timing is None:
        return
    timing_summary = timing.summary()
    for step in timing_summary:
        click.echo(f"=== {step} ===")
        click.echo(cli_table(timing_summary[step].items()))


@click.group()
@click.version_option()
def cli():
    """Dapsim simulates and estimates detector-agnostic phase-space distributions."""


@cli.command()
@common_options
def version(**kwargs):
    """Show the version of dapsim."""
    c = get_config(**kwargs)
    if c.get("verbose") > 0:
        get_formatter(c).dispatch_config(c)
    else:
        click.echo(get_package_version(), color=c.get("color"))


@cli.command()
@common_options
def detectors(**kwargs):
    """Show the detector models available."""
    c = get_config(**kwargs)
    click.echo(format_detectors(detector_readout()), color=c.get("color"))


@cli.command()
@common_options
def config(**kwargs):
    """Show the documented config keys."""
    c = get_config(**kwargs)
    click.echo(format_config_info(list_config_info()), color=c.get("color"))


@cli.command(name="simulate")
@common_options
@core_options
@click.option(
    "-o",
    "--output",
    required=True,
    type=click.Path(dir_okay=False),
    help=(
        "Dataset file to write. Heralded runs write one file per herald "
        "outcome, named `<output>_kh<k>`."
    ),
)
@click.option(
    "--khs",
    default=None,
    help="Comma separated herald outcomes, e.g. `0,1,2`. Enables heralding.",
)
@click.option(
    "--grid",
    default=None,
    help="Comma separated LO intensities |beta|^2, replacing the scan grid.",
)
@click.option(
    "--exact",
    is_flag=True,
    help="Only compute exact tables, without sampling events.",
)
@click.option(
    "-p",
    "--processes",
    type=int,
    default=None,
    help="The number of parallel processes to run.",
)
def simulate_cmd(
    output,
    khs,
    grid,
    exact,
    format,
    extra_config_path=None,
    logger=None,
    bench=False,
    **kwargs,
):
    """Simulate the LO scans of an experiment and write the dataset(s).

    The experiment is read from the layered config, an explicit file can
    be given with `--config`:

        dapsim simulate --config fock1.cfg --output fock1.json

    """
    sections: Dict[str, dict] = {
        "heralding": {"enabled": True if khs else None, "khs": khs},
        "scan": {"intensities": grid, "sample": False if exact else None},
    }
    config = get_config(extra_config_path, sections, **kwargs)
    non_human_output = format != "human"
    formatter = get_formatter(config, silent=non_human_output)
    set_logging_level(
        verbosity=config.get("verbose"), logger=logger, stderr_output=non_human_output
    )
    t0 = time.monotonic()
    timing = TimingSummary() if bench else None
    try:
        experiment = ExperimentConfig.from_config(config)
        formatter.dispatch_config(config, experiment)
        datasets = simulate(experiment, timing=timing)
    except DapsBaseError as err:
        fail(err, config.get("color"))

    written = {}
    try:
        for label, dataset in datasets.items():
            path = output if label == "signal" else sibling_path(output, label)
            write_dataset(path, dataset)
            written[label] = path
    except OSError as err:
        fail(err, config.get("color"))

    formatter.dispatch_written(written)
    echo_record({"datasets": written}, format)
    if bench:
        echo_timings(time.monotonic() - t0, timing)
    sys.exit(0)


@cli.command(name="estimate")
@common_options
@core_options
@click.argument("dataset", type=click.Path(dir_okay=False))
@click.option(
    "-o",
    "--output",
    default=None,
    type=click.Path(dir_okay=False),
    help="Report file (JSON) to write.",
)
@click.option(
    "--z",
    "zs",
    multiple=True,
    type=float,
    help="z value of G_z, repeat for several. Replaces the configured list.",
)
@click.option(
    "--vector",
    "vectors",
    multiple=True,
    help="Comma separated weight vector Z for an extra g_Z estimate.",
)
@click.option(
    "--method",
    default=None,
    type=click.Choice(["propagation", "bootstrap"], case_sensitive=False),
    help="Error method of the eigenvalue witness.",
)
def estimate_cmd(
    dataset,
    output,
    zs,
    vectors,
    method,
    format,
    extra_config_path=None,
    logger=None,
    bench=False,
    **kwargs,
):
    """Estimate DAPS values and nonclassicality witnesses of a dataset.

        dapsim estimate fock1.json --z -1.5 --z 0 --output fock1_estimate.json

    """
    sections = {
        "estimate": {
            "zs": list(zs) or None,
            "error_method": method,
        }
    }
    config = get_config(extra_config_path, sections, **kwargs)
    non_human_output = format != "human"
    formatter = get_formatter(config, silent=non_human_output)
    set_logging_level(
        verbosity=config.get("verbose"), logger=logger, stderr_output=non_human_output
    )
    t0 = time.monotonic()
    color = config.get("color")
    try:
        weights = [[float(v) for v in vec.split(",")] for vec in vectors]
    except ValueError:
        click.echo(colorize(f"Error: Bad weight vector in {vectors!r}", "red"))
        sys.exit(EXIT_CONFIG)
    try:
        options = EstimateOptions.from_config(config)
        data = read_dataset(dataset)
        result = estimate(data, options, seed=config.get("seed"), vectors=weights)
        record = {"source": dataset, **result.to_record()}
        if data.vacuum is not None and len(data.vacuum) >= 2:
            record["calibration"] = calibration_fit(
                data.vacuum, options.nominal_events
            ).to_record()
        if output:
            write_report(output, record)
    except (DapsBaseError, OSError) as err:
        fail(err, color)

    formatter.dispatch_report(record)
    echo_record(record, format)
    if bench:
        echo_timings(time.monotonic() - t0)
    sys.exit(0)


def _unique_labels(paths):
    labels = [path_label(p) for p in paths]
    if len(set(labels)) == len(labels):
        return labels
    return [f"{label}_{i}" for i, label in enumerate(labels)]


@cli.command(name="analyze")
@common_options
@core_options
@click.argument("datasets", nargs=-1, required=True, type=click.Path(dir_okay=False))
@click.option(
    "--mode",
    required=True,
    type=click.Choice(["fit", "predict", "discriminate", "optimal-z"]),
    help="The analysis to run.",
)
@click.option(
    "-o",
    "--output",
    default=None,
    type=click.Path(dir_okay=False),
    help=(
        "Report file (JSON) to write. Curves and matrices are written as CSV "
        "next to it, named `<output>_<table>.csv`."
    ),
)
@click.option("--z", "z", type=float, default=None, help="z of the DAPS curves.")
@click.option(
    "--variable",
    default=None,
    type=click.Choice(["di", "raw"]),
    help="Curve abscissa, |beta_DI|^2 (di) or the nominal |beta|^2 (raw).",
)
@click.option(
    "--photons",
    type=int,
    default=None,
    help="Predict the Fock state with this photon number instead of the "
    "state stored with the dataset.",
)
@click.option(
    "--x-max",
    type=float,
    default=None,
    help="Only compare predictions up to this abscissa.",
)
@click.option(
    "--fix-decay",
    is_flag=True,
    help="Fix the heralded decay rate to the vacuum fit.",
)
def analyze_cmd(
    datasets,
    mode,
    output,
    z,
    variable,
    photons,
    x_max,
    fix_decay,
    format,
    extra_config_path=None,
    logger=None,
    bench=False,
    **kwargs,
):
    """Fit, predict, discriminate or search the optimal z.

        dapsim analyze kh1.json --mode fit
        dapsim analyze fock2.json --mode predict --photons 2 --x-max 5
        dapsim analyze a.json b.json --mode discriminate -o matrix.json

    """
    sections = {
        "analysis": {
            "z": z,
            "variable": variable,
            "fix_decay": True if fix_decay else None,
        }
    }
    config = get_config(extra_config_path, sections, **kwargs)
    non_human_output = format != "human"
    formatter = get_formatter(config, silent=non_human_output)
    set_logging_level(
        verbosity=config.get("verbose"), logger=logger, stderr_output=non_human_output
    )
    t0 = time.monotonic()
    color = config.get("color")
    try:
        options = AnalysisOptions.from_config(config)
        nominal = EstimateOptions.from_config(config).nominal_events
        data = [read_dataset(path) for path in datasets]
        result = analyze(
            data,
            mode,
            options,
            labels=_unique_labels(datasets),
            nominal_events=nominal,
            state=None if photons is None else StateSpec.fock(photons),
            x_max=x_max,
        )
        record = {"sources": list(datasets), **result.record}
        if output:
            write_report(output, record)
            for name, (header, rows) in result.tables.items():
                write_csv(sibling_path(output, name, ".csv"), header, rows)
    except (DapsBaseError, OSError) as err:
        fail(err, color)

    formatter.dispatch_report(record)
    echo_record(record, format)
    if bench:
        echo_timings(time.monotonic() - t0)
    sys.exit(0)


@cli.command()
@common_options
@click.argument("report", type=click.Path(dir_okay=False))
@click.option(
    "-f",
    "--format",
    "format",
    default="human",
    type=click.Choice(["human", "json", "yaml"], case_sensitive=False),
    help="What format to print the report in (default=human).",
)
def report(report, format, **kwargs):
    """Render an estimate or analysis report file."""
    c = get_config(**kwargs)
    try:
        record = read_json(report)
    except (DapsBaseError, OSError) as err:
        fail(err, c.get("color"))
    if format == "human":
        get_formatter(c).dispatch_report(record)
    else:
        echo_record(record, format)
    sys.exit(0)


# This "__main__" handler allows invoking dapsim using "python -m", which
# simplifies the use of cProfile, e.g.:
# python -m cProfile -s cumtime -m dapsim.cli.commands simulate -o out.json
if __name__ == "__main__":
    cli.main(sys.argv[1:])
