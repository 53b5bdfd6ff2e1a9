"""Defines the formatters for the CLI."""

from io import StringIO
from typing import Callable, Iterable, Optional

from dapsim.cli.helpers import (
    cli_table,
    colorize,
    format_number,
    get_package_version,
    get_python_version,
    pad_line,
    text_table,
)
from dapsim.core import DapsBaseError


def format_estimate_value(rec: Optional[dict]) -> str:
    """`mean ± delta` of an estimate record."""
    if not rec:
        return "-"
    return f"{format_number(rec['mean'])} ± {format_number(rec['delta'], 2)}"


def format_verdict(nonclassical: bool) -> str:
    """Coloured nonclassicality flag."""
    if nonclassical:
        return colorize("NONCLASSICAL", "green")
    return colorize("consistent with classical", "lightgrey")


def format_error(err: DapsBaseError) -> str:
    """One line description of a dapsim error with its location."""
    location = err.location()
    prefix = f"[{err.error_code()}] " + (f"{location}: " if location else "")
    return colorize(prefix + err.desc(), "red")


def format_config_vals(config_vals: Iterable[tuple]) -> str:
    """Format an iterable of config values from a config object."""
    text_buffer = StringIO()
    for i, k, v in config_vals:
        val = "" if v is None else str(v)
        text_buffer.write(
            ("    " * i)
            + colorize(pad_line(str(k) + ":", 20, "left"), color="lightgrey")
            + pad_line(val, 20, "left")
            + "\n"
        )
    return text_buffer.getvalue()


def format_detectors(readout: Iterable, verbose: int = 0) -> str:
    """Format the detector models yielded by `detector_readout`."""
    text_buffer = StringIO()
    text_buffer.write("==== dapsim - detectors ====\n")
    text_buffer.write(
        cli_table(
            [(d.label, d.description) for d in readout],
            col_width=70,
            cols=1,
            label_color="blue",
            val_align="left",
        )
    )
    return text_buffer.getvalue()


def format_config_info(info: dict) -> str:
    """Format the documented config keys."""
    text_buffer = StringIO()
    text_buffer.write("==== dapsim - config ====\n")
    text_buffer.write(
        cli_table(
            info.items(), col_width=80, cols=1, max_label_width=28, val_align="left"
        )
    )
    return text_buffer.getvalue()


def format_datasets_written(paths: dict) -> str:
    """List the dataset files written by `simulate`."""
    return cli_table(paths.items(), col_width=70, cols=1, val_align="left")


def format_estimate(record: dict) -> str:
    """Render an estimate record: the summary and the per-setting table."""
    text_buffer = StringIO()
    text_buffer.write("==== estimate ====\n")
    summary = record.get("summary", {})
    for name in ("g_min", "mu_min"):
        if name in summary:
            entry = summary[name]
            text_buffer.write(
                cli_table(
                    [(name, format_estimate_value(entry)), ("setting", entry["index"])],
                    col_width=36,
                )
            )
            text_buffer.write("  " + format_verdict(entry["nonclassical"]) + "\n")
    if "calibration" in record:
        cal = record["calibration"]
        text_buffer.write(
            cli_table(
                [("slope", cal["slope"]), ("residual", cal["residual"])],
                col_width=36,
            )
            + "\n"
        )
    zs = record.get("zs", [])
    header = ["setting", "|beta|^2"] + [f"G_z({format_number(z)})" for z in zs]
    settings = record.get("settings", [])
    extra = [
        key
        for key in ("g_eigen", "mu_min", "di_intensity")
        if settings and key in settings[0]
    ]
    header += extra
    rows = []
    for s in settings:
        beta = complex(*s["beta"])
        gz = {g["z"]: g for g in s["gz"]}
        rows.append(
            [s["index"], abs(beta) ** 2]
            + [format_estimate_value(gz.get(z)) for z in zs]
            + [format_estimate_value(s.get(key)) for key in extra]
        )
    text_buffer.write(text_table(header, rows))
    return text_buffer.getvalue()


def _format_model(model: dict) -> str:
    coefficients = ", ".join(format_number(f) for f in model["f"])
    return f"b={format_number(model['b'])}, f=[{coefficients}]"


def format_analysis(record: dict) -> str:
    """Render an analysis record for any of the analysis modes."""
    text_buffer = StringIO()
    mode = record.get("mode")
    text_buffer.write(f"==== analysis: {mode} ====\n")
    text_buffer.write(
        cli_table([("z", record.get("z")), ("variable", record.get("variable"))])
        + "\n"
    )
    if mode == "discriminate":
        result = record["result"]
        labels = result["labels"]
        rows = [
            [label] + [f"{100 * p:.2f}%" for p in row]
            for label, row in zip(labels, result["probabilities"])
        ]
        text_buffer.write(text_table([""] + labels, rows))
        return text_buffer.getvalue()
    for res in record.get("results", []):
        text_buffer.write(f"== [{colorize(res['label'], 'lightgrey')}]\n")
        if mode == "fit":
            fields = [
                ("vacuum", _format_model(res["vacuum"])),
                (f"degree {res['degree']}", _format_model(res["model"])),
                ("chi2", res["model"]["chi2"]),
            ]
        elif mode == "predict":
            comparison = res["comparison"]
            fields = [
                ("scale", res["scale"]),
                ("relative Linf", comparison["relative_linf"]),
                ("within 3 sigma", comparison["fraction_within_3"]),
            ]
        else:
            fields = [
                ("z", res["z"]),
                ("G_z(0)", format_estimate_value(res["estimate"])),
                ("significance", res["significance"]),
                ("onset z", res["onset_z"]),
            ]
        text_buffer.write(
            cli_table(fields, col_width=70, cols=1, val_align="left") + "\n"
        )
    return text_buffer.getvalue()


def format_report(record: dict) -> str:
    """Render any estimate or analysis record."""
    kind = record.get("kind")
    if kind == "estimate":
        return format_estimate(record)
    if kind == "analysis":
        return format_analysis(record)
    return cli_table(
        [(k, v) for k, v in sorted(record.items()) if not isinstance(v, (dict, list))],
        cols=1,
    )


class CallbackFormatter:
    """Formatter which uses a callback to output information.

    Each public method accepts an object or data in a common format, with
    this class handling the formatting and output.

    Args:
        callback (:obj:`callable`): Called with each string to output.
        verbosity (:obj:`int`): How verbose the output should be.
        filter_empty (:obj:`bool`): If True, empty messages are dropped.

    """

    def __init__(
        self, callback: Callable[[str], None], verbosity: int = 0, filter_empty=True
    ):
        self._callback = callback
        self._verbosity = verbosity
        self._filter_empty = filter_empty

    def _dispatch(self, s: str):
        # The strip here is to filter out any empty messages
        if (not self._filter_empty) or s.strip(" \n\t"):
            return self._callback(s)

    def _format_config(self, config, experiment=None) -> str:
        text_buffer = StringIO()
        # Only show version information if verbosity is high enough
        if self._verbosity > 0:
            text_buffer.write("==== dapsim ====\n")
            content = [
                ("dapsim", get_package_version()),
                ("python", get_python_version()),
                ("seed", config.get("seed")),
                ("processes", config.get("processes")),
                ("verbosity", self._verbosity),
            ]
            if experiment is not None:
                content += [
                    ("state", experiment.state.describe()),
                    ("detector", experiment.multiplex.detector.name),
                    ("N", experiment.multiplex.N),
                    ("K", experiment.multiplex.K),
                    ("n_max", experiment.frontend.n_max),
                    ("settings", len(experiment.lo_grid)),
                    ("trials", experiment.trials),
                ]
            text_buffer.write(cli_table(content, col_width=30, max_label_width=15))
            text_buffer.write("\n")
            if self._verbosity > 1:
                text_buffer.write("\n== Raw Config:\n")
                text_buffer.write(format_config_vals(config.iter_vals()))
        return text_buffer.getvalue()

    def dispatch_config(self, config, experiment=None):
        """Dispatch configuration output appropriately."""
        return self._dispatch(self._format_config(config, experiment))

    def dispatch_report(self, record: dict):
        """Dispatch a human rendering of an estimate or analysis record."""
        return self._dispatch(format_report(record))

    def dispatch_written(self, paths: dict):
        """Dispatch the list of written files."""
        return self._dispatch(format_datasets_written(paths))
