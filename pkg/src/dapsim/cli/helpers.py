"""CLI helper utilities."""

import math
import os
import sys
import textwrap
from io import StringIO
from typing import Iterable, Optional, Sequence, Tuple

from colorama import Fore, Style

from dapsim import __version__ as pkg_version

color_lookup = {
    "red": Fore.RED,
    "green": Fore.GREEN,
    "blue": Fore.BLUE,
    "lightgrey": Fore.BLACK + Style.BRIGHT,
}


def colorize(s: str, color: Optional[str] = None) -> str:
    """Wrap a string in ANSI colour codes."""
    if not color:
        return s
    return color_lookup[color] + s + Style.RESET_ALL


def get_python_version() -> str:
    """Get the current python version as a string."""
    return "{0[0]}.{0[1]}.{0[2]}".format(sys.version_info)


def get_package_version() -> str:
    """Get the current version of the dapsim package."""
    return pkg_version


def format_number(value, precision: int = 6) -> str:
    """Compact rendering of a number for tables."""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return str(value)
        return f"{value:.{precision}g}"
    return str(value)


def pad_line(s: str, width: int, align: str = "left") -> str:
    """Pad a string with a given alignment to a specific width with spaces."""
    gap = width - len(s)
    if gap <= 0:
        return s
    if align == "left":
        return s + " " * gap
    if align == "right":
        return " " * gap + s
    raise ValueError(f"Unknown alignment: {align}")


def cli_table(
    fields: Iterable[Tuple[object, object]],
    col_width: int = 30,
    cols: int = 2,
    label_color: Optional[str] = "lightgrey",
    max_label_width: int = 14,
    val_align: str = "right",
    sep_char: str = ": ",
) -> str:
    """Lay out (label, value) pairs in `cols` columns.

    Values too wide for their cell wrap onto continuation lines.
    """
    cells = [(str(label), format_number(value)) for label, value in fields]
    buff = StringIO()
    for start in range(0, len(cells), cols):
        row = cells[start : start + cols]
        wrapped = []
        for label, value in row:
            label_width = min(max(len(label), 1), max_label_width)
            val_width = max(col_width - label_width - len(sep_char), 1)
            wrapped.append(
                (
                    textwrap.wrap(label, label_width) or [""],
                    textwrap.wrap(value, val_width) or [""],
                    label_width,
                    val_width,
                )
            )
        height = max(max(len(lab), len(val)) for lab, val, _, _ in wrapped)
        for line in range(height):
            parts = []
            for lab, val, lw, vw in wrapped:
                text = lab[line] if line < len(lab) else ""
                parts.append(
                    colorize(pad_line(text, lw), label_color)
                    + (sep_char if line == 0 else " " * len(sep_char))
                    + pad_line(val[line] if line < len(val) else "", vw, val_align)
                )
            buff.write(" ".join(parts).rstrip() + "\n")
    return buff.getvalue().rstrip("\n")


def text_table(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """Right aligned columns with a header line."""
    body = [[format_number(v) for v in row] for row in rows]
    widths = [len(h) for h in header]
    for row in body:
        widths = [max(w, len(v)) for w, v in zip(widths, row)]
    lines = [" ".join(pad_line(h, w, "right") for h, w in zip(header, widths))]
    lines.append(" ".join("-" * w for w in widths))
    lines.extend(
        " ".join(pad_line(v, w, "right") for v, w in zip(row, widths)) for row in body
    )
    return "\n".join(lines)


def sibling_path(path: str, label: str, ext: Optional[str] = None) -> str:
    """`dir/name_<label><ext>` next to `path`, keeping its extension by default."""
    stem, orig_ext = os.path.splitext(path)
    return f"{stem}_{label}{orig_ext if ext is None else ext}"


def path_label(path: str) -> str:
    """Label of a dataset file: its name without directory and extension."""
    return os.path.splitext(os.path.basename(path))[0]
