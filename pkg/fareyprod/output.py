import csv
import io
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, List, Sequence

import numpy as np

from . import __version__

# Output formats and their field delimiters
FORMAT_DELIMITERS = {
    "csv": ",",
    "tsv": "\t",
}

FORMAT_EXTENSIONS = {
    "csv": ".csv",
    "tsv": ".tsv",
}


def get_file_extension(fmt: str) -> str:
    """Get the file extension for an output format"""
    return FORMAT_EXTENSIONS.get(fmt, ".txt")


def format_value(value: Any) -> str:
    """Exact integers in full, floats to 12 significant digits"""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        value = float(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    if value == 0:
        value = 0.0
    return f"{value:.12g}"


def format_ratio(value: float) -> str:
    """Ratio columns of the valuation tables, 4 decimal places"""
    if value == 0:
        value = 0.0
    return f"{value:.4f}"


def render_rows(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    fmt: str = "csv",
    comment: str = "",
    trailer: Sequence[str] = (),
) -> str:
    if fmt not in FORMAT_DELIMITERS:
        raise ValueError(f"Unsupported output format: {fmt}")
    buffer = io.StringIO()
    buffer.write(f"# fareyprod {__version__} {comment}".rstrip() + "\n")
    writer = csv.writer(buffer, delimiter=FORMAT_DELIMITERS[fmt], lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    for line in trailer:
        buffer.write(f"# {line}\n")
    return buffer.getvalue()


def write_rows(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    output_path: str,
    fmt: str = "csv",
    comment: str = "",
    trailer: Sequence[str] = (),
) -> Path:
    """Write the rows to output_path, adding the format extension when it has none"""
    text = render_rows(header, rows, fmt=fmt, comment=comment, trailer=trailer)
    path = Path(output_path)
    if not path.suffix:
        path = path.with_suffix(get_file_extension(fmt))
    path.write_text(text)
    return path


def config_comment(fields: dict, skip: List[str]) -> str:
    """key=value pairs of a run, in a stable order"""
    parts = []
    for key in sorted(fields):
        value = fields[key]
        if key in skip or value is None:
            continue
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        parts.append(f"{key}={value}")
    return " ".join(parts)
