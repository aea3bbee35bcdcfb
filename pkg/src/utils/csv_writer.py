"""CSV artifacts: UTF-8, comma-delimited, LF line endings, header row first."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import structlog

from config.loader import get_float_format
from exceptions import InvalidDataError

logger = structlog.get_logger(__name__)

FLOAT_FORMAT = get_float_format()


def format_cell(value: Any) -> str:
    """Floats with 17 significant digits (round-trip safe); bools as true/false."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return FLOAT_FORMAT % value
    if value is None:
        return ""
    if hasattr(value, "item"):
        return format_cell(value.item())
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write one artifact; every row must match the header width.

    Raises:
        InvalidDataError: a row has the wrong number of columns
    """
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    n_rows = 0
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise InvalidDataError(
                    f"{out.name}: row has {len(row)} columns, header has {len(header)}",
                    details=f"row {n_rows + 1}",
                )
            writer.writerow([format_cell(v) for v in row])
            n_rows += 1
    logger.info("csv_written", path=str(out), rows=n_rows, columns=len(header))
    return out
