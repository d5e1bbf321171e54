"""Plot-ready CSV and JSON emitters for command results."""
import csv
import json
import logging
import math
import sys
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Optional, TextIO

from pydantic import BaseModel

from gaussmem.config import settings
from gaussmem.models.options import OutputFormat

logger = logging.getLogger(__name__)


class Table(BaseModel):
    """Named columns and the rows that fill them, in output order"""
    columns: List[str]
    rows: List[Dict[str, Any]] = []


def format_value(value: Any) -> str:
    """Floats with the configured significant digits, non-finite values as inf / -inf / nan"""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return settings.float_format.format(value)
    if value is None:
        return ""
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return format_value(value)
    return value


@contextmanager
def _open(out: Optional[str]) -> Iterator[TextIO]:
    if out is None:
        yield sys.stdout
        return
    with open(out, "w", newline="") as handle:
        yield handle


def write_table(table: Table, fmt: OutputFormat = OutputFormat.CSV,
                out: Optional[str] = None) -> None:
    """
    Write a table to stdout or to the --out path.

    Args:
        table: Columns and rows to emit
        fmt: csv (header row, then one line per row) or json (list of objects)
        out: Destination file; stdout when None
    """
    with _open(out) as stream:
        if fmt == OutputFormat.JSON:
            records = [{column: _json_value(row.get(column)) for column in table.columns}
                       for row in table.rows]
            json.dump(records, stream, indent=2)
            stream.write("\n")
        else:
            writer = csv.DictWriter(stream, fieldnames=table.columns, lineterminator="\n")
            writer.writeheader()
            for row in table.rows:
                writer.writerow({column: format_value(row.get(column)) for column in table.columns})
    if out is not None:
        logger.info(f"Wrote {len(table.rows)} rows to {out}")
