"""
Dataset ingestion and emission: header row plus numeric rows, UTF-8.
"""

import csv
import io
import math
from pathlib import Path
from typing import List, Union

from crpd.core.exceptions import EmptyFile, NonNumericCell, ParseError
from crpd.models.dataset import Dataset

PathLike = Union[str, Path]


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError(f"input file '{path}' does not exist")
    except UnicodeDecodeError as e:
        raise ParseError(f"input file '{path}' is not valid UTF-8: {e}")
    except OSError as e:
        raise ParseError(f"cannot read '{path}': {e}")


def _parse_cell(cell: str, line: int, column: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise NonNumericCell(f"'{cell}' is not a number", line=line, column=column)
    if not math.isfinite(value):
        raise NonNumericCell(f"'{cell}' is not a finite number", line=line, column=column)
    return value


def parse_text(text: str, source: str = "<input>") -> Dataset:
    """
    Parse CSV text into a Dataset

    Raises:
        EmptyFile: If there is no header or no data row
        ParseError: On a malformed header, ragged row or blank line inside the body
        NonNumericCell: If a cell is not a finite number
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise EmptyFile(f"{source} is empty")

    header = [name.strip() for name in next(csv.reader([lines[0]]))]
    if not header or any(not name for name in header):
        raise ParseError("header has an empty column name", line=1)
    if len(set(header)) != len(header):
        raise ParseError("header repeats a column name", line=1)

    rows: List[List[float]] = []
    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            raise ParseError("blank line inside the data body", line=line_number)
        cells = next(csv.reader([line]))
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(cells)}", line=line_number)
        rows.append([_parse_cell(cell.strip(), line_number, j) for j, cell in enumerate(cells, start=1)])
    if not rows:
        raise EmptyFile(f"{source} has a header but no data rows")
    return Dataset(columns=tuple(header), values=rows)


def parse_csv(path: PathLike) -> Dataset:
    """Read a dataset from a CSV file, preserving row order"""
    return parse_text(_read_text(path), source=str(path))


def format_csv(dataset: Dataset) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(dataset.columns)
    for row in dataset.values:
        writer.writerow([repr(float(v)) for v in row])
    return buffer.getvalue()


def write_csv(dataset: Dataset, path: PathLike) -> None:
    """Write a dataset with shortest round-trip float formatting"""
    Path(path).write_text(format_csv(dataset), encoding="utf-8")
