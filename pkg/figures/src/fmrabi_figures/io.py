"""Readers for the fmrabi CSV format.

Files carry a '# key = value' metadata preamble, one header row, then data
rows; floats are plain decimal text.  Readers validate the columns a figure
needs and fail loudly on anything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class SchemaError(ValueError):
    """Input file does not carry the columns the figure requires."""


class EmptyInputError(ValueError):
    """Input file parses but contains no data rows."""


@dataclass
class CsvTable:
    path: str
    meta: dict[str, str]
    header: list[str]
    rows: list[list[str]] = field(repr=False)

    def column(self, name: str) -> np.ndarray:
        """Numeric column by header name."""
        idx = self._index(name)
        try:
            return np.array([float(row[idx]) for row in self.rows])
        except ValueError as exc:
            raise SchemaError(f"{self.path}: column {name!r} is not numeric: {exc}") from exc

    def text_column(self, name: str) -> list[str]:
        idx = self._index(name)
        return [row[idx] for row in self.rows]

    def _index(self, name: str) -> int:
        try:
            return self.header.index(name)
        except ValueError:
            raise SchemaError(
                f"{self.path}: missing column {name!r} (found {self.header})"
            ) from None


def read_table(path: str, required: tuple[str, ...]) -> CsvTable:
    """Parse one artifact and check that every required column is present."""
    meta: dict[str, str] = {}
    header: list[str] = []
    rows: list[list[str]] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            elif not header:
                header = line.split(",")
            elif line:
                cells = line.split(",")
                if len(cells) != len(header):
                    raise SchemaError(
                        f"{path}: row has {len(cells)} cells, header has {len(header)}"
                    )
                rows.append(cells)
    missing = [name for name in required if name not in header]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing} (found {header})")
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    return CsvTable(path=path, meta=meta, header=header, rows=rows)
