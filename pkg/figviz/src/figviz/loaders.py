"""Loading and validation of darwinium result files.

CSV artifacts start with ``# key=value`` comment lines (one of which is the
schema id) followed by a single header row; JSON artifacts carry the schema
under ``metadata.schema``. Loaders fail loudly on any mismatch so a plot can
never silently render the wrong table.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SchemaError


@dataclass(frozen=True)
class Table:
    """One parsed CSV artifact: comment metadata plus string-valued cells."""

    path: str
    schema: str
    meta: dict[str, str]
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def _index(self, name: str) -> int:
        if name not in self.header:
            raise SchemaError(f"{self.path}: missing column {name!r}")
        return self.header.index(name)

    def strings(self, name: str) -> list[str]:
        i = self._index(name)
        return [row[i] for row in self.rows]

    def column(self, name: str) -> np.ndarray:
        vals = self.strings(name)
        try:
            return np.array([float(v) for v in vals])
        except ValueError as exc:
            raise SchemaError(f"{self.path}: column {name!r} is not numeric: {exc}") from None

    def config(self) -> dict:
        """The resolved run configuration embedded in the comments, if any."""
        raw = self.meta.get("config")
        if raw is None:
            return {}
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{self.path}: bad embedded config: {exc}") from None


def _read_text(path: str | Path) -> str:
    p = Path(path)
    if not p.is_file():
        raise SchemaError(f"input file not found: {p}")
    return p.read_text()


def load_table(path: str | Path) -> Table:
    meta: dict[str, str] = {}
    header: tuple[str, ...] | None = None
    rows: list[tuple[str, ...]] = []
    for line in _read_text(path).splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            key, sep, value = body.partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        cells = tuple(c.strip() for c in line.split(","))
        if header is None:
            header = cells
        else:
            if len(cells) != len(header):
                raise SchemaError(
                    f"{path}: row has {len(cells)} cells, header has {len(header)}"
                )
            rows.append(cells)
    if header is None:
        raise SchemaError(f"{path}: no header row")
    if "schema" not in meta:
        raise SchemaError(f"{path}: no '# schema=' comment line")
    return Table(str(path), meta["schema"], meta, header, tuple(rows))


def require(table: Table, schema: str, columns: tuple[str, ...]) -> Table:
    """Assert the table's schema id and column set; returns the table."""
    if table.schema != schema:
        raise SchemaError(
            f"{table.path}: schema {table.schema!r} does not match expected {schema!r}"
        )
    missing = [c for c in columns if c not in table.header]
    if missing:
        raise SchemaError(f"{table.path}: missing column(s) {', '.join(missing)}")
    return table


def load_payload(path: str | Path, schema: str) -> dict:
    """Parse a JSON artifact and check its declared schema id."""
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level is not an object")
    found = data.get("metadata", {}).get("schema")
    if found != schema:
        raise SchemaError(f"{path}: schema {found!r} does not match expected {schema!r}")
    return data
