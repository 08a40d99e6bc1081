"""File formats: vertex lists, hyperlink files, and result tables.

Hyperlink files are UTF-8 text, one hyperlink per line as tab-separated
vertex names; blank lines are skipped and ``#`` starts a comment line.
Vertex files carry one name per line under the same comment rules. Result
tables are tab-separated with a header row; every file written here starts
with ``#`` comment lines recording how it was produced.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .hypermatrix import IncidenceMatrix

__all__ = [
    "load_vertices",
    "write_vertices",
    "parse_incidence",
    "write_incidence",
    "provenance_header",
    "write_table",
]

logger = logging.getLogger(__name__)


def _data_lines(path: Path) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(
        path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def load_vertices(path: str | Path) -> list[str]:
    """Read the vertex universe, one name per line; names must be unique."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"vertex file not found: {path}")
    names = []
    seen = set()
    for lineno, line in _data_lines(path):
        name = line.strip()
        if name in seen:
            raise ValueError(
                f"{path}:{lineno}: duplicate vertex name '{name}'"
            )
        seen.add(name)
        names.append(name)
    return names


def write_vertices(
    path: str | Path, names: Sequence[str], header: Sequence[str] = ()
) -> None:
    lines = list(header) + list(names)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def parse_incidence(
    path: str | Path, vertices: Sequence[str]
) -> IncidenceMatrix:
    """Read a hyperlink file against a vertex universe.

    Unknown vertex names are an error naming the offender and its line;
    a repeated name inside one hyperlink is dropped with a warning.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"hyperlink file not found: {path}")
    index = {name: i for i, name in enumerate(vertices)}
    columns = []
    for lineno, line in _data_lines(path):
        names = [field.strip() for field in line.split("\t")]
        if any(not name for name in names):
            raise ValueError(
                f"{path}:{lineno}: empty vertex name in hyperlink line"
            )
        unique = []
        for name in names:
            if name not in index:
                raise ValueError(
                    f"{path}:{lineno}: unknown vertex '{name}'"
                )
            if name in unique:
                logger.warning(
                    "%s:%d: vertex '%s' repeated within a hyperlink; "
                    "keeping one copy",
                    path,
                    lineno,
                    name,
                )
            else:
                unique.append(name)
        columns.append([index[name] for name in unique])
    return IncidenceMatrix(len(vertices), columns)


def write_incidence(
    path: str | Path,
    incidence: IncidenceMatrix,
    vertices: Sequence[str],
    header: Sequence[str] = (),
) -> None:
    """Write a hyperlink file; inverse of :func:`parse_incidence`.

    Columns keep their order; each line lists the column's vertex names in
    index order.
    """
    if len(vertices) != incidence.num_vertices:
        raise ValueError(
            "vertex name list does not match the incidence matrix"
        )
    lines = list(header)
    for col in incidence.columns:
        lines.append("\t".join(vertices[v] for v in col))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def provenance_header(config: Mapping[str, object]) -> list[str]:
    """Comment lines recording the configuration that produced a file."""
    return [f"# {key} = {value}" for key, value in config.items()]


def write_table(
    path: str | Path,
    columns: Sequence[str],
    rows: Iterable[Sequence[object]],
    header: Sequence[str] = (),
) -> None:
    """Write a tab-separated table with leading comment lines."""
    lines = list(header)
    lines.append("\t".join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise ValueError("row width does not match the column header")
        lines.append("\t".join(str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
