"""Text, CSV and JSON emitters for series, coefficient tables and verification reports.

Grid tables follow the printed layout: one block per value of the block
variables, rows and columns ascending. Geometries whose variables do not fit
a grid are listed in long form, one nonzero entry per row.
"""

import csv
import io
import json
from collections.abc import Iterator, Mapping
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Optional

from jinja2 import Environment, FileSystemLoader
from pydantic import BaseModel, Field

from syzdisc.corpus.verify import VerificationReport
from syzdisc.series.kernel import UV, TruncatedSeries
from syzdisc.series.text import SeriesDocument, format_rational
from syzdisc.solver.potential import CoefficientTable

TEMPLATES = Path(__file__).parent / "templates"

env = Environment(loader=FileSystemLoader(TEMPLATES), trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)


class TableRow(BaseModel):
    label: str
    cells: list[str]


class TableBlock(BaseModel):
    title: str = ""
    corner: str
    columns: list[str]
    rows: list[TableRow]

    @property
    def width(self) -> int:
        texts = [self.corner, *self.columns, *(r.label for r in self.rows), *(c for r in self.rows for c in r.cells)]
        return max(len(t) for t in texts)


class Axes(BaseModel):
    blocks: tuple[str, ...] = Field(description="Variables fixed per block")
    row: str
    column: str


class TableDocument(BaseModel):
    convention: str
    variables: list[str]
    entries: list[tuple[list[int], str]] = Field(description="(exponent vector, a) for every nonzero entry in canonical order")


def _show(name: str, display_names: Mapping[str, str]) -> str:
    return display_names.get(name, name)


def choose_axes(table: CoefficientTable) -> Optional[Axes]:
    """Grid axes for the shapes the builtin geometries produce; None means long form."""
    spec = table.spec
    kahler = tuple(n for n in spec.small_names if n != UV)
    phase = spec.phase_names
    if UV not in spec.small_names:
        return None
    if len(kahler) == 1 and len(phase) == 1:
        return Axes(blocks=(UV,), row=phase[0], column=kahler[0])
    if len(kahler) == 1 and not phase:
        return Axes(blocks=(), row=UV, column=kahler[0])
    if not kahler and len(phase) == 1:
        return Axes(blocks=(), row=phase[0], column=UV)
    if len(kahler) == 1 and len(phase) == 2:
        return Axes(blocks=(kahler[0], UV), row=phase[0], column=phase[1])
    return None


def axis_range(table: CoefficientTable, name: str) -> range:
    """Small variables run over 0..cap; phase variables over the exponents that occur, clamped to the window."""
    spec, trunc = table.spec, table.trunc
    if spec.is_small(name):
        caps = [trunc.small_total_max]
        if (cap := trunc.cap(name)) is not None:
            caps.append(cap)
        caps += [cap for group, cap in trunc.group_max if name in group]
        return range(min(caps) + 1)
    i = spec.index(name)
    seen = [e[i] for e, a in table.entries.items() if a]
    return range(min([0, *seen]), max([0, *seen]) + 1)


def _cell(value: Fraction) -> str:
    return str(value)


def _grid_cells(table: CoefficientTable, axes: Axes) -> Iterator[tuple[dict[str, int], list[tuple[int, list[tuple[int, Fraction]]]]]]:
    rows, columns = axis_range(table, axes.row), axis_range(table, axes.column)
    for fixed in product(*(axis_range(table, name) for name in axes.blocks)):
        coords = dict(zip(axes.blocks, fixed))
        grid = [(r, [(c, table.lookup({**coords, axes.row: r, axes.column: c})) for c in columns]) for r in rows]
        yield coords, grid


def table_blocks(table: CoefficientTable, display_names: Optional[Mapping[str, str]] = None) -> list[TableBlock]:
    names = display_names or {}
    axes = choose_axes(table)
    if axes is None:
        rows = [
            TableRow(label=_monomial(table, e, names), cells=[_cell(a)]) for e, a in sorted(table.entries.items()) if a
        ]
        return [TableBlock(corner="monomial", columns=["a"], rows=rows)]
    corner = f"{_show(axes.row, names)} \\ {_show(axes.column, names)}"
    blocks = []
    for coords, grid in _grid_cells(table, axes):
        title = ", ".join(f"ord({_show(k, names)})={v}" for k, v in coords.items())
        columns = [str(c) for c, _ in grid[0][1]] if grid else []
        rows = [TableRow(label=str(r), cells=[_cell(a) for _, a in cells]) for r, cells in grid]
        blocks.append(TableBlock(title=title, corner=corner, columns=columns, rows=rows))
    return blocks


def _monomial(table: CoefficientTable, e: tuple[int, ...], names: Mapping[str, str]) -> str:
    parts = [_show(n, names) if x == 1 else f"{_show(n, names)}^{x}" for n, x in zip(table.spec.names, e) if x]
    return "*".join(parts) or "1"


def render_table(table: CoefficientTable, fmt: str = "pretty", display_names: Optional[Mapping[str, str]] = None) -> str:
    names = display_names or {}
    if fmt == "json":
        return to_json(table, names)
    if fmt == "csv":
        return to_csv(table, names)
    return env.get_template("table.txt.j2").render(blocks=table_blocks(table, names))


def to_csv(table: CoefficientTable, display_names: Optional[Mapping[str, str]] = None) -> str:
    """Every grid cell (zeros included) in block, row, column order; long form lists nonzero entries."""
    names = display_names or {}
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([*(_show(n, names) for n in table.spec.names), "a"])
    axes = choose_axes(table)
    if axes is None:
        for e, a in sorted(table.entries.items()):
            if a:
                writer.writerow([*e, _cell(a)])
        return out.getvalue()
    for coords, grid in _grid_cells(table, axes):
        for r, cells in grid:
            for c, a in cells:
                point = {**coords, axes.row: r, axes.column: c}
                writer.writerow([*(point.get(n, 0) for n in table.spec.names), _cell(a)])
    return out.getvalue()


def to_json(table: CoefficientTable, display_names: Optional[Mapping[str, str]] = None) -> str:
    names = display_names or {}
    document = TableDocument(
        convention=table.convention,
        variables=[_show(n, names) for n in table.spec.names],
        entries=[(list(e), format_rational(a)) for e, a in sorted(table.entries.items()) if a],
    )
    return document.model_dump_json(indent=2) + "\n"


def render_series(series: TruncatedSeries, heading: str, fmt: str = "pretty", display_names: Optional[Mapping[str, str]] = None) -> str:
    names = display_names or {}
    shown = [_show(n, names) for n in series.spec.names]
    if fmt == "json":
        document = SeriesDocument.from_series(series)
        document = document.model_copy(
            update={"small": shown[: series.spec.n_small], "phase": shown[series.spec.n_small :]}
        )
        return document.model_dump_json(indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([*shown, "coefficient"])
        for e, c in series.sorted_terms():
            writer.writerow([*e, format_rational(c)])
        return out.getvalue()
    terms = series.sorted_terms()
    width = max((len(str(c)) for _, c in terms), default=1)
    lines = [f"{str(c).rjust(width)}  {' '.join(str(x) for x in e)}" for e, c in terms]
    return env.get_template("series.txt.j2").render(heading=heading, names=shown, lines=lines)


def render_reports(reports: list[VerificationReport], fmt: str = "pretty") -> str:
    if fmt == "json":
        return json.dumps([r.model_dump(exclude_none=True) for r in reports], indent=2) + "\n"
    return env.get_template("report.txt.j2").render(reports=reports)
