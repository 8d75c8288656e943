"""Literal reference values for the builtin geometries.

Values are stored as printed, never recomputed, so the corpus stays an
independent oracle. Table grids are written row by row exactly as laid out
in the source tables: rows run over a phase exponent (or uv order), columns
over the q order.
"""

from collections.abc import Sequence
from fractions import Fraction
from typing import Literal

import sympy
from pydantic import BaseModel, ConfigDict, Field, model_validator

from syzdisc.errors import CorpusError
from syzdisc.geometry.builtin import BUILTIN_GEOMETRIES, GeometryConfig
from syzdisc.series.kernel import UV

Target = Literal["table", "solution", "delta", "inverse_map"]
CheckName = Literal["residual", "round_trip", "triple_product", "abelian_symmetry", "inner_outer_q0", "integrality", "untwisted_obstruction"]


class ExpectedEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: Target = Field(description="Which computed object the value is read from")
    coordinates: dict[str, int] = Field(description="Exponent of each named variable; unnamed variables are 0")
    value: str = Field(description="Exact rational as printed, e.g. 838/3")
    source: str = Field(description="Table or display the value was transcribed from")
    advisory: bool = Field(default=False, description="Mismatches are reported but do not fail verification")

    @property
    def rational(self) -> Fraction:
        return Fraction(self.value)


class ExpectedCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    geometry: GeometryConfig = Field(description="Builtin geometry, used as-is without environment overrides")
    delta_index: int = Field(default=0, description="Point index whose 1 + delta is listed")
    entries: tuple[ExpectedEntry, ...] = ()
    checks: tuple[CheckName, ...] = ()

    @model_validator(mode="after")
    def _entries_inside_truncation(self) -> "ExpectedCase":
        t = self.geometry.truncation
        for entry in self.entries:
            if entry.target in ("delta", "inverse_map"):
                if entry.coordinates.get("q", 0) > self.geometry.order:
                    raise CorpusError(f"{self.name}: {entry.coordinates} exceeds mirror order {self.geometry.order}")
                continue
            kahler = sum(x for name, x in entry.coordinates.items() if name.startswith("q"))
            phase = [x for name, x in entry.coordinates.items() if name.startswith("z")]
            if kahler > t.q_total or entry.coordinates.get(UV, 0) > t.uv_max or any(abs(x) > t.z_window for x in phase):
                raise CorpusError(f"{self.name}: entry {entry.coordinates} lies outside the declared truncation")
        return self

    @property
    def strict_entries(self) -> tuple[ExpectedEntry, ...]:
        return tuple(e for e in self.entries if not e.advisory)


def grid(
    rows: Sequence[int],
    row_var: str,
    cols: Sequence[int],
    col_var: str,
    values: Sequence[Sequence[str]],
    source: str,
    fixed: dict[str, int] | None = None,
    target: Target = "table",
    advisory: bool = False,
) -> list[ExpectedEntry]:
    if len(values) != len(rows) or any(len(row) != len(cols) for row in values):
        raise CorpusError(f"{source}: grid shape does not match {len(rows)} x {len(cols)}")
    out = []
    for r, row in zip(rows, values):
        for c, value in zip(cols, row):
            coords = {**(fixed or {}), row_var: r, col_var: c}
            out.append(ExpectedEntry(target=target, coordinates=coords, value=value, source=source, advisory=advisory))
    return out


def series_entries(coefficients: Sequence[str], target: Target, source: str, var: str = "q", start: int = 1) -> list[ExpectedEntry]:
    return [
        ExpectedEntry(target=target, coordinates={var: k}, value=value, source=source)
        for k, value in enumerate(coefficients, start=start)
    ]


def polynomial_entries(polynomial: str, gens: Sequence[str], fixed: dict[str, int], source: str, advisory: bool = False) -> list[ExpectedEntry]:
    """Every monomial of a printed polynomial, as table entries."""
    symbols = sympy.symbols(list(gens))
    poly = sympy.Poly(sympy.sympify(polynomial, rational=True), *symbols)
    return [
        ExpectedEntry(
            target="table",
            coordinates={**fixed, **dict(zip(gens, exps))},
            value=str(sympy.Rational(coeff)),
            source=source,
            advisory=advisory,
        )
        for exps, coeff in poly.terms()
    ]


def _c3() -> ExpectedCase:
    # Z = 1 + z2 - uv over z2 0..3, uv 0..2
    entries = grid(
        range(3),
        UV,
        range(4),
        "z2",
        [
            ["1", "1", "0", "0"],
            ["-1", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        source="C3 closed form",
        target="solution",
    )
    return ExpectedCase(name="C3", geometry=BUILTIN_GEOMETRIES["C3"], entries=tuple(entries), checks=("residual",))


_KP2_INNER = {
    # rows z2 = -3..4, columns q^0..q^3
    0: [
        ["0", "0", "0", "10/3"],
        ["0", "0", "3/2", "8"],
        ["0", "1", "2", "12"],
        ["0", "0", "0", "0"],
        ["1", "1", "5", "40"],
        ["1/2", "2", "27/2", "122"],
        ["1/3", "3", "27", "838/3"],
        ["1/4", "4", "47", "560"],
    ],
    1: [
        ["0", "0", "0", "20"],
        ["0", "0", "6", "80"],
        ["0", "2", "18", "218"],
        ["1", "4", "41", "520"],
        ["1", "8", "92", "1224"],
        ["1", "14", "189", "2704"],
        ["1", "22", "356", "5582"],
        ["1", "32", "623", "10828"],
    ],
    2: [
        ["0", "0", "0", "70"],
        ["0", "0", "15", "380"],
        ["0", "3", "66", "1320"],
        ["1/2", "10", "196", "3762"],
        ["1", "24", "489", "9544"],
        ["3/2", "48", "1080", "22128"],
        ["2", "85", "2170", "47600"],
        ["5/2", "138", "4041", "96050"],
    ],
}

_KP2_OUTER = {
    # rows z2 = 0..4, columns q^0..q^3
    0: [
        ["0", "0", "0", "0"],
        ["1", "2", "5", "32"],
        ["1/2", "2", "7", "42"],
        ["1/3", "3", "9", "164/3"],
        ["1/4", "4", "15", "80"],
    ],
    1: [
        ["1", "0", "0", "0"],
        ["1", "2", "5", "32"],
        ["1", "4", "14", "84"],
        ["1", "8", "27", "164"],
        ["1", "14", "56", "310"],
    ],
    2: [
        ["1/2", "0", "0", "0"],
        ["1", "2", "5", "32"],
        ["3/2", "6", "21", "126"],
        ["2", "15", "54", "328"],
        ["5/2", "32", "134", "760"],
    ],
}

_KP2_DELTA = ["-2", "5", "-32", "286", "-3038"]


def _kp2(name: str, blocks: dict[int, list[list[str]]], first_row: int, label: str) -> ExpectedCase:
    entries = []
    for uv_order, rows in blocks.items():
        rng = range(first_row, first_row + len(rows))
        entries += grid(rng, "z2", range(4), "q", rows, source=f"{label} table ord(uv)={uv_order}", fixed={UV: uv_order})
    entries += series_entries(_KP2_DELTA, "delta", source="K_P2 open GW generating function 1 + delta")
    checks = ("residual", "round_trip", "integrality", "inner_outer_q0")
    if name == "KP2-inner":
        checks = (*checks, "untwisted_obstruction")
    return ExpectedCase(name=name, geometry=BUILTIN_GEOMETRIES[name], entries=tuple(entries), checks=checks)


def _kp3() -> ExpectedCase:
    entries = series_entries(["1", "-24", "-396", "-39104", "-4356750"], "inverse_map", source="K_P3 inverse mirror map Q(q)")
    entries += series_entries(["6", "189", "14366", "1518750"], "delta", source="K_P3 1 + delta = exp(f(Q(q))/4)")
    # rows z2, columns z3, uv^0
    entries += grid(
        range(4),
        "z2",
        range(4),
        "z3",
        [
            ["0", "1", "1/2", "1/3"],
            ["1", "1", "1", "1"],
            ["1/2", "1", "3/2", "2"],
            ["1/3", "1", "2", "10/3"],
        ],
        source="K_P3 table ord(q)=0",
        fixed={"q": 0, UV: 0},
    )
    # higher q blocks are cross-checks only; see DESIGN.md
    entries += grid(
        range(-1, 3),
        "z2",
        range(-1, 3),
        "z3",
        [
            ["1", "2", "3", "4"],
            ["2", "6", "12", "20"],
            ["3", "12", "30", "60"],
            ["4", "20", "60", "140"],
        ],
        source="K_P3 table ord(q)=1",
        fixed={"q": 1, UV: 0},
        advisory=True,
    )
    entries += grid(
        range(-2, 3),
        "z2",
        range(-2, 3),
        "z3",
        [
            ["3/2", "6", "15", "30", "105/2"],
            ["6", "36", "108", "246", "480"],
            ["15", "108", "387", "1020", "2250"],
            ["30", "246", "1020", "3060", "7560"],
            ["105/2", "480", "2250", "7560", "20685"],
        ],
        source="K_P3 table ord(q)=2",
        fixed={"q": 2, UV: 0},
        advisory=True,
    )
    return ExpectedCase(name="KP3", geometry=BUILTIN_GEOMETRIES["KP3"], entries=tuple(entries), checks=("residual", "round_trip"))


def _local_surface() -> ExpectedCase:
    # rows uv^1..uv^5, columns q^0..q^5; the uv^0 row is identically zero and not listed
    entries = grid(
        range(1, 6),
        UV,
        range(6),
        "q",
        [
            ["1", "2", "5", "10", "20", "36"],
            ["1/2", "2", "7", "20", "105/2", "126"],
            ["1/3", "3", "18", "245/3", "315", "1071"],
            ["1/4", "4", "33", "192", "1815/2", "3696"],
            ["1/5", "5", "55", "410", "2415", "60252/5"],
        ],
        source="local surface table",
    )
    return ExpectedCase(
        name="local-surface-A0",
        geometry=BUILTIN_GEOMETRIES["local-surface-A0"],
        entries=tuple(entries),
        checks=("residual", "triple_product", "integrality"),
    )


_ABELIAN_BLOCKS = {
    -2: "(3/2*q1**2*q2**2 - 2*q1**2*q2 + 1/2*q1**2) + 4*q1**2*q2*qs + (39/2*q1**2*q2**2 - 1/2*q1**2)*qs**2",
    -1: (
        "(-q1 + q1*q2 - 2*q1**2*q2 + 3*q1**2*q2**2)"
        " + (q1 - q1**2 - 3*q1*q2 + 11*q1**2*q2 + 3*q1*q2**2)*qs"
        " + (q1**2 + 3*q1*q2 - 23*q1**2*q2 - 9*q1*q2**2 + 126*q1**2*q2**2)*qs**2"
    ),
    1: (
        "(6*q1**2*q2**2 - q1**2*q2 - 3*q1*q2**2 + 2*q1*q2 - q2 + 1)"
        " + (15*q1**2*q2 + 33*q1*q2**2 - 11*q1*q2 + q1 - 3*q2**2 + 3*q2 - 1)*qs"
        " + (600*q1**2*q2**2 - 62*q1**2*q2 + q1**2 - 126*q1*q2**2 + 23*q1*q2 - q1 + 9*q2**2 - 3*q2)*qs**2"
    ),
    2: (
        "(-21*q1**2*q2**2 + 2*q1**2*q2 + 12*q1*q2**2 - 4*q1*q2 - 3/2*q2**2 + 2*q2 - 1/2)"
        " + (-24*q1**2*q2 - 96*q1*q2**2 + 16*q1*q2 + 12*q2**2 - 4*q2)*qs"
        " + (-2577/2*q1**2*q2**2 + 78*q1**2*q2 - 1/2*q1**2 + 264*q1*q2**2 - 20*q1*q2 - 39/2*q2**2 + 1/2)*qs**2"
    ),
}


def _abelian() -> ExpectedCase:
    entries = []
    for power, block in _ABELIAN_BLOCKS.items():
        entries += polynomial_entries(
            block, ("q1", "q2", "qs"), {"z2": power, UV: 0}, source=f"abelian family display, w^{power}", advisory=True
        )
    return ExpectedCase(
        name="abelian-family",
        geometry=BUILTIN_GEOMETRIES["abelian-family"],
        entries=tuple(entries),
        checks=("residual", "abelian_symmetry"),
    )


EXPECTED_CASES: dict[str, ExpectedCase] = {
    case.name: case
    for case in (
        _c3(),
        _kp2("KP2-inner", _KP2_INNER, -3, "K_P2 inner brane"),
        _kp2("KP2-outer", _KP2_OUTER, 0, "K_P2 outer brane"),
        _kp3(),
        _local_surface(),
        _abelian(),
    )
}


def expected_case(name: str) -> ExpectedCase:
    try:
        return EXPECTED_CASES[name]
    except KeyError:
        raise CorpusError(f"unknown case {name!r}; known cases: {', '.join(EXPECTED_CASES)}") from None
