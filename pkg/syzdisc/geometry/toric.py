"""Combinatorial data of a toric Calabi-Yau manifold.

Lattice points are given in Z^{n-1}; the height-one coordinate is implicit,
so ``v_i = (p_i, 1)``. Indices into ``points`` are 0-based throughout.
"""

from itertools import product
from typing import Optional, Sequence

import sympy
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field
from toolz import memoize

from syzdisc.errors import GeometryError


class EffectiveClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    multiplicities: tuple[int, ...] = Field(description="Multiplicity d_k of each curve-class generator")

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)


class ToricCYData(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(description="Complex dimension")
    points: tuple[tuple[int, ...], ...] = Field(description="Lattice points of the polytope, height coordinate implicit")
    sigma: tuple[int, ...] = Field(description="Indices of the basis cone")
    a_matrix: tuple[tuple[int, ...], ...] = Field(description="Row i expresses v_i in the sigma basis")
    curve_points: tuple[int, ...] = Field(description="Point index i of each curve class C_i, in order")
    pairing: tuple[tuple[int, ...], ...] = Field(description="pairing[j][k] = D_j . C_k")

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def n_classes(self) -> int:
        return len(self.curve_points)

    @property
    def kahler_names(self) -> tuple[str, ...]:
        if self.n_classes == 1:
            return ("q",)
        return tuple(f"q{k + 1}" for k in range(self.n_classes))

    @property
    def mirror_names(self) -> tuple[str, ...]:
        return tuple(name.upper() for name in self.kahler_names)

    def class_index(self, point: int) -> Optional[int]:
        """Curve class carried by a point, or None for basis points."""
        try:
            return self.curve_points.index(point)
        except ValueError:
            return None

    def divisor_degree(self, j: int, alpha: EffectiveClass) -> int:
        """Intersection number D_j . alpha."""
        return sum(d * c for d, c in zip(alpha.multiplicities, self.pairing[j]))


class Frame(BaseModel):
    model_config = ConfigDict(frozen=True)

    base_index: int = Field(description="Chamber base point b; must lie in sigma")
    frame_matrix: tuple[tuple[int, ...], ...] = Field(description="Rows are the basis v'_1..v'_{n-1} in ambient coordinates")

    def coordinates(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Integer w with frame_matrix^T w = vector."""
        inverse = _transpose_inverse(self.frame_matrix)
        w = inverse * sympy.Matrix(list(vector))
        if any(not x.is_integer for x in w):
            raise GeometryError(f"{tuple(vector)} is not an integral combination of the frame {self.frame_matrix}")
        return tuple(int(x) for x in w)


def _unimodular(rows: Sequence[Sequence[int]]) -> bool:
    matrix = sympy.Matrix([list(r) for r in rows])
    return matrix.is_square and abs(matrix.det()) == 1


@memoize
def _transpose_inverse(frame_matrix: tuple[tuple[int, ...], ...]) -> sympy.Matrix:
    return sympy.Matrix([list(r) for r in frame_matrix]).T.inv()


def build_toric_data(points: Sequence[Sequence[int]], sigma: Sequence[int]) -> ToricCYData:
    points = tuple(tuple(int(x) for x in p) for p in points)
    sigma = tuple(int(i) for i in sigma)
    if not points:
        raise GeometryError("no lattice points given")
    n = len(points[0]) + 1
    if any(len(p) != n - 1 for p in points):
        raise GeometryError("all points must have the same dimension")
    if len(set(points)) != len(points):
        raise GeometryError("duplicate lattice points")
    if len(sigma) != n or len(set(sigma)) != n or any(not 0 <= i < len(points) for i in sigma):
        raise GeometryError(f"sigma must select {n} distinct point indices, got {sigma}")

    basis = sympy.Matrix([[*points[i], 1] for i in sigma]).T
    if abs(basis.det()) != 1:
        raise GeometryError(f"sigma {sigma} does not span a unimodular cone (det {basis.det()})")
    inverse = basis.inv()

    a_matrix = []
    for i, p in enumerate(points):
        row = inverse * sympy.Matrix([*p, 1])
        if any(not x.is_integer for x in row):
            raise GeometryError(f"point {i} is not in the lattice generated by sigma")
        a_matrix.append(tuple(int(x) for x in row))

    curve_points = tuple(i for i in range(len(points)) if i not in sigma)
    pairing = []
    for j in range(len(points)):
        row = []
        for i in curve_points:
            value = 1 if j == i else 0
            if j in sigma:
                value -= a_matrix[i][sigma.index(j)]
            row.append(value)
        pairing.append(tuple(row))

    data = ToricCYData(n=n, points=points, sigma=sigma, a_matrix=tuple(a_matrix), curve_points=curve_points, pairing=tuple(pairing))
    _check_invariants(data)
    logger.debug(f"toric data: n={n} m={data.m} classes={data.n_classes}")
    return data


def _check_invariants(data: ToricCYData) -> None:
    for i, row in enumerate(data.a_matrix):
        if sum(row) != 1:
            raise GeometryError(f"a-row of point {i} does not sum to 1")
    for pos, i in enumerate(data.sigma):
        unit = tuple(1 if ell == pos else 0 for ell in range(data.n))
        if data.a_matrix[i] != unit:
            raise GeometryError(f"a-row of basis point {i} is not a unit vector")
    for k in range(data.n_classes):
        if sum(data.pairing[j][k] for j in range(data.m)) != 0:
            raise GeometryError(f"curve class {k} does not pair to zero with the anticanonical divisor")


def enumerate_effective(data: ToricCYData, max_degree: int) -> list[EffectiveClass]:
    """All multiplicity vectors with total degree <= max_degree, lexicographic order."""
    if max_degree < 0:
        raise GeometryError("max_degree must be >= 0")
    return [
        EffectiveClass(multiplicities=d)
        for d in product(range(max_degree + 1), repeat=data.n_classes)
        if sum(d) <= max_degree
    ]


def standard_frame(data: ToricCYData, base_index: int) -> Frame:
    """Chart frame v'_j = v_{sigma_j} - v_b over the other basis points, in sigma order."""
    base = data.points[base_index]
    rows = tuple(tuple(x - y for x, y in zip(data.points[i], base)) for i in data.sigma if i != base_index)
    return build_frame(data, base_index, rows)


def build_frame(data: ToricCYData, base_index: int, frame_matrix: Optional[Sequence[Sequence[int]]] = None) -> Frame:
    if base_index not in data.sigma:
        raise GeometryError(f"chamber base {base_index} must be one of the sigma indices {data.sigma}")
    if frame_matrix is None:
        return standard_frame(data, base_index)
    rows = tuple(tuple(int(x) for x in r) for r in frame_matrix)
    if len(rows) != data.n - 1 or any(len(r) != data.n - 1 for r in rows):
        raise GeometryError(f"frame must be a {data.n - 1}x{data.n - 1} integer matrix")
    if not _unimodular(rows):
        raise GeometryError(f"frame {rows} is not unimodular")
    return Frame(base_index=base_index, frame_matrix=rows)
