"""Solve uv = f(-Z, z2, ...) for Z = e^{x1}.

The nontrivial spin structure is built in as the substitution z1 = -Z: with
z1 = +Z the degree-zero equation has constant term A(0) + B(0) != 0 and no
solution with Z = 1 + (positive valuation) exists. :func:`untwisted_obstruction`
reports that constant instead of solving.
"""

from fractions import Fraction
from math import ceil, log2
from typing import Optional

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from syzdisc.errors import FramingError, SolverError
from syzdisc.mirror.slab import SOLVING_VARIABLE, SlabFunction, validate_slab
from syzdisc.series.kernel import UV, TruncatedSeries, Truncation, VariableSpec, derivative, embed, invert, substitute


class GluingSolution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    Z: TruncatedSeries = Field(description="Z = -z1 = e^{x1} in the small variables and z2..z_{n-1}")
    residual_checked: bool = Field(description="f(-Z, ...) - uv vanished identically at the truncation")
    rounds: int = Field(default=0, description="Newton rounds used")


class SpinDiagnostic(BaseModel):
    twisted_constant: str = Field(description="Constant term A(0) - B(0) of the degree-zero equation with z1 = -Z")
    untwisted_constant: str = Field(description="Constant term A(0) + B(0) of the degree-zero equation with z1 = +Z")
    untwisted_solvable: bool = Field(description="Whether z1 = +Z admits a solution Z = 1 + O(valuation > 0)")
    message: str


def solution_spec(spec: VariableSpec) -> VariableSpec:
    return VariableSpec(small_names=spec.small_names, phase_names=tuple(n for n in spec.phase_names if n != SOLVING_VARIABLE))


def _linear_parts(f: TruncatedSeries, target: VariableSpec) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Split the q-free part of f as A + B*z1, with A and B in the target variables."""
    solving = f.spec.index(SOLVING_VARIABLE)
    ns = f.spec.n_small
    parts: tuple[dict, dict] = ({}, {})
    for e, c in f.terms.items():
        if any(e[:ns]):
            continue
        rest = e[:solving] + e[solving + 1 :]
        parts[e[solving]][rest] = c
    return TruncatedSeries(target, f.trunc, parts[0]), TruncatedSeries(target, f.trunc, parts[1])


def max_newton_rounds(trunc: Truncation) -> int:
    return ceil(log2(trunc.small_total_max + 1)) + 1


def residual(f: TruncatedSeries, Z: TruncatedSeries) -> TruncatedSeries:  # noqa: N803
    """f(-Z, z2, ...) - uv in the solution variables."""
    value = substitute(f, {SOLVING_VARIABLE: -Z}, spec=Z.spec, trunc=Z.trunc)
    if UV in Z.spec.small_names:
        value = value - TruncatedSeries.variable(Z.spec, Z.trunc, UV)
    return value


def solve_gluing(slab: SlabFunction, trunc: Optional[Truncation] = None) -> GluingSolution:
    """Newton iteration Z <- Z - F(Z)/F'(Z) on F(Z) = f(-Z, ...) - uv, seeded by the q-free solution A/B."""
    f = slab.series if trunc is None else embed(slab.series, slab.series.spec, trunc)
    validate_slab(f)
    target = solution_spec(f.spec)
    a_part, b_part = _linear_parts(f, target)
    if not b_part.constant_term():
        raise FramingError("unsupported framing: F'(Z) has no unit constant term")
    Z = a_part * invert(b_part)  # noqa: N806
    if Z.constant_term() != 1:
        raise FramingError(f"seed has constant term {Z.constant_term()}, expected 1")
    fz = derivative(f, SOLVING_VARIABLE)

    limit = max_newton_rounds(f.trunc)
    rounds = 0
    value = residual(f, Z)
    while not value.is_zero() and rounds < limit:
        slope = -substitute(fz, {SOLVING_VARIABLE: -Z}, spec=target, trunc=f.trunc)
        if not slope.constant_term():
            raise FramingError("unsupported framing: F'(Z) has no unit constant term")
        Z = Z - value * invert(slope)  # noqa: N806
        rounds += 1
        value = residual(f, Z)
        logger.debug(f"newton round {rounds}: {len(Z)} terms, residual {len(value)} terms")
    if not value.is_zero():
        raise SolverError(f"residual still has {len(value)} terms after {rounds} Newton rounds")
    logger.info(f"gluing equation solved in {rounds} Newton rounds, {len(Z)} terms")
    return GluingSolution(Z=Z, residual_checked=True, rounds=rounds)


def solve_at_uv_zero(slab: SlabFunction) -> GluingSolution:
    """Solve f(-Z, ...) = 0 directly by capping uv at degree 0."""
    trunc = slab.series.trunc
    caps = dict(trunc.per_small_max)
    caps[UV] = 0
    return solve_gluing(slab, trunc.model_copy(update={"per_small_max": tuple(sorted(caps.items()))}))


def untwisted_obstruction(slab: SlabFunction) -> SpinDiagnostic:
    """Leading constant of the gluing equation with z1 = +Z and z2.. of positive valuation."""
    validate_slab(slab.series)
    target = solution_spec(slab.series.spec)
    a_part, b_part = _linear_parts(slab.series, target)
    a0, b0 = a_part.constant_term(), b_part.constant_term()
    untwisted = a0 + b0
    twisted = a0 - b0
    solvable = untwisted == 0
    if solvable:
        message = "untwisted equation is solvable at degree zero"
    else:
        message = f"untwisted equation has leading constant {untwisted}; uv = {untwisted} + ... has no solution of positive valuation"
    return SpinDiagnostic(
        twisted_constant=str(Fraction(twisted)), untwisted_constant=str(Fraction(untwisted)), untwisted_solvable=solvable, message=message
    )
