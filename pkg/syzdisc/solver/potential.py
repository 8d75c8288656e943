from collections.abc import Mapping
from fractions import Fraction
from typing import Optional

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from syzdisc.errors import AdmissibilityError, UnknownVariableError
from syzdisc.geometry.builtin import Convention
from syzdisc.mirror.slab import SlabFunction
from syzdisc.series.kernel import (
    UV,
    Exponents,
    TruncatedSeries,
    Truncation,
    VariableSpec,
    clip,
    derivative,
    embed,
    exp_series,
    integrate,
    log_series,
    restrict,
    substitute,
)
from syzdisc.solver.gluing import GluingSolution

CONVENTIONS: dict[str, str] = {
    "inner": "series = sum -a (-z)^j (-q)^k (uv)^l",
    "plain": "series = sum a z^j q^k (uv)^l",
    "negated": "series = sum -a z^j q^k (uv)^l",
    "twisted": "series = sum -a (-z)^j q^k (uv)^l",
}


class EquivariantPotential(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lambda_coefficient: TruncatedSeries = Field(description="log Z; the potential is lambda times this series")


class CoefficientTable(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    convention: Convention
    spec: VariableSpec
    trunc: Truncation
    entries: dict[Exponents, Fraction] = Field(description="a_{jkl} keyed by the full exponent vector over spec.names")

    def lookup(self, coordinates: Mapping[str, int]) -> Fraction:
        e = [0] * len(self.spec.names)
        for name, x in coordinates.items():
            e[self.spec.index(name)] = x
        return self.entries.get(tuple(e), Fraction(0))

    def reconstruct(self) -> TruncatedSeries:
        """Inverse transform back to the raw series."""
        return TruncatedSeries(self.spec, self.trunc, {e: a * convention_sign(self.convention, self.spec, e) for e, a in self.entries.items()})


class AVPotential(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    wrt: str
    series: TruncatedSeries = Field(description="Term-wise antiderivative of log Z at uv = 0, integration constant 0")
    logarithmic_terms: TruncatedSeries = Field(description="Terms of log Z with exponent -1 in the integration variable")


class ImmersedTorusPotential(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    f_part: TruncatedSeries = Field(description="The slab function")
    W: TruncatedSeries = Field(description="-u*v*h + h*f(z) with u, v, h formal variables")
    shape: str = "W = -u*v*h + h*f(z)"

    def partial(self, name: str) -> TruncatedSeries:
        return derivative(self.W, name)

    def critical_residual(self) -> TruncatedSeries:
        """dW/dh - (f - uv) in the W variables over the displayed window; zero by construction."""
        f = embed(self.f_part, self.W.spec, self.W.trunc)
        uv = TruncatedSeries.variable(self.W.spec, self.W.trunc, "u") * TruncatedSeries.variable(self.W.spec, self.W.trunc, "v")
        return clip(self.partial("h") - (f - uv))

    def equivariant(self, exp_order: int = 3) -> TruncatedSeries:
        """-u*v*h + h*f(e^{x_1}, ...) + sum_j x_j*lambda_j as a series in q, u, v, h, x_j, lambda_j."""
        phases = self.f_part.spec.phase_names
        kahler = tuple(n for n in self.f_part.spec.small_names if n != UV)
        xs = tuple(f"x{name[1:]}" for name in phases)
        lambdas = tuple(f"lambda{name[1:]}" for name in phases)
        q_total = self.f_part.trunc.group_cap(kahler)
        q_total = self.f_part.trunc.small_total_max if q_total is None else q_total
        spec = VariableSpec(small_names=(*kahler, "u", "v", "h", *xs, *lambdas))
        caps = {name: 1 for name in ("u", "v", "h", *lambdas)}
        trunc = Truncation(
            small_total_max=q_total + exp_order + 3,
            per_small_max=caps,
            group_max=((kahler, q_total), (xs, exp_order)),
        )
        bindings = {z: exp_series(TruncatedSeries.variable(spec, trunc, x)) for z, x in zip(phases, xs)}
        f_exp = substitute(self.f_part, bindings, spec=spec, trunc=trunc)
        u, v, h = (TruncatedSeries.variable(spec, trunc, name) for name in ("u", "v", "h"))
        result = -(u * v * h) + h * f_exp
        for x, lam in zip(xs, lambdas):
            result = result + TruncatedSeries.variable(spec, trunc, x) * TruncatedSeries.variable(spec, trunc, lam)
        return result


def convention_sign(convention: Convention, spec: VariableSpec, e: Exponents) -> int:
    """The factor s with a = s * c; it is an involution, so c = s * a as well."""
    if convention == "plain":
        return 1
    if convention == "negated":
        return -1
    ns = spec.n_small
    degree = sum(e[ns:])
    if convention == "inner":
        degree += sum(x for name, x in zip(spec.small_names, e) if name != UV)
    # parity, not a power: degrees may be negative
    return 1 if degree % 2 else -1


def equivariant_potential(sol: GluingSolution) -> EquivariantPotential:
    return EquivariantPotential(lambda_coefficient=log_series(sol.Z))


def coefficient_table(pot: EquivariantPotential, convention: Convention, window: Optional[int] = None) -> CoefficientTable:
    """Table entries a_{jkl} over the displayed phase window."""
    series = clip(pot.lambda_coefficient, window)
    entries = {e: c * convention_sign(convention, series.spec, e) for e, c in series.sorted_terms()}
    return CoefficientTable(convention=convention, spec=series.spec, trunc=series.trunc, entries=entries)


def av_potential(sol: GluingSolution, wrt: Optional[str] = None, strict: bool = False) -> AVPotential:
    """Term-wise integral of log Z|_{uv=0} in a phase variable; exponent -1 terms are reported separately."""
    spec = sol.Z.spec
    if wrt is None:
        if not spec.phase_names:
            raise UnknownVariableError("solution has no phase variable to integrate in")
        wrt = spec.phase_names[0]
    if wrt not in spec.phase_names:
        raise UnknownVariableError(f"{wrt!r} is not a phase variable of {spec.names}")
    log_z = log_series(sol.Z)
    if UV in spec.small_names:
        log_z = restrict(log_z, [UV])
    i = spec.index(wrt)
    logarithmic = {e: c for e, c in log_z.terms.items() if e[i] == -1}
    if logarithmic and strict:
        raise AdmissibilityError(f"log Z has {len(logarithmic)} terms with {wrt}^-1; they integrate to logarithms")
    regular = TruncatedSeries(spec, sol.Z.trunc, {e: c for e, c in log_z.terms.items() if e[i] != -1})
    logger.info(f"AV potential in {wrt}: {len(regular)} terms integrated, {len(logarithmic)} logarithmic terms reported")
    return AVPotential(wrt=wrt, series=integrate(regular, wrt), logarithmic_terms=TruncatedSeries(spec, sol.Z.trunc, logarithmic))


def immersed_torus_potential(slab: SlabFunction) -> ImmersedTorusPotential:
    f = slab.series
    kahler = tuple(n for n in f.spec.small_names if n != UV)
    q_total = f.trunc.group_cap(kahler)
    q_total = f.trunc.small_total_max if q_total is None else q_total
    spec = VariableSpec(small_names=(*kahler, "u", "v", "h"), phase_names=f.spec.phase_names)
    trunc = Truncation(
        small_total_max=q_total + 3,
        z_window=f.trunc.z_window,
        per_small_max={"u": 1, "v": 1, "h": 1},
        group_max=((kahler, q_total),),
        phase_slope=f.trunc.phase_slope,
    )
    u, v, h = (TruncatedSeries.variable(spec, trunc, name) for name in ("u", "v", "h"))
    W = -(u * v * h) + h * embed(f, spec, trunc)  # noqa: N806
    return ImmersedTorusPotential(f_part=f, W=W)
