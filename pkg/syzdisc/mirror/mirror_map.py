from fractions import Fraction
from math import factorial, prod

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from syzdisc.errors import GeometryError, SeriesError
from syzdisc.geometry.toric import ToricCYData, enumerate_effective
from syzdisc.series.kernel import TruncatedSeries, Truncation, VariableSpec, exp_series, substitute


class MirrorMap(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    forward: tuple[TruncatedSeries, ...] = Field(description="q_k as series in the complex parameters Q")
    inverse: tuple[TruncatedSeries, ...] = Field(description="Q_k as series in the Kähler parameters q")
    order: int = Field(description="Total degree truncation")


def mirror_spec(data: ToricCYData) -> VariableSpec:
    return VariableSpec(small_names=data.mirror_names)


def kahler_spec(data: ToricCYData) -> VariableSpec:
    return VariableSpec(small_names=data.kahler_names)


def g_series(data: ToricCYData, i: int, order: int) -> TruncatedSeries:
    """Hypergeometric series g_i(Q) summed over effective classes up to total degree ``order``.

    A class alpha contributes when D_i.alpha < 0 and D_j.alpha >= 0 for j != i, with coefficient
    (-1)^{D_i.alpha} (-D_i.alpha - 1)! / prod_{j != i} (D_j.alpha)!.
    """
    if not 0 <= i < data.m:
        raise GeometryError(f"divisor index {i} out of range 0..{data.m - 1}")
    if order < 0:
        raise GeometryError("order must be >= 0")
    terms = {}
    for alpha in enumerate_effective(data, order):
        d_i = data.divisor_degree(i, alpha)
        if d_i >= 0:
            continue
        others = [data.divisor_degree(j, alpha) for j in range(data.m) if j != i]
        if any(x < 0 for x in others):
            continue
        terms[alpha.multiplicities] = Fraction((-1) ** (-d_i) * factorial(-d_i - 1), prod(factorial(x) for x in others))
    return TruncatedSeries(mirror_spec(data), Truncation(small_total_max=order), terms)


def _exponent_series(data: ToricCYData, order: int) -> list[TruncatedSeries]:
    """h_k = sum_i (C_k . D_i) g_i, the exponent of the mirror map in class k."""
    spec, trunc = mirror_spec(data), Truncation(small_total_max=order)
    g = [g_series(data, i, order) for i in range(data.m)]
    out = []
    for k in range(data.n_classes):
        h = TruncatedSeries.zero(spec, trunc)
        for i in range(data.m):
            if data.pairing[i][k]:
                h = h + g[i].scale(data.pairing[i][k])
        out.append(h)
    return out


def compute_mirror_map(data: ToricCYData, order: int) -> MirrorMap:
    if order < 1:
        raise GeometryError("mirror map order must be >= 1")
    mspec, kspec = mirror_spec(data), kahler_spec(data)
    trunc = Truncation(small_total_max=order)
    exponents = _exponent_series(data, order)

    forward = tuple(
        TruncatedSeries.variable(mspec, trunc, name) * exp_series(-h) for name, h in zip(data.mirror_names, exponents)
    )

    q = [TruncatedSeries.variable(kspec, trunc, name) for name in data.kahler_names]
    inverse = list(q)
    for round_ in range(order):
        bindings = dict(zip(data.mirror_names, inverse))
        updated = [q_k * exp_series(substitute(h, bindings)) for q_k, h in zip(q, exponents)]
        stable = updated == inverse
        inverse = updated
        logger.debug(f"mirror map inversion round {round_ + 1}: {sum(len(s) for s in inverse)} terms")
        if stable:
            break

    mirror = MirrorMap(forward=forward, inverse=tuple(inverse), order=order)
    if not round_trip_holds(data, mirror):
        raise SeriesError("mirror map inversion did not reach a fixed point")
    logger.info(f"mirror map built at order {order} for {data.n_classes} curve classes")
    return mirror


def round_trip_holds(data: ToricCYData, mirror: MirrorMap) -> bool:
    """forward(inverse(q)) = q and inverse(forward(Q)) = Q up to the truncation order."""
    if not data.n_classes:
        return True
    to_q = dict(zip(data.mirror_names, mirror.inverse))
    to_mirror = dict(zip(data.kahler_names, mirror.forward))
    for k in range(data.n_classes):
        q_k = TruncatedSeries.variable(mirror.inverse[k].spec, mirror.inverse[k].trunc, data.kahler_names[k])
        mirror_k = TruncatedSeries.variable(mirror.forward[k].spec, mirror.forward[k].trunc, data.mirror_names[k])
        if substitute(mirror.forward[k], to_q) != q_k or substitute(mirror.inverse[k], to_mirror) != mirror_k:
            return False
    return True


def delta_series(data: ToricCYData, i: int, order: int, mirror: MirrorMap | None = None) -> TruncatedSeries:
    """delta_i(q) = exp(g_i(Q(q))) - 1."""
    mirror = mirror or compute_mirror_map(data, order)
    g = g_series(data, i, order)
    composed = substitute(g, dict(zip(data.mirror_names, mirror.inverse)), spec=kahler_spec(data), trunc=Truncation(small_total_max=order))
    return exp_series(composed) - 1


def projective_period(n: int, order: int, name: str = "Q") -> TruncatedSeries:
    """f(Q) = sum_{k>=1} (-1)^{nk} (nk)! / (k (k!)^n) Q^k, the local P^{n-1} period; g_1 = f/n there."""
    spec = VariableSpec(small_names=(name,))
    terms = {(k,): Fraction((-1) ** (n * k) * factorial(n * k), k * factorial(k) ** n) for k in range(1, order + 1)}
    return TruncatedSeries(spec, Truncation(small_total_max=order), terms)
