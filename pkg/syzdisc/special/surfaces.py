"""Mirrors given directly as series rather than through toric data.

* the local surface (d = 1 case of the A-type quotient), an infinite product
  cut at the truncation;
* the abelian-surface family, a genus-two theta sum times the constant
  Delta(Omega).
"""

from itertools import product

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from syzdisc.errors import SeriesError
from syzdisc.mirror.slab import SlabFunction, validate_slab
from syzdisc.series.kernel import (
    UV,
    TruncatedSeries,
    Truncation,
    VariableSpec,
    embed,
    exp_series,
    extract,
    invert,
    log_series,
    relabel,
)

SURFACE_KAHLER = ("q",)
ABELIAN_KAHLER = ("q1", "q2", "qs")


class SurfaceMirror(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    series: TruncatedSeries = Field(description="prod_{i>=1}(1 + q^i z^-1) prod_{j>=0}(1 + q^j z), truncated")

    def as_slab(self) -> SlabFunction:
        validate_slab(self.series)
        return SlabFunction(series=self.series)


class AbelianFamilyMirror(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    series: TruncatedSeries = Field(description="Delta(Omega) times the genus-two theta sum, truncated")
    delta: TruncatedSeries = Field(description="Delta(Omega) in q1, q2, qs")

    def as_slab(self) -> SlabFunction:
        validate_slab(self.series)
        return SlabFunction(series=self.series)


def _kahler_cap(trunc: Truncation, names: tuple[str, ...]) -> int:
    cap = trunc.group_cap(names)
    return trunc.small_total_max if cap is None else cap


def _surface_truncation(trunc: Truncation) -> Truncation:
    # the theta terms q^{k(k-1)/2} z^k must all fit: widen the window to the largest such k
    q_max = _kahler_cap(trunc, SURFACE_KAHLER)
    k = 1
    while (k + 1) * k // 2 <= q_max:
        k += 1
    return trunc.model_copy(update={"z_window": max(trunc.z_window, k)})


def surface_spec(with_uv: bool = True) -> VariableSpec:
    return VariableSpec(small_names=(*SURFACE_KAHLER, UV) if with_uv else SURFACE_KAHLER, phase_names=("z1",))


def _surface_product(spec: VariableSpec, trunc: Truncation) -> TruncatedSeries:
    q_max = _kahler_cap(trunc, SURFACE_KAHLER)
    q = spec.index("q")
    z = spec.index("z1")
    width = len(spec.names)

    def factor(q_exp: int, z_exp: int) -> TruncatedSeries:
        e = [0] * width
        e[q], e[z] = q_exp, z_exp
        return TruncatedSeries(spec, trunc, {(0,) * width: 1, tuple(e): 1})

    result = TruncatedSeries.one(spec, trunc)
    for i in range(1, q_max + 1):
        result = result * factor(i, -1)
    for j in range(q_max + 1):
        result = result * factor(j, 1)
    return result


def local_surface_mirror(trunc: Truncation) -> SurfaceMirror:
    """Finite product over i, j <= q cap; the z window is widened so no retained theta term is lost."""
    trunc = _surface_truncation(trunc)
    spec = surface_spec()
    series = _surface_product(spec, trunc)
    logger.info(f"local surface mirror: {len(series)} terms")
    return SurfaceMirror(series=series)


def triple_product_check(trunc: Truncation) -> bool:
    """Product form against prod 1/(1 - q^k) * sum_l q^{l(l-1)/2} z^l, term by term."""
    trunc = _surface_truncation(trunc)
    spec = surface_spec(with_uv=False)
    q_max = _kahler_cap(trunc, SURFACE_KAHLER)
    lhs = _surface_product(spec, trunc)

    euler = TruncatedSeries.one(spec, trunc)
    for k in range(1, q_max + 1):
        euler = euler * invert(1 - TruncatedSeries(spec, trunc, {(k, 0): 1}))
    # l(l-1)/2 <= q_max forces |l| <= q_max + 1
    theta = {(ell * (ell - 1) // 2, ell): 1 for ell in range(-q_max - 1, q_max + 2)}
    rhs = euler * TruncatedSeries(spec, trunc, theta)
    return lhs == rhs


def _half_lattice_delta(caps: tuple[int, int, int], total: int) -> TruncatedSeries:
    """S = sum_{j>=2} (-1)^j/j sum over j-tuples of nonzero l in Z^2 summing to 0 of prod m(l_i).

    m(l) = q1^{x^2/2} q2^{y^2/2} qs^{(x+y)^2/2} for l = (x, y), which is exp(pi i l Omega l^t) after
    q_tau = q1 qs and q_rho = q2 qs. Exponents are carried doubled in h1, h2, hs and the lattice sum is
    tracked by Laurent variables y1, y2, so the tuple sum is [y^0] of -log(1 + P) with P = sum m(l) y^l.
    Every nonzero l has doubled degree x^2 + y^2 + (x+y)^2 >= 2, so only j <= total tuples survive the caps,
    and |x| <= x^2 keeps the lattice exponents inside the working region.
    """
    half = VariableSpec(small_names=("h1", "h2", "hs"), phase_names=("y1", "y2"))
    trunc = Truncation(small_total_max=2 * total, per_small_max=dict(zip(half.small_names, (2 * c for c in caps))), z_window=0)
    bound = max(caps) + 1
    terms = {}
    for x, y in product(range(-2 * bound, 2 * bound + 1), repeat=2):
        if (x, y) != (0, 0):
            terms[(x * x, y * y, (x + y) * (x + y), x, y)] = 1
    p = TruncatedSeries(half, trunc, terms)
    s = -extract(log_series(1 + p), {"y1": 0, "y2": 0})
    out = {}
    for e, c in s.terms.items():
        if any(x % 2 for x in e):
            raise SeriesError(f"odd doubled exponent {e} in the lattice sum")
        out[tuple(x // 2 for x in e)] = c
    trunc = Truncation(small_total_max=total, per_small_max=dict(zip(ABELIAN_KAHLER, caps)))
    return TruncatedSeries(VariableSpec(small_names=ABELIAN_KAHLER), trunc, out)


def abelian_spec() -> VariableSpec:
    return VariableSpec(small_names=(*ABELIAN_KAHLER, UV), phase_names=("z1", "z2"))


def abelian_family_mirror(trunc: Truncation) -> AbelianFamilyMirror:
    """Delta(Omega) * sum_{(j,k)} qs^{(j+k)(j+k-1)/2} q2^{j(j-1)/2} q1^{k(k-1)/2} z1^j z2^k, truncated."""
    spec = abelian_spec()
    total = _kahler_cap(trunc, ABELIAN_KAHLER)
    caps = tuple(min(c, total) if (c := trunc.cap(name)) is not None else total for name in ABELIAN_KAHLER)
    delta = exp_series(_half_lattice_delta(caps, total))

    # j(j-1)/2 <= cap forces |j| <= cap + 1
    bound = max(caps) + 1
    theta = {}
    for j, k in product(range(-bound, bound + 2), repeat=2):
        n = j + k
        theta[(k * (k - 1) // 2, j * (j - 1) // 2, n * (n - 1) // 2, 0, j, k)] = 1
    series = embed(delta, spec, trunc) * TruncatedSeries(spec, trunc, theta)
    logger.info(f"abelian family mirror: Delta has {len(delta)} terms, mirror has {len(series)} terms")
    return AbelianFamilyMirror(series=series, delta=delta)


def abelian_symmetry_holds(series: TruncatedSeries) -> bool:
    """Invariance under q1 <-> q2, z1 <-> z2."""
    swapped = relabel(series, {"q1": "q2", "q2": "q1", "z1": "z2", "z2": "z1"})
    return embed(swapped, series.spec) == series
