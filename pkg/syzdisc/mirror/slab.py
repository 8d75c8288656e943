from typing import Optional

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from syzdisc.errors import FramingError
from syzdisc.geometry.toric import Frame, ToricCYData
from syzdisc.mirror.mirror_map import MirrorMap, compute_mirror_map, delta_series, g_series
from syzdisc.series.kernel import UV, TruncatedSeries, Truncation, VariableSpec, embed

SOLVING_VARIABLE = "z1"


class SlabTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(description="Point index i")
    exponents: tuple[int, ...] = Field(description="z-exponent vector w_i with frame^T w_i = v_i - v_b")
    charge: tuple[int, ...] = Field(description="Kähler exponent vector of the curve class carried by the term")


class SlabFunction(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    series: TruncatedSeries = Field(description="f in the Kähler variables, uv and z1..z_{n-1}")
    frame: Optional[Frame] = Field(default=None, description="Frame of a toric slab; None for the special geometries")
    provenance: tuple[SlabTerm, ...] = Field(default=(), description="One entry per lattice point")

    @property
    def kahler_names(self) -> tuple[str, ...]:
        return tuple(name for name in self.series.spec.small_names if name != UV)


def slab_spec(kahler_names: tuple[str, ...], n_phase: int) -> VariableSpec:
    return VariableSpec(small_names=(*kahler_names, UV), phase_names=tuple(f"z{j + 1}" for j in range(n_phase)))


def slab_function(data: ToricCYData, frame: Frame, trunc: Truncation, mirror: Optional[MirrorMap] = None) -> SlabFunction:
    """f = sum_i (1 + delta_i(q)) q^{[C_i]} z^{w_i} with the basis-disc areas absorbed into the z's.

    The mirror map defaults to order ``small_total_max``; pass one explicitly to reuse it.
    """
    spec = slab_spec(data.kahler_names, data.n - 1)
    if mirror is None:
        mirror = compute_mirror_map(data, max(trunc.small_total_max, 1))
    order = mirror.order
    base = data.points[frame.base_index]

    f = TruncatedSeries.zero(spec, trunc)
    provenance = []
    for i, point in enumerate(data.points):
        w = frame.coordinates(tuple(x - y for x, y in zip(point, base)))
        k = data.class_index(i)
        charge = tuple(1 if k == j else 0 for j in range(data.n_classes))
        term = TruncatedSeries(spec, trunc, {(*charge, 0, *w): 1})
        if term.is_zero():
            raise FramingError(f"truncation cannot hold the slab term of point {i} (q^{charge} z^{w}); raise z_window")
        if not g_series(data, i, order).is_zero():
            term = term * (1 + embed(delta_series(data, i, order, mirror), spec, trunc))
        f = f + term
        provenance.append(SlabTerm(index=i, exponents=w, charge=charge))

    slab = SlabFunction(series=f, frame=frame, provenance=tuple(provenance))
    validate_slab(slab.series)
    logger.info(f"slab function assembled with {len(f)} terms over {spec.names}")
    return slab


def validate_slab(f: TruncatedSeries) -> None:
    """Check the working-region slope and that the q-free part is A + B*z1 with B(0) != 0."""
    spec, trunc = f.spec, f.trunc
    if SOLVING_VARIABLE not in spec.phase_names:
        raise FramingError(f"slab function must contain the solving variable {SOLVING_VARIABLE}")
    solving = spec.index(SOLVING_VARIABLE)
    ns = spec.n_small
    linear_constant = 0
    for e, c in f.terms.items():
        s = sum(e[:ns])
        if any(x < -trunc.phase_slope * s for x in e[ns:]):
            raise FramingError(f"term {dict(zip(spec.names, e))} has phase exponents below -{trunc.phase_slope} * (small degree)")
        if s:
            continue
        if e[solving] not in (0, 1) or any(x < 0 for x in e[ns:]):
            raise FramingError(f"unsupported framing: q-free term {dict(zip(spec.names, e))} is not linear in {SOLVING_VARIABLE}")
        if e[solving] == 1 and not any(x for j, x in enumerate(e) if j != solving):
            linear_constant = c
    if not linear_constant:
        raise FramingError(f"unsupported framing: the q-free coefficient of {SOLVING_VARIABLE} has no constant term")
