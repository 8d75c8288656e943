import pytest

from syzdisc.geometry.builtin import BUILTIN_GEOMETRIES
from syzdisc.series.kernel import UV, TruncatedSeries, Truncation, embed, relabel
from syzdisc.special.surfaces import (
    abelian_family_mirror,
    abelian_symmetry_holds,
    local_surface_mirror,
    triple_product_check,
)
from syzdisc.workflows.pipeline import build_slab


@pytest.fixture(scope="module")
def surface():
    return local_surface_mirror(Truncation(small_total_max=4, z_window=1))


@pytest.fixture(scope="module")
def abelian():
    return build_slab(BUILTIN_GEOMETRIES["abelian-family"]).slab.series


@pytest.mark.parametrize("q_max", [0, 1, 3, 5])
def test_triple_product(q_max):
    assert triple_product_check(Truncation(small_total_max=q_max))


def test_surface_low_orders(surface):
    f = surface.series
    assert f.spec.phase_names == ("z1",)
    assert [f.coefficient({"z1": j}) for j in range(-1, 3)] == [0, 1, 1, 0]
    assert [f.coefficient({"q": 1, "z1": j}) for j in range(-1, 3)] == [1, 1, 1, 1]
    assert f.coefficient({UV: 1}) == 0


def test_surface_window_is_widened(surface):
    # q^{k(k-1)/2} z^k with k(k-1)/2 <= 4 needs z^3
    assert surface.series.trunc.z_window == 3
    assert surface.series.coefficient({"q": 3, "z1": 3}) != 0


def test_abelian_q_free_part(abelian):
    spec = abelian.spec
    assert spec.small_names == ("q1", "q2", "qs", UV)
    assert spec.phase_names == ("z1", "z2")
    q_free = TruncatedSeries(spec, abelian.trunc, {e: c for e, c in abelian.terms.items() if not any(e[:3])})
    z1, z2 = (TruncatedSeries.variable(spec, abelian.trunc, n) for n in ("z1", "z2"))
    assert q_free == 1 + z1 + z2
    assert abelian.coefficient({"qs": 1, "z1": 1, "z2": 1}) == 1
    assert abelian.coefficient({"q1": 1, "qs": 1, "z2": 2}) == 1
    assert abelian.coefficient({"q1": 1, "z2": 2}) == 0


def test_abelian_symmetry(abelian):
    assert abelian_symmetry_holds(abelian)
    broken = abelian + TruncatedSeries.monomial(abelian.spec, abelian.trunc, {"q1": 1, "z1": 1})
    assert not abelian_symmetry_holds(broken)


def test_delta_factor_is_symmetric():
    mirror = abelian_family_mirror(BUILTIN_GEOMETRIES["abelian-family"].truncation.to_truncation(("q1", "q2", "qs")))
    delta = mirror.delta
    assert delta.constant_term() == 1
    assert embed(relabel(delta, {"q1": "q2", "q2": "q1"}), delta.spec) == delta


if __name__ == "__main__":
    pytest.main()
