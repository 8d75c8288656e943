from fractions import Fraction

import pytest

from syzdisc.errors import GeometryError
from syzdisc.geometry.builtin import BUILTIN_GEOMETRIES
from syzdisc.geometry.toric import build_toric_data
from syzdisc.mirror.mirror_map import (
    compute_mirror_map,
    delta_series,
    g_series,
    mirror_spec,
    projective_period,
    round_trip_holds,
)
from syzdisc.series.kernel import TruncatedSeries, Truncation
from syzdisc.workflows.pipeline import toric_data_of


@pytest.fixture(scope="module")
def kp2():
    return toric_data_of(BUILTIN_GEOMETRIES["KP2-inner"])


@pytest.fixture(scope="module")
def kp3():
    return toric_data_of(BUILTIN_GEOMETRIES["KP3"])


@pytest.fixture(scope="module")
def kp2_mirror(kp2):
    return compute_mirror_map(kp2, 5)


@pytest.fixture(scope="module")
def kp3_mirror(kp3):
    return compute_mirror_map(kp3, 5)


def coefficients(series: TruncatedSeries, name: str, top: int) -> list[Fraction]:
    return [series.coefficient({name: k}) for k in range(1, top + 1)]


def test_kp2_hypergeometric_series(kp2):
    expected = TruncatedSeries(mirror_spec(kp2), Truncation(small_total_max=3), {(1,): -2, (2,): 15, (3,): Fraction(-560, 3)})
    assert g_series(kp2, 0, 3) == expected


@pytest.mark.parametrize("i", [1, 2, 3])
def test_g_vanishes_on_noncompact_divisors(kp2, i):
    assert g_series(kp2, i, 5).is_zero()


def test_g_is_the_projective_period(kp2, kp3):
    for data, n in ((kp2, 3), (kp3, 4)):
        assert g_series(data, 0, 5) == projective_period(n, 5).scale(Fraction(1, n)), f"g_0 != f/{n} for local P^{n - 1}"


def test_kp2_inverse_map(kp2_mirror):
    Q = kp2_mirror.inverse[0]
    assert coefficients(Q, "q", 2) == [1, 6]
    assert Q.constant_term() == 0


def test_kp2_open_invariants(kp2, kp2_mirror):
    delta = delta_series(kp2, 0, 5, kp2_mirror)
    assert coefficients(delta, "q", 5) == [-2, 5, -32, 286, -3038]
    assert delta.constant_term() == 0


def test_kp3_inverse_map_and_delta(kp3, kp3_mirror):
    assert coefficients(kp3_mirror.inverse[0], "q", 5) == [1, -24, -396, -39104, -4356750]
    assert coefficients(delta_series(kp3, 0, 5, kp3_mirror), "q", 4) == [6, 189, 14366, 1518750]


@pytest.mark.parametrize("name", ["C3", "KP2-inner", "KP3"])
def test_round_trip(name):
    data = toric_data_of(BUILTIN_GEOMETRIES[name])
    mirror = compute_mirror_map(data, 5)
    assert round_trip_holds(data, mirror)
    assert len(mirror.inverse) == data.n_classes


def test_two_parameter_round_trip():
    # local P1 x P1 style polygon, two curve classes
    data = build_toric_data([[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1]], [0, 1, 2])
    mirror = compute_mirror_map(data, 3)
    assert data.kahler_names == ("q1", "q2")
    assert round_trip_holds(data, mirror)


def test_invalid_orders(kp2):
    with pytest.raises(GeometryError):
        compute_mirror_map(kp2, 0)
    with pytest.raises(GeometryError):
        g_series(kp2, 7, 3)


if __name__ == "__main__":
    pytest.main()
