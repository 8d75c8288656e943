import pytest

from syzdisc.errors import FramingError
from syzdisc.geometry.builtin import BUILTIN_GEOMETRIES
from syzdisc.geometry.toric import build_frame
from syzdisc.mirror.slab import slab_function, slab_spec, validate_slab
from syzdisc.series.kernel import UV, TruncatedSeries, Truncation
from syzdisc.workflows.pipeline import build_slab, toric_data_of

TRUNC = Truncation(small_total_max=3, z_window=3)


def slab_series(name: str) -> TruncatedSeries:
    return build_slab(BUILTIN_GEOMETRIES[name]).slab.series


def test_c3_slab():
    f = slab_series("C3")
    spec, trunc = f.spec, f.trunc
    z1, z2 = (TruncatedSeries.variable(spec, trunc, n) for n in ("z1", "z2"))
    assert f == 1 + z1 + z2
    assert spec.small_names == (UV,)


def test_kp2_inner_slab():
    stage = build_slab(BUILTIN_GEOMETRIES["KP2-inner"])
    f = stage.slab.series
    assert f.coefficient({"z1": 1}) == 1
    assert f.coefficient({"z2": 1}) == 1
    assert f.coefficient({"q": 1, "z1": -1, "z2": -1}) == 1
    # 1 + delta_0 sits on the compact divisor
    assert [f.coefficient({"q": k}) for k in range(4)] == [1, -2, 5, -32]
    assert [t.exponents for t in stage.slab.provenance] == [(0, 0), (1, 0), (0, 1), (-1, -1)]
    assert stage.slab.provenance[3].charge == (1,)


def test_kp2_outer_slab():
    f = slab_series("KP2-outer")
    assert f.constant_term() == 1
    assert f.coefficient({"z1": 1}) == 1
    assert f.coefficient({"q": 1, "z1": -1, "z2": 3}) == 1
    assert [f.coefficient({"q": k, "z2": 1}) for k in range(4)] == [1, -2, 5, -32]


def test_slab_from_explicit_frame():
    config = BUILTIN_GEOMETRIES["KP2-inner"]
    data = toric_data_of(config)
    frame = build_frame(data, 0, [[0, 1], [1, 0]])
    f = slab_function(data, frame, TRUNC).series
    assert f.coefficient({"z2": 1}) == 1
    assert f.coefficient({"q": 1, "z1": -1, "z2": -1}) == 1


def test_slab_term_outside_window():
    data = toric_data_of(BUILTIN_GEOMETRIES["KP2-outer"])
    frame = build_frame(data, 2, [[1, -1], [0, -1]])
    with pytest.raises(FramingError):
        slab_function(data, frame, Truncation(small_total_max=1, z_window=1, phase_slope=0))


@pytest.mark.parametrize(
    "terms",
    [
        # no solving variable at all
        {(0, 0, 0, 1): 1, (0, 0, 0, 0): 1},
        # quadratic in z1
        {(0, 0, 0, 0): 1, (0, 0, 2, 0): 1},
        # z1 only through z1*z2
        {(0, 0, 0, 0): 1, (0, 0, 1, 1): 1},
        # below the working-region slope
        {(0, 0, 0, 0): 1, (0, 0, 1, 0): 1, (1, 0, -2, 0): 1},
    ],
)
def test_validate_slab_rejects(terms):
    f = TruncatedSeries(slab_spec(("q",), 2), TRUNC, terms)
    with pytest.raises(FramingError):
        validate_slab(f)


def test_validate_slab_requires_z1():
    f = TruncatedSeries(slab_spec(("q",), 0), TRUNC, {(0, 0): 1})
    with pytest.raises(FramingError):
        validate_slab(f)


if __name__ == "__main__":
    pytest.main()
