import pytest

from syzdisc.errors import GeometryError
from syzdisc.geometry.toric import EffectiveClass, build_frame, build_toric_data, enumerate_effective, standard_frame

C3 = ([[0, 0], [1, 0], [0, 1]], [0, 1, 2])
KP2 = ([[0, 0], [1, 0], [0, 1], [-1, -1]], [0, 1, 2])
KP3 = ([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]], [0, 1, 2, 3])
# three curve classes
HEXAGON = ([[0, 0], [1, 0], [0, 1], [1, 1], [-1, 0], [0, -1]], [0, 1, 2])


@pytest.fixture(scope="module")
def kp2():
    return build_toric_data(*KP2)


def test_c3_has_no_curve_classes():
    data = build_toric_data(*C3)
    assert data.n == 3
    assert data.n_classes == 0
    assert data.kahler_names == ()
    assert enumerate_effective(data, 5) == [EffectiveClass(multiplicities=())]


def test_kp2_charges(kp2):
    assert kp2.a_matrix[3] == (3, -1, -1)
    assert kp2.curve_points == (3,)
    assert [row[0] for row in kp2.pairing] == [-3, 1, 1, 1]
    assert kp2.kahler_names == ("q",)
    assert kp2.mirror_names == ("Q",)
    assert kp2.class_index(3) == 0
    assert kp2.class_index(1) is None


def test_kp3_charges():
    data = build_toric_data(*KP3)
    assert data.n == 4
    assert data.a_matrix[4] == (4, -1, -1, -1)
    assert [row[0] for row in data.pairing] == [-4, 1, 1, 1, 1]


def test_anticanonical_pairing_vanishes():
    data = build_toric_data(*HEXAGON)
    assert data.n_classes == 3
    assert data.kahler_names == ("q1", "q2", "q3")
    assert data.a_matrix[3] == (-1, 1, 1)
    for k in range(data.n_classes):
        assert sum(data.pairing[j][k] for j in range(data.m)) == 0, f"class {k} pairs nontrivially with -K"


@pytest.mark.parametrize(
    "geometry, max_degree, count",
    [
        (C3, 3, 1),
        (KP2, 2, 3),
        (HEXAGON, 1, 4),
        (HEXAGON, 2, 10),
    ],
)
def test_enumerate_effective(geometry, max_degree, count):
    data = build_toric_data(*geometry)
    classes = enumerate_effective(data, max_degree)
    assert len(classes) == count
    assert all(c.degree <= max_degree for c in classes)
    assert classes == sorted(classes, key=lambda c: c.multiplicities)


@pytest.mark.parametrize(
    "geometry, perm",
    [
        (KP2, (3, 0, 1, 2)),
        (KP2, (2, 1, 3, 0)),
        (KP3, (4, 3, 2, 1, 0)),
        (HEXAGON, (5, 0, 3, 1, 4, 2)),
    ],
)
def test_relabelling_points_permutes_the_data(geometry, perm):
    points, sigma = geometry
    old = build_toric_data(points, sigma)
    new = build_toric_data([points[i] for i in perm], [perm.index(i) for i in sigma])
    for p, i in enumerate(perm):
        assert new.a_matrix[p] == old.a_matrix[i], f"a-row of point {i} moved to {p} changed"
    for k_new, point in enumerate(new.curve_points):
        k_old = old.class_index(perm[point])
        for p, i in enumerate(perm):
            assert new.pairing[p][k_new] == old.pairing[i][k_old], f"D_{i} . C_{k_old} changed under relabelling"


def test_divisor_degree(kp2):
    alpha = EffectiveClass(multiplicities=(2,))
    assert kp2.divisor_degree(0, alpha) == -6
    assert kp2.divisor_degree(3, alpha) == 2


@pytest.mark.parametrize(
    "points, sigma",
    [
        ([[0, 0], [1, 0], [0, 1], [1, 0]], [0, 1, 2]),
        ([[0, 0], [2, 0], [0, 1]], [0, 1, 2]),
        ([[0, 0], [1, 0], [0, 1]], [0, 1]),
        ([[0, 0], [1, 0], [0, 1]], [0, 1, 1]),
        ([[0, 0], [1, 0], [0, 1, 2]], [0, 1, 2]),
        ([], []),
    ],
)
def test_invalid_toric_data(points, sigma):
    with pytest.raises(GeometryError):
        build_toric_data(points, sigma)


def test_standard_frame(kp2):
    frame = standard_frame(kp2, 0)
    assert frame.frame_matrix == ((1, 0), (0, 1))
    assert frame.coordinates((-1, -1)) == (-1, -1)
    outer = build_frame(kp2, 2, [[1, -1], [0, -1]])
    assert outer.coordinates((1, 1)) == (1, -2)


def test_invalid_frames(kp2):
    with pytest.raises(GeometryError):
        build_frame(kp2, 3)
    with pytest.raises(GeometryError):
        build_frame(kp2, 0, [[2, 0], [0, 1]])
    with pytest.raises(GeometryError):
        build_frame(kp2, 0, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


if __name__ == "__main__":
    pytest.main()
