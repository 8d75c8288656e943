import random
from fractions import Fraction

import pytest

from syzdisc.errors import AdmissibilityError, SeriesError, SpecMismatchError, UnknownVariableError
from syzdisc.series import (
    UV,
    SeriesDocument,
    TruncatedSeries,
    Truncation,
    VariableSpec,
    clip,
    derivative,
    embed,
    exp_series,
    extract,
    integrate,
    invert,
    log_series,
    relabel,
    restrict,
    substitute,
    to_canonical_text,
)

SPEC = VariableSpec(small_names=("q", UV), phase_names=("z1", "z2"))
TRUNC = Truncation(small_total_max=4, z_window=3)


def series(terms) -> TruncatedSeries:
    return TruncatedSeries(SPEC, TRUNC, terms)


def var(name: str) -> TruncatedSeries:
    return TruncatedSeries.variable(SPEC, TRUNC, name)


def mono(**exponents) -> TruncatedSeries:
    return TruncatedSeries.monomial(SPEC, TRUNC, exponents)


q, uv, z1, z2 = (var(n) for n in ("q", UV, "z1", "z2"))


def test_difference_of_squares():
    assert (1 + q) * (1 - q) == 1 - q * q


def test_laurent_monomial_inverse():
    assert z1 * mono(z1=-1) == 1


def test_six_term_product():
    product = (1 + z1 + z2) * (1 + mono(q=1, z1=-1, z2=-1))
    expected = 1 + z1 + z2 + mono(q=1, z1=-1, z2=-1) + mono(q=1, z2=-1) + mono(q=1, z1=-1)
    assert product == expected
    assert len(product) == 6


def test_truncation_drops_high_degree():
    assert q**5 == 0
    assert (q**2) * (uv**2) == mono(q=2, uv=2)
    assert (q**2) * (uv**3) == 0


def test_zero_coefficients_are_not_stored():
    s = series({(1, 0, 0, 0): 1, (0, 1, 0, 0): 0})
    assert len(s) == 1
    assert (q - q).is_zero()


def test_invert_geometric_series():
    assert invert(1 - uv) == sum((uv**k for k in range(1, 5)), TruncatedSeries.one(SPEC, TRUNC))
    expected = sum((mono(z1=k).scale((-1) ** k) for k in range(1, 4)), TruncatedSeries.one(SPEC, TRUNC))
    assert clip(invert(1 + z1)) == expected
    assert invert(TruncatedSeries.constant(SPEC, TRUNC, 2)) == Fraction(1, 2)


def test_invert_rejects_bad_input():
    with pytest.raises(AdmissibilityError):
        invert(q)
    # a pure z^-1 tail has no convergent expansion
    with pytest.raises(AdmissibilityError):
        invert(1 + mono(z1=-1))


def test_exp_and_log_examples():
    zero = TruncatedSeries.zero(SPEC, TRUNC)
    assert exp_series(zero) == 1
    log = log_series(1 + z2 - uv)
    assert log.coefficient({"z2": 1}) == 1
    assert log.coefficient({UV: 1}) == -1
    assert log.coefficient({"z2": 2}) == Fraction(-1, 2)
    assert log.coefficient({"z2": 1, UV: 1}) == 1
    assert log.coefficient({UV: 2}) == Fraction(-1, 2)
    with pytest.raises(AdmissibilityError):
        exp_series(1 + q)
    with pytest.raises(AdmissibilityError):
        log_series(2 + q)


def test_substitute_examples():
    Z = 1 + z2
    assert substitute(z1 + z2, {"z1": -Z}) == -1

    inverse_image = substitute(mono(z1=-1), {"z1": -Z})
    expected = -(1 - z2 + mono(z2=2) - mono(z2=3))
    assert clip(inverse_image) == expected

    mirror = VariableSpec(small_names=("Q",))
    kahler = VariableSpec(small_names=("q",))
    trunc = Truncation(small_total_max=3)
    image = TruncatedSeries(kahler, trunc, {(1,): 1, (2,): 6})
    assert substitute(TruncatedSeries.variable(mirror, trunc, "Q"), {"Q": image}) == image


@pytest.mark.parametrize(
    "exponents, expected",
    [
        ({"q": 4, "z1": -1}, 1),
        ({"q": 4}, 4),
        ({"q": 4, "z1": 2}, 4),
        ({"q": 4, "z1": 3}, 1),
    ],
)
def test_substitute_keeps_terms_pulled_back_by_a_free_monomial(exponents, expected):
    # (q + q*z1)^4 * z1^-1: the z1^4 term of the power sits past the window until z1^-1 brings it back
    image = substitute(mono(q=4, z1=-1), {"q": q + q * z1})
    assert image.coefficient(exponents) == expected, f"coefficient of {exponents}"


def test_substitute_rejects_small_binding_with_constant():
    with pytest.raises(AdmissibilityError):
        substitute(q, {"q": 1 + q})


def test_extract():
    spec = VariableSpec(small_names=("q",), phase_names=("z1",))
    trunc = Truncation(small_total_max=2, z_window=2)
    s = TruncatedSeries(spec, trunc, {(0, 0): 1, (1, 1): 3})
    assert extract(s, {"q": 1, "z1": 1}) == 3
    rest = extract(series({(1, 0, 1, 0): 2, (1, 0, 1, 1): 5, (0, 0, 0, 0): 1}), {"q": 1, "z1": 1})
    assert rest.spec == VariableSpec(small_names=(UV,), phase_names=("z2",))
    assert rest.coefficient({"z2": 1}) == 5
    with pytest.raises(UnknownVariableError):
        extract(s, {"x": 1})


def test_spec_validation():
    with pytest.raises(ValueError):
        VariableSpec(small_names=("q",), phase_names=(UV,))
    with pytest.raises(ValueError):
        VariableSpec(small_names=("q", "q"))
    with pytest.raises(UnknownVariableError):
        SPEC.index("x")


def test_mismatched_operands():
    other = TruncatedSeries.one(SPEC, Truncation(small_total_max=3, z_window=3))
    with pytest.raises(SpecMismatchError):
        _ = q + other
    with pytest.raises(SeriesError):
        series({(1, 0): 1})


def test_derivative_and_integral():
    s = 1 + z1 + mono(z1=2, q=1).scale(3)
    assert derivative(s, "z1") == 1 + mono(z1=1, q=1).scale(6)
    assert derivative(integrate(s, "z1"), "z1") == s
    assert integrate(s, "z1").constant_term() == 0
    with pytest.raises(AdmissibilityError):
        integrate(mono(z1=-1, q=1), "z1")


def test_embed_restrict_relabel():
    small = VariableSpec(small_names=("q",), phase_names=("z1",))
    s = TruncatedSeries(small, TRUNC, {(0, 0): 1, (1, 1): 2})
    big = embed(s, SPEC)
    assert big == 1 + mono(q=1, z1=1).scale(2)
    assert restrict(big + uv, [UV]) == big
    assert restrict(big, ["q"]) == 1
    swapped = relabel(big, {"z1": "z2", "z2": "z1"})
    assert embed(swapped, SPEC) == 1 + mono(q=1, z2=1).scale(2)
    with pytest.raises(UnknownVariableError):
        embed(big + uv, small)


def test_canonical_text_and_document():
    spec = VariableSpec(small_names=("q",), phase_names=("z1",))
    s = TruncatedSeries(spec, Truncation(small_total_max=2, z_window=2), {(0, 0): 1, (1, 1): Fraction(3, 2), (1, -1): -2})
    assert to_canonical_text(s) == "1/1  0 0\n-2/1  1 -1\n3/2  1 1\n"
    document = SeriesDocument.from_series(s)
    assert document.terms[1] == ("-2/1", [1, -1])
    assert document.spec() == spec


# randomized properties


def random_term(rng: random.Random, unit_free: bool) -> tuple[int, ...]:
    """A monomial inside e_j >= -(small degree); with unit_free, never the constant monomial."""
    while True:
        dq, duv = rng.randint(0, 2), rng.randint(0, 1)
        s = dq + duv
        phase = tuple(rng.randint(-s, 2) for _ in range(2))
        if s == 0 and (any(x < 0 for x in phase) or not any(phase)):
            if unit_free:
                continue
            phase = (0, 0)
        return (dq, duv, *phase)


def random_series(rng: random.Random, tail_only: bool = False) -> TruncatedSeries:
    terms = {}
    for _ in range(rng.randint(1, 5)):
        terms[random_term(rng, unit_free=tail_only)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return series(terms)


@pytest.fixture(scope="module")
def operands(request):
    n = request.config.getoption("--samples")
    out = []
    for seed in range(n):
        rng = random.Random(seed)
        out.append((random_series(rng), random_series(rng), random_series(rng), random_series(rng, tail_only=True)))
    return out


def test_ring_laws(operands):
    for a, b, c, _ in operands:
        assert a * b == b * a
        assert a + b == b + a
        assert (a * b) * c == a * (b * c), f"associativity fails for {a}, {b}, {c}"
        assert a * (b + c) == a * b + a * c, f"distributivity fails for {a}, {b}, {c}"


def test_invert_round_trip(operands):
    for _, _, _, t in operands:
        unit = 1 + t
        assert unit * invert(unit) == 1, f"invert fails for {unit}"


def test_exp_log_round_trip(operands):
    for _, _, _, t in operands:
        assert log_series(exp_series(t)) == t, f"log(exp) fails for {t}"
        assert exp_series(log_series(1 + t)) == 1 + t, f"exp(log) fails for {t}"


def test_truncation_monotonicity(operands):
    wide = Truncation(small_total_max=6, z_window=3)
    q_wide, uv_wide, z1_wide = (TruncatedSeries.variable(SPEC, wide, n) for n in ("q", UV, "z1"))
    wide_bindings = {"q": q_wide + q_wide * z1_wide, UV: uv_wide + q_wide * uv_wide}
    bindings = {"q": q + q * z1, UV: uv + q * uv}
    for a, b, _, t in operands:
        a_wide, b_wide, t_wide = (embed(x, SPEC, wide) for x in (a, b, t))
        assert embed(a_wide * b_wide, SPEC, TRUNC) == a * b
        assert embed(invert(1 + t_wide), SPEC, TRUNC) == invert(1 + t)
        assert embed(log_series(1 + t_wide), SPEC, TRUNC) == log_series(1 + t)
        assert embed(exp_series(t_wide), SPEC, TRUNC) == exp_series(t)
        image = substitute(a_wide, wide_bindings)
        assert embed(image, SPEC, TRUNC) == substitute(a, bindings), f"substitute depends on the truncation for {a}"


def test_substitute_is_a_homomorphism(operands):
    bindings = {"q": q + q * z1, UV: uv + q * uv}
    for a, b, _, _ in operands:
        assert substitute(a * b, bindings) == substitute(a, bindings) * substitute(b, bindings)


if __name__ == "__main__":
    pytest.main()
