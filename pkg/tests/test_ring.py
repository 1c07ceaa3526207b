"""Truncated graded ring arithmetic, checked against a naive tuple-dict oracle."""

from fractions import Fraction
from itertools import product
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from logdeg.ring import GradedClass, NotAUnitError, RingError, make_ring


@pytest.fixture(scope="module")
def AX3():
    return make_ring(("h1", "h2", "h3", "h4"), (2, 4, 4, 4), 10)


SMALL = make_ring(("a", "b", "c"), (3, 4, 2), 5)


def naive_mul(spec, a, b):
    """Reference product on exponent tuples, truncating by nilpotency and cap."""
    out = {}
    for (ea, ca), (eb, cb) in product(a.items(), b.items()):
        e = tuple(x + y for x, y in zip(ea, eb))
        if any(x >= m for x, m in zip(e, spec.nilpotency)) or sum(e) > spec.total_cap:
            continue
        out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


coef = st.one_of(st.integers(-5, 5), st.fractions(min_value=-3, max_value=3, max_denominator=4))
exps = st.tuples(st.integers(0, 2), st.integers(0, 3), st.integers(0, 1))
classes = st.dictionaries(exps, coef, max_size=6).map(lambda d: SMALL.from_dict(d))
units = st.tuples(st.sampled_from([1, -1, 2, Fraction(1, 3)]), classes).map(
    lambda p: p[1] - SMALL.const(p[1].constant_term()) + SMALL.const(p[0])
)


def test_make_ring_for_AX(AX3):
    assert AX3.generators == ("h1", "h2", "h3", "h4")
    assert AX3.total_cap == 10
    t = make_ring(("t",), (5,), 4)
    assert (t.gen("t") ** 4).coefficient({"t": 4}) == 1
    assert (t.gen("t") ** 5).is_zero()


@pytest.mark.parametrize(
    "gens,nil,cap",
    [(("h1", "h1"), (2, 2), 3), (("a",), (0,), 3), (("a", "b"), (2,), 3), (("a",), (2,), -1)],
)
def test_make_ring_rejects(gens, nil, cap):
    with pytest.raises(RingError):
        make_ring(gens, nil, cap)


def test_products(AX3):
    one = AX3.one()
    h1, h2, h3 = (AX3.gen(g) for g in ("h1", "h2", "h3"))
    assert (one + h2) * (one + h3) == one + h2 + h3 + h2 * h3
    assert (one + h1) ** 2 == one + h1.scale(2)
    expected = AX3.from_dict({(0, 3, 1, 0): 4, (0, 2, 2, 0): 6, (0, 1, 3, 0): 4})
    assert (h2 + h3) ** 4 == expected


def test_graded_part(AX3):
    h1, h2 = AX3.gen("h1"), AX3.gen("h2")
    c = AX3.one() + h1.scale(2) + (h1 * h2).scale(3)
    assert c.graded_part(2) == (h1 * h2).scale(3)
    assert c.graded_part(-1).is_zero()
    assert ((AX3.one() + h2) ** 8).graded_part(3) == (h2**3).scale(comb(8, 3))


def test_inverse(AX3):
    h2 = AX3.gen("h2")
    one = AX3.one()
    assert (one + h2).invert_unit() == one - h2 + h2**2 - h2**3
    inv = ((one + h2) ** 8).invert_unit()
    assert inv == one - h2.scale(8) + (h2**2).scale(36) - (h2**3).scale(120)
    with pytest.raises(NotAUnitError):
        h2.invert_unit()


def test_substitute(AX3):
    B = make_ring(("h1", "h"), (2, 4), 4)
    h = B.gen("h")
    diag = {"h1": B.gen("h1"), "h2": h, "h3": h, "h4": h}
    s = AX3.gen("h2") + AX3.gen("h3") + AX3.gen("h4")
    assert s.substitute(diag, B) == h.scale(3)
    one = AX3.one()
    c = (one + AX3.gen("h1")) ** 2
    for g in ("h2", "h3", "h4"):
        c = c * (one + AX3.gen(g)) ** 4
    assert c.substitute(diag, B) == (B.one() + B.gen("h1")) ** 2 * (B.one() + h) ** 12
    swap = {g: AX3.gen(g) for g in AX3.generators}
    swap["h2"], swap["h3"] = AX3.gen("h3"), AX3.gen("h2")
    assert (AX3.gen("h2") ** 2 * AX3.gen("h4")).substitute(swap, AX3) == AX3.gen("h3") ** 2 * AX3.gen("h4")


def test_coefficient(AX3):
    point = AX3.monomial({"h1": 1, "h2": 3, "h3": 3, "h4": 3})
    assert point.coefficient({"h1": 1, "h2": 3, "h3": 3, "h4": 3}) == 1
    assert (AX3.one() + AX3.gen("h2")).coefficient({"h3": 1}) == 0
    s = AX3.gen("h2") + AX3.gen("h3") + AX3.gen("h4")
    top = AX3.gen("h1") * s**9
    assert top.coefficient({"h1": 1, "h2": 3, "h3": 3, "h4": 3}) == 1680
    assert 1680 == factorial(9) // factorial(3) ** 3


def test_text_roundtrip(AX3):
    c = AX3.from_dict({(1, 0, 0, 0): Fraction(-1, 3), (0, 2, 1, 0): 5, (0, 0, 0, 0): 1})
    text = c.to_text()
    assert "-1/3 * h1" in text
    assert AX3.parse(text) == c
    assert AX3.zero().to_text() == "0"


def test_mixed_rings_rejected(AX3):
    with pytest.raises(RingError):
        AX3.gen("h1") + SMALL.gen("a")


def test_exponent_helpers():
    a, b = SMALL.gen("a"), SMALL.gen("b")
    p = a**2 * b + b.scale(3)
    assert p.without("a") == {0: b.scale(3), 2: b}
    assert p.times_power("a", 1) == a**3 * b.scale(0) + (a * b).scale(3)
    assert p.derivative("a") == (a * b).scale(2)
    assert p.exponent_of("a") == 2
    assert p.generators_used() == {"a", "b"}


@given(classes, classes)
def test_product_matches_naive(a, b):
    assert (a * b).to_dict() == naive_mul(SMALL, a.to_dict(), b.to_dict())


@given(classes, classes, classes)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == SMALL.zero()


@given(units)
def test_inverse_property(u):
    assert u * u.invert_unit() == 1


@given(classes)
def test_graded_parts_partition(a):
    assert sum((a.graded_part(k) for k in range(SMALL.total_cap + 1)), SMALL.zero()) == a


@given(classes, classes)
def test_substitute_is_homomorphism(a, b):
    # maps must send every source relation into the target's relations
    scaled = {"a": SMALL.gen("a", 2), "b": SMALL.gen("b", -1), "c": SMALL.gen("c", Fraction(1, 2))}
    assert (a * b).substitute(scaled, SMALL) == a.substitute(scaled, SMALL) * b.substitute(scaled, SMALL)
    T = make_ring(("u", "w"), (2, 4), 5)
    u, w = T.gen("u"), T.gen("w")
    collapse = {"a": u, "b": w, "c": u}
    assert (a * b).substitute(collapse, T) == a.substitute(collapse, T) * b.substitute(collapse, T)


@given(classes, classes)
def test_truncation_sound(a, b):
    for e, c in (a * b).items():
        assert all(x < m for x, m in zip(e, SMALL.nilpotency))
        assert sum(e) <= SMALL.total_cap
        assert isinstance(c, (int, Fraction))


def test_exact_integers_stay_int():
    c = (SMALL.one() + SMALL.gen("a")) ** 2
    assert all(type(v) is int for _, v in c.items())
    assert isinstance(GradedClass(SMALL, {(1, 0, 0): Fraction(1, 2)}).coefficient({"a": 1}), Fraction)
