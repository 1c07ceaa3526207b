from fractions import Fraction
from math import factorial

import pytest

from logdeg.degree import (
    REFERENCE_DEGREES,
    DegreeError,
    DegreeResult,
    degree_L111,
    expand_pullback_power,
    integrate_X,
    max_n,
    pullback_class,
    table,
)
from logdeg.geometry import FACTORS, GeometryError, get_catalog


def test_pullback_class():
    cat = get_catalog(3)
    H = pullback_class(3)
    assert len(H) == 9 and H.is_homogeneous(1)
    assert H.coefficient({"e2": 1}) == -1
    R = cat.ring
    for perm in [("h3", "h2", "h4"), ("h4", "h3", "h2")]:
        m = {x: R.gen(x) for x in R.generators}
        m.update({a: R.gen(b) for a, b in zip(FACTORS, perm)})
        assert H.substitute(m, R) == H


def test_integrate_X():
    R = get_catalog(3).ring
    assert integrate_X(R.monomial({"h1": 1, "h2": 3, "h3": 3, "h4": 3})) == 1
    assert integrate_X(R.gen("h2") ** 10) == 0
    s = R.gen("h2") + R.gen("h3") + R.gen("h4")
    assert integrate_X(R.gen("h1") * s**9) == factorial(9) // factorial(3) ** 3
    with pytest.raises(GeometryError):
        integrate_X(R.gen("e1"))


def test_expansion_drops_e3_cross_terms():
    cat = get_catalog(3)
    P = expand_pullback_power(3, cat)
    assert P.is_homogeneous(cat.dim)
    for exps, _ in P.items():
        assert sum(1 for e in exps[6:] if e) <= 1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_degree_small(n):
    r = degree_L111(n)
    assert r.degree == REFERENCE_DEGREES[n]
    assert r.pre_division_total == 6 * r.degree
    assert r.verified is True
    assert r.term_count > 0


def test_workers_agree():
    assert degree_L111(3, workers=2).degree == degree_L111(3).degree == 80


def test_table_rows():
    rows = table(3, 5)
    assert [r.degree for r in rows] == [80, 4035, 165984]
    assert [r.degree for r in table(3, 3)] == [80]
    with pytest.raises(ValueError):
        table(5, 3)


def test_range_validation(monkeypatch):
    with pytest.raises(GeometryError):
        degree_L111(2)
    with pytest.raises(ValueError):
        degree_L111(6, limit=5)
    monkeypatch.setenv("LOGDEG_MAX_N", "4")
    assert max_n() == 4
    with pytest.raises(ValueError):
        degree_L111(5)
    monkeypatch.setenv("LOGDEG_MAX_N", "many")
    with pytest.raises(ValueError):
        max_n()


def test_result_invariants():
    with pytest.raises(DegreeError):
        DegreeResult(3, 80, 481, 1, 0.0)
    with pytest.raises(DegreeError):
        DegreeResult(3, 0, 0, 1, 0.0)
    r = DegreeResult(9, 5, 30, 7, 0.0123)
    assert r.verified is None
    assert r.elapsed_ms == 12
    assert r.as_dict() == {"n": 9, "degree": "5", "pre_division_total": "30", "term_count": 7, "elapsed_ms": 12}


def test_reference_table_grows():
    vals = [REFERENCE_DEGREES[n] for n in sorted(REFERENCE_DEGREES)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_fractional_total_is_rejected(monkeypatch):
    import logdeg.degree as deg

    monkeypatch.setattr(deg, "integrate_X", lambda c: Fraction(1, 2))
    with pytest.raises(DegreeError):
        deg.degree_L111(3)
