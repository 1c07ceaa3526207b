from itertools import permutations

import pytest

from logdeg.charclass import segre, twist
from logdeg.geometry import FACTORS, Catalog, GeometryError, get_catalog


@pytest.fixture(scope="module")
def cat3():
    return get_catalog(3)


def g(cat, name):
    return cat.ring.gen(name)


def test_chern_TX(cat3):
    R = cat3.ring
    one = R.one()
    expected = (one + g(cat3, "h1")) ** 2
    for h in FACTORS:
        expected = expected * (one + g(cat3, h)) ** 4
    assert cat3.chern_TX.rank == 10
    assert cat3.chern_TX.chern == expected
    c1 = g(cat3, "h1").scale(2) + (g(cat3, "h2") + g(cat3, "h3") + g(cat3, "h4")).scale(4)
    assert cat3.chern_TX.c(1) == c1
    assert cat3.chern_TX.chern.constant_term() == 1


def test_small_diagonal(cat3):
    B = cat3.class_B0red
    assert len(B) == 10
    assert B.is_homogeneous(6)
    for exps, c in B.items():
        _, i, j, k = exps[:4]
        assert c == 1 and i + j + k == 6 and max(i, j, k) <= 3
    assert B.coefficient({"h2": 3, "h3": 3}) == 1
    R = cat3.ring
    for perm in permutations(FACTORS):
        m = {x: R.gen(x) for x in R.generators}
        m.update({a: R.gen(b) for a, b in zip(FACTORS, perm)})
        assert B.substitute(m, R) == B


def test_restrict_and_lift(cat3):
    R = cat3.ring
    assert cat3.restrict_B0red(g(cat3, "h2") - g(cat3, "h3")).is_zero()
    lifted = cat3.lift_B0red(cat3.restrict_B0red(cat3.chern_TX.chern))
    assert lifted == (R.one() + g(cat3, "h1")) ** 2 * (R.one() + g(cat3, "h2")) ** 12
    B = cat3.base
    c = (B.one() + B.gen("h1")) * (B.one() + B.gen("h")) ** 3
    assert cat3.restrict_B0red(cat3.lift_B0red(c)) == c
    with pytest.raises(GeometryError):
        cat3.restrict_B0red(g(cat3, "e1"))


def test_normal_bundle_of_small_diagonal(cat3):
    N = cat3.chern_N_B0red_X
    h2 = g(cat3, "h2")
    assert N.rank == 6
    assert N.chern == (cat3.ring.one() + h2) ** 8
    assert N.c(1) == h2.scale(8)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_normal_bundle_rank_and_c1(n):
    cat = get_catalog(n)
    assert cat.chern_N_B0red_X.rank == 2 * n
    assert cat.chern_N_B0red_X.c(1) == g(cat, "h2").scale(2 * n + 2)


def test_quotient_bundle(cat3):
    Q = cat3.chern_Q
    assert Q.rank == 3
    assert Q.c(1) == g(cat3, "h2").scale(4) + g(cat3, "h1").scale(3)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_whitney_consistency(n):
    cat = get_catalog(n)
    assert cat.chern_Q.chern * cat.chern_N_B0red_B0.chern == cat.chern_N_B0red_X.chern
    assert cat.chern_N_B0red_B0.rank == n
    assert cat.chern_TB0_on_B0red.rank == 2 * n + 1
    assert cat.chern_Q.rank + cat.chern_N_B0red_B0.rank == cat.chern_N_B0red_X.rank


def test_strict_transform_of_B0red(cat3):
    n = 3
    B = cat3.class_B0pred
    e1 = g(cat3, "e1")
    assert B.is_homogeneous(n + 1)
    assert B.coefficient({"e1": n + 1}) == (-1) ** n
    c3 = cat3.chern_Q.c(3).coefficient({"h2": 3})
    assert B.coefficient({"e1": 1, "h2": 3}) == c3
    N = cat3.chern_N_B0pred_Xp
    assert N.rank == n + 1
    assert N.c(1) == cat3.chern_Q.c(1) - e1.scale(n) + e1
    R = cat3.ring
    kill = {x: R.gen(x) for x in R.generators}
    kill["e1"] = R.zero()
    assert N.chern.substitute(kill, R) == cat3.chern_Q.chern


def test_components(cat3):
    h2, h3 = g(cat3, "h2"), g(cat3, "h3")
    assert cat3.class_Zi(3) == h2**3 + h2**2 * h3 + h2 * h3**2 + h3**3
    for i in (1, 2, 3):
        assert cat3.class_Bi(i).is_homogeneous(4)
        assert cat3.class_Bdtilde(i).is_homogeneous(4)
        assert cat3.class_Bi_cap_B0red(i).is_homogeneous(7)
        # B_i sits over a point of P^1, so h1 restricts to zero and s(N_{B_i} Z_i) = 1
        assert (cat3.class_Bi(i) * g(cat3, "h1")).is_zero()
    with pytest.raises(GeometryError):
        cat3.class_Zi(4)


def test_segre_of_double_transform(cat3):
    R = cat3.ring
    kill = {x: R.gen(x) for x in R.generators}
    kill["e1"] = kill["e2"] = R.zero()
    e1, e2 = g(cat3, "e1"), g(cat3, "e2")
    for i in (1, 2, 3):
        s = cat3.segre_N_Bdtilde_X2(i)
        assert s.constant_term() == 1
        N = cat3.chern_N_Zi_X(i)
        assert N.chern == (R.one() + g(cat3, cat3.pair_lift(i))) ** 4
        assert s.substitute(kill, R) == segre(N)
        assert twist(twist(N, -e1), -e2) == twist(N, -e1 - e2)
        assert cat3.class_Bdtilde(i).substitute(kill, R) == cat3.class_Bi(i)


def test_i_symmetry_fixing_the_lift(cat3):
    # h3 <-> h4 fixes the lift h2 and exchanges B2 and B3
    R = cat3.ring
    m = {x: R.gen(x) for x in R.generators}
    m["h3"], m["h4"] = R.gen("h4"), R.gen("h3")
    assert cat3.class_Bdtilde(2).substitute(m, R) == cat3.class_Bdtilde(3)
    assert cat3.class_Bdtilde(1).substitute(m, R) == cat3.class_Bdtilde(1)


@pytest.mark.parametrize("n", [3, 4])
def test_equivariance_under_factor_permutations(n):
    """sigma(entry_i of catalog(lift)) = entry_sigma(i) of catalog(sigma(lift)).

    Segre series on Z_i depend on which diagonal generator represents the
    identified factor, so those are compared after restriction to Z_i.
    """
    base = get_catalog(n)
    R = base.ring
    for perm in permutations(FACTORS):
        sig = dict(zip(FACTORS, perm))
        m = {x: R.gen(sig.get(x, x)) for x in R.generators}
        other = get_catalog(n, lift=sig["h2"])
        for i in (1, 2, 3):
            j = FACTORS.index(sig[FACTORS[i - 1]]) + 1
            for meth in ("class_Zi", "class_Bi", "class_Bdtilde", "correction1", "correction2"):
                assert getattr(base, meth)(i).substitute(m, R) == getattr(other, meth)(j)
            a, b = other.pair(j)
            on_z = {x: R.gen(x) for x in R.generators}
            on_z[b] = R.gen(a)
            lhs = base.segre_N_Bdtilde_X2(i).substitute(m, R).substitute(on_z, R)
            assert lhs == other.segre_N_Bdtilde_X2(j).substitute(on_z, R)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_chern_times_segre(n):
    for name, b in get_catalog(n).bundles().items():
        assert b.chern * segre(b) == 1, name


def test_catalog_validation():
    with pytest.raises(GeometryError):
        Catalog(2)
    with pytest.raises(GeometryError):
        Catalog(3, lift="h1")
    with pytest.raises(GeometryError):
        Catalog(3, factors=("h2", "h2", "h4"))


def test_entries_serialize(cat3):
    entries = cat3.entries()
    assert "[(B0)red]" in entries and "[B3'']" in entries
    for c in entries.values():
        assert cat3.ring.parse(c.to_text()) == c


def test_stage_order(cat3):
    assert [s.symbol for s in cat3.stages()] == ["e31", "e32", "e33", "e2", "e1"]
