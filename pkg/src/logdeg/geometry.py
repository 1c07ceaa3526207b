"""Spaces, cycle classes and bundles of the three-step resolution.

X = P^1 x (P^n)^3 with hyperplane classes h1 (on P^1) and h2, h3, h4.  The
reduced base locus (B0)red is the small diagonal {F1 = F2 = F3}, isomorphic
to P^1 x P^n; the components B_i are {lambda = mu_i, F_j = F_k}.  Every class
below is written as an ambient class in

    Q[h1, h2, h3, h4, e1, e2, e31, e32, e33] / (h1^2, h_i^(n+1), deg > 3n+1)

where e1, e2, e3i are the (total transforms of the) exceptional divisors of
the three blow-ups.

Classes that only make sense on a center are lifted to the ambient by sending
the diagonal hyperplane class h to one of h2, h3, h4 (the *lift*).  Anything
lifted is only ever multiplied by a class supported on that center, so the
choice never reaches a final number.

Sign convention: O_E(-1) = O(E)|_E, hence the tautological class of each
exceptional projective bundle is ``-e``.
"""

from __future__ import annotations

from functools import cached_property, lru_cache

from .charclass import (
    BundleClass,
    line_bundle,
    tangent_projective,
    twist,
    whitney_quotient,
)
from .pushforward import BlowupStage, supported_push
from .ring import GradedClass, make_ring

SYMBOLS = ("h1", "h2", "h3", "h4", "e1", "e2", "e31", "e32", "e33")
FACTORS = ("h2", "h3", "h4")
E3 = ("e31", "e32", "e33")


class GeometryError(ValueError):
    pass


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 3:
        raise GeometryError(f"n must be an integer >= 3, got {n!r}")


class Catalog:
    """Every class and bundle of the (1,1,1) resolution tower for one n.

    ``factors`` names the generators playing the roles of F1, F2, F3;
    permuting it exercises the S3 symmetry.  ``lift`` picks the generator
    that represents the diagonal class on (B0)red.
    """

    def __init__(self, n: int, lift: str = "h2", factors: tuple[str, str, str] = FACTORS):
        _check_n(n)
        if sorted(factors) != sorted(FACTORS):
            raise GeometryError(f"factors must be a permutation of {FACTORS}")
        if lift not in FACTORS:
            raise GeometryError(f"lift must be one of {FACTORS}")
        self.n = n
        self.lift_gen = lift
        self.factors = tuple(factors)
        cap = 3 * n + 1
        self.dim = cap
        self.ring = make_ring(SYMBOLS, (2, n + 1, n + 1, n + 1) + (cap + 1,) * 5, cap)
        # (B0)red = P^1 x P^n
        self.base = make_ring(("h1", "h"), (2, n + 1), n + 1)

    def gen(self, name: str) -> GradedClass:
        return self.ring.gen(name)

    # -- X and (B0)red ----------------------------------------------------

    @cached_property
    def chern_TX(self) -> BundleClass:
        R = self.ring
        out = tangent_projective(1, R.gen("h1"))
        for h in FACTORS:
            out = out * tangent_projective(self.n, R.gen(h))
        return out

    @cached_property
    def class_B0red(self) -> GradedClass:
        n = self.n
        R = self.ring
        acc = R.zero()
        for i in range(n + 1):
            for j in range(n + 1):
                k = 2 * n - i - j
                if 0 <= k <= n:
                    acc = acc + R.monomial({"h2": i, "h3": j, "h4": k})
        return acc

    def restrict_B0red(self, c: GradedClass) -> GradedClass:
        """Restriction to (B0)red: h2, h3, h4 all become the diagonal class h."""
        bad = c.generators_used() - {"h1", *FACTORS}
        if bad:
            raise GeometryError(f"cannot restrict exceptional symbols {sorted(bad)} to (B0)red")
        B = self.base
        h = B.gen("h")
        mapping = {"h1": B.gen("h1"), "h2": h, "h3": h, "h4": h}
        mapping.update({g: B.zero() for g in SYMBOLS[4:]})
        return c.substitute(mapping, B)

    def lift_B0red(self, c: GradedClass, lift: str | None = None) -> GradedClass:
        R = self.ring
        return c.substitute({"h1": R.gen("h1"), "h": R.gen(lift or self.lift_gen)}, R)

    def _lift_bundle(self, b: BundleClass, lift: str | None = None) -> BundleClass:
        return BundleClass(b.rank, self.lift_B0red(b.chern, lift))

    @cached_property
    def chern_T_B0red(self) -> BundleClass:
        """Tangent bundle of (B0)red in the base ring."""
        B = self.base
        return tangent_projective(1, B.gen("h1")) * tangent_projective(self.n, B.gen("h"))

    @cached_property
    def chern_TX_on_B0red(self) -> BundleClass:
        return BundleClass(self.chern_TX.rank, self.restrict_B0red(self.chern_TX.chern))

    @cached_property
    def chern_N_B0red_X(self) -> BundleClass:
        """0 -> T(B0)red -> TX| -> N -> 0."""
        return self._lift_bundle(whitney_quotient(self.chern_TX_on_B0red, self.chern_T_B0red))

    @cached_property
    def chern_Q_base(self) -> BundleClass:
        """T P S_n(1) (x) O_{P Lambda}(1) on (B0)red."""
        B = self.base
        return twist(tangent_projective(self.n, B.gen("h")), B.gen("h1"))

    @cached_property
    def chern_Q(self) -> BundleClass:
        """N_{(B0)red}X / N_{(B0)red}B0, lifted to the ambient."""
        return self._lift_bundle(self.chern_Q_base)

    @cached_property
    def chern_TB0_on_B0red(self) -> BundleClass:
        """Rank 2n+1 bundle TB0|(B0)red = ker(TX| -> Q)."""
        return whitney_quotient(self.chern_TX_on_B0red, self.chern_Q_base)

    @cached_property
    def chern_N_B0red_B0(self) -> BundleClass:
        """0 -> T(B0)red -> TB0| -> N -> 0."""
        return self._lift_bundle(whitney_quotient(self.chern_TB0_on_B0red, self.chern_T_B0red))

    # -- first blow-up ----------------------------------------------------

    @cached_property
    def class_B0pred(self) -> GradedClass:
        """[(B0')red] = e1 * c_n(Q (x) O_{E'}(1)) with O_{E'}(1) = -e1."""
        e1 = self.gen("e1")
        Q = self.chern_Q
        acc = self.ring.zero()
        for i in range(self.n + 1):
            acc = acc + Q.c(i) * (-e1) ** (self.n - i)
        return e1 * acc

    @cached_property
    def chern_N_B0pred_Xp(self) -> BundleClass:
        """0 -> Q (x) O_{E'}(1) -> N_{(B0')red}X' -> O_{E'}(-1) -> 0."""
        e1 = self.gen("e1")
        return twist(self.chern_Q, -e1) * line_bundle(e1)

    @cached_property
    def chern_E1(self) -> BundleClass:
        """Excess bundle pi^* N_{(B0)red}X / N_{E'}X'."""
        return whitney_quotient(self.chern_N_B0red_X, line_bundle(self.gen("e1")))

    @cached_property
    def chern_E2(self) -> BundleClass:
        """Excess bundle pi'^* N_{(B0')red}X' / N_{E''}X''."""
        return whitney_quotient(self.chern_N_B0pred_Xp, line_bundle(self.gen("e2")))

    # -- the components B_i and auxiliary Z_i -----------------------------

    def pair(self, i: int) -> tuple[str, str]:
        """Generators of the two factors identified on B_i (F_j = F_k, {i,j,k} = {1,2,3})."""
        if i not in (1, 2, 3):
            raise GeometryError(f"component index must be 1, 2 or 3, got {i!r}")
        j, k = (m for m in (1, 2, 3) if m != i)
        return self.factors[j - 1], self.factors[k - 1]

    def third(self, i: int) -> str:
        self.pair(i)
        return self.factors[i - 1]

    def pair_lift(self, i: int) -> str:
        """A generator restricting to the diagonal class on Z_i."""
        a, b = self.pair(i)
        return self.lift_gen if self.lift_gen in (a, b) else a

    def class_Zi(self, i: int) -> GradedClass:
        """Z_i = {F_j = F_k}: the diagonal of two P^n factors, codim n."""
        a, b = self.pair(i)
        R = self.ring
        return sum((R.monomial({a: k, b: self.n - k}) for k in range(self.n + 1)), R.zero())

    def class_Bi(self, i: int) -> GradedClass:
        """B_i = {lambda = mu_i} x Z_i-diagonal, codim n+1."""
        return self.gen("h1") * self.class_Zi(i)

    def class_Bi_cap_B0red(self, i: int) -> GradedClass:
        """B_i cap (B0)red = {mu_i} x small diagonal, codim 2n+1."""
        self.pair(i)
        return self.gen("h1") * self.class_B0red

    def chern_N_Zi_X(self, i: int) -> BundleClass:
        """0 -> TZ_i -> TX|Z_i -> N -> 0, with Z_i = P^1 x P^n x P^n."""
        a, b = self.pair(i)
        c = self.third(i)
        R = self.ring
        lift = self.pair_lift(i)
        on_z = {g: R.gen(g) for g in SYMBOLS}
        on_z[a] = on_z[b] = R.gen(lift)
        TX_z = self.chern_TX.substitute(on_z, R)
        TZ = (
            tangent_projective(1, R.gen("h1"))
            * tangent_projective(self.n, R.gen(lift))
            * tangent_projective(self.n, R.gen(c))
        )
        return whitney_quotient(TX_z, TZ)

    def chern_N_W_Bi(self, i: int) -> BundleClass:
        """Normal bundle of W = B_i cap (B0)red inside B_i = P^n x P^n."""
        self.pair(i)
        B = self.base
        h = B.gen("h")
        TB_on_W = tangent_projective(self.n, h) * tangent_projective(self.n, h)
        TW = tangent_projective(self.n, h)
        return self._lift_bundle(whitney_quotient(TB_on_W, TW))

    def segre_N_Bdtilde_X2(self, i: int) -> GradedClass:
        """s(N_{B_i''}X'') = s(N_{B_i'}Z_i') s(N_{Z_i}X (x) O(-E') (x) O(-E'')).

        The first factor is 1: B_i sits in Z_i as a fiber of the P^1 factor.
        """
        e1, e2 = self.gen("e1"), self.gen("e2")
        return twist(twist(self.chern_N_Zi_X(i), -e1), -e2).segre()

    def correction1(self, i: int) -> GradedClass:
        """First blow-up formula correction, pushed from E' over B_i cap (B0)red."""
        G = self.chern_E1.chern * self.chern_N_W_Bi(i).segre()
        return supported_push(G, self.gen("h1"), "e1", self.n - 1)

    def correction2(self, i: int) -> GradedClass:
        """Second correction, pushed from E'' over B_i' cap (B0')red.

        That intersection is the full fiber of (B0')red over B_i cap (B0)red,
        with normal bundle O(-1) inside B_i'.
        """
        R = self.ring
        G = self.chern_E2.chern * (R.one() + self.gen("e1")).invert_unit()
        return supported_push(G, self.gen("h1"), "e2", self.n - 1)

    def class_Bdtilde(self, i: int) -> GradedClass:
        """Class of the double strict transform of B_i in X''."""
        return self.class_Bi(i) - self.correction1(i) - self.correction2(i)

    # -- pushforward stages -----------------------------------------------

    def stages(self) -> list[BlowupStage]:
        """Elimination order e31, e32, e33, e2, e1."""
        n = self.n
        out = [
            BlowupStage(E3[i - 1], self.class_Bdtilde(i), n + 1, self.segre_N_Bdtilde_X2(i), group="e3")
            for i in (1, 2, 3)
        ]
        out.append(BlowupStage("e2", self.class_B0pred, n + 1, self.chern_N_B0pred_Xp.segre()))
        out.append(BlowupStage("e1", self.class_B0red, 2 * n, self.chern_N_B0red_X.segre()))
        return out

    def bundles(self) -> dict[str, BundleClass]:
        """Every bundle of the catalog, by name."""
        out = {
            "TX": self.chern_TX,
            "T(B0)red": self.chern_T_B0red,
            "TX|(B0)red": self.chern_TX_on_B0red,
            "N_(B0)red X": self.chern_N_B0red_X,
            "Q (base)": self.chern_Q_base,
            "Q": self.chern_Q,
            "TB0|(B0)red": self.chern_TB0_on_B0red,
            "N_(B0)red B0": self.chern_N_B0red_B0,
            "N_(B0')red X'": self.chern_N_B0pred_Xp,
            "E1": self.chern_E1,
            "E2": self.chern_E2,
        }
        for i in (1, 2, 3):
            out[f"N_Z{i} X"] = self.chern_N_Zi_X(i)
            out[f"N_W B{i}"] = self.chern_N_W_Bi(i)
        return out

    def entries(self) -> dict[str, GradedClass]:
        """Every catalog class and total Chern class, by name, for auditing."""
        out = {
            "c(TX)": self.chern_TX.chern,
            "[(B0)red]": self.class_B0red,
            "c(N_(B0)red X)": self.chern_N_B0red_X.chern,
            "c(Q)": self.chern_Q.chern,
            "c(N_(B0)red B0)": self.chern_N_B0red_B0.chern,
            "[(B0')red]": self.class_B0pred,
            "c(N_(B0')red X')": self.chern_N_B0pred_Xp.chern,
            "c(E1)": self.chern_E1.chern,
            "c(E2)": self.chern_E2.chern,
        }
        for i in (1, 2, 3):
            out[f"[Z{i}]"] = self.class_Zi(i)
            out[f"[B{i}]"] = self.class_Bi(i)
            out[f"[B{i} cap (B0)red]"] = self.class_Bi_cap_B0red(i)
            out[f"c(N_Z{i} X)"] = self.chern_N_Zi_X(i).chern
            out[f"s(N_B{i}'' X'')"] = self.segre_N_Bdtilde_X2(i)
            out[f"[B{i}'']"] = self.class_Bdtilde(i)
        return out


@lru_cache(maxsize=64)
def get_catalog(n: int, lift: str = "h2", factors: tuple[str, str, str] = FACTORS) -> Catalog:
    return Catalog(n, lift, tuple(factors))


def _n_of(c: GradedClass) -> int:
    return c.spec.nilpotency[c.spec.index("h2" if "h2" in c.spec.generators else "h")] - 1


def chern_TX(n: int) -> BundleClass:
    return get_catalog(n).chern_TX


def class_B0red(n: int) -> GradedClass:
    return get_catalog(n).class_B0red


def restrict_B0red(c: GradedClass) -> GradedClass:
    return get_catalog(_n_of(c)).restrict_B0red(c)


def lift_B0red(c: GradedClass, lift: str = "h2") -> GradedClass:
    return get_catalog(_n_of(c), lift).lift_B0red(c)


def chern_N_B0red_X(n: int) -> BundleClass:
    return get_catalog(n).chern_N_B0red_X


def chern_Q(n: int) -> BundleClass:
    return get_catalog(n).chern_Q


def chern_N_B0red_B0(n: int) -> BundleClass:
    return get_catalog(n).chern_N_B0red_B0


def class_B0pred(n: int) -> GradedClass:
    return get_catalog(n).class_B0pred


def chern_N_B0pred_Xp(n: int) -> BundleClass:
    return get_catalog(n).chern_N_B0pred_Xp


def class_Bi(n: int, i: int) -> GradedClass:
    return get_catalog(n).class_Bi(i)


def class_Zi(n: int, i: int) -> GradedClass:
    return get_catalog(n).class_Zi(i)


def chern_N_Zi_X(n: int, i: int) -> BundleClass:
    return get_catalog(n).chern_N_Zi_X(i)


def class_Bi_cap_B0red(n: int, i: int) -> GradedClass:
    return get_catalog(n).class_Bi_cap_B0red(i)


def segre_N_Bdtilde_X2(n: int, i: int) -> GradedClass:
    return get_catalog(n).segre_N_Bdtilde_X2(i)


def class_Bdtilde(n: int, i: int) -> GradedClass:
    return get_catalog(n).class_Bdtilde(i)
