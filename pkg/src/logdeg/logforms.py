"""Logarithmic 1-forms of type (1,1,1) as exact polynomial objects.

A triple (lambda, F) with sum(lambda) = 0 and linear forms F1, F2, F3 gives

    omega = F1 F2 F3 * sum_i lambda_i dF_i / F_i
          = sum_i lambda_i (prod_{j != i} F_j) dF_i,

a twisted 1-form with quadratic coefficients.  This module checks, by exact
expansion, the identities and base-locus facts that the degree computation
rests on: radial contraction, integrability, the epsilon-expansion of omega
near its base locus, and the Vandermonde dichotomy used for the second
blow-up.

Polynomials in x0..xn (plus a formal parameter ``eps`` with eps^3 = 0) are
:class:`~logdeg.ring.GradedClass` values over a ring with generous caps.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import NamedTuple, Sequence

from .ring import GradedClass, RingSpec, make_ring

POLY_CAP = 24
MU = {1: (0, 1, -1), 2: (1, 0, -1), 3: (1, -1, 0)}


class BaseLocusError(ValueError):
    """The base point of a perturbation does not lie in the base locus."""


class NonPolynomialError(ArithmeticError):
    """A rational expression failed to clear its denominator."""


class DichotomyViolation(RuntimeError):
    """Vandermonde dichotomy reached neither disjunct."""


@lru_cache(maxsize=None)
def form_ring(n: int) -> RingSpec:
    """Q[x0..xn, eps] with eps^3 = 0 and room for degree-24 polynomials."""
    if n < 1:
        raise ValueError("n must be positive")
    names = tuple(f"x{i}" for i in range(n + 1)) + ("eps",)
    return make_ring(names, (POLY_CAP + 1,) * (n + 1) + (3,), POLY_CAP)


def coords(spec: RingSpec) -> list[str]:
    return [g for g in spec.generators if g != "eps"]


def linear_form(n: int, coeffs: Sequence) -> GradedClass:
    R = form_ring(n)
    if len(coeffs) != n + 1:
        raise ValueError(f"need {n + 1} coefficients, got {len(coeffs)}")
    return sum((R.gen(f"x{i}", c) for i, c in enumerate(coeffs) if c), R.zero())


def linear_coeffs(p: GradedClass) -> tuple[Fraction, ...]:
    """Coefficient vector of a linear form."""
    if not p.is_homogeneous(1) and not p.is_zero():
        raise ValueError("not a linear form")
    names = coords(p.spec)
    return tuple(Fraction(p.coefficient({x: 1})) for x in names)


def _normalized(vec: Sequence) -> tuple[Fraction, ...] | None:
    """Scale so the first nonzero entry is 1; None for the zero vector."""
    vec = [Fraction(v) for v in vec]
    for v in vec:
        if v:
            return tuple(x / v for x in vec)
    return None


def proportional(a: Sequence, b: Sequence) -> bool:
    """Projective equality of two nonzero vectors."""
    na, nb = _normalized(a), _normalized(b)
    return na is not None and na == nb


@dataclass(frozen=True)
class LinearTriple:
    lam: tuple[Fraction, Fraction, Fraction]
    F: tuple[GradedClass, GradedClass, GradedClass]

    def __post_init__(self):
        lam = tuple(Fraction(x) for x in self.lam)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "F", tuple(self.F))
        if len(lam) != 3 or len(self.F) != 3:
            raise ValueError("a triple has three residues and three forms")
        if sum(lam) != 0:
            raise ValueError(f"residues must sum to zero, got {lam}")
        if not any(lam):
            raise ValueError("residues must not all vanish")
        specs = {f.spec for f in self.F}
        if len(specs) != 1:
            raise ValueError("forms live in different rings")
        for f in self.F:
            if f.is_zero() or not f.is_homogeneous(1):
                raise ValueError("each F_i must be a nonzero linear form")

    @property
    def spec(self) -> RingSpec:
        return self.F[0].spec

    @property
    def n(self) -> int:
        return len(coords(self.spec)) - 1

    def permuted(self, sigma: Sequence[int]) -> LinearTriple:
        return LinearTriple(tuple(self.lam[s] for s in sigma), tuple(self.F[s] for s in sigma))

    def describe(self) -> str:
        lam = ", ".join(str(x) for x in self.lam)
        forms = "; ".join(f.to_text() for f in self.F)
        return f"lambda=({lam}) F=({forms})"


def make_triple(lam: Sequence, rows: Sequence[Sequence], n: int | None = None) -> LinearTriple:
    n = len(rows[0]) - 1 if n is None else n
    return LinearTriple(tuple(lam), tuple(linear_form(n, r) for r in rows))


@dataclass(frozen=True)
class TwistedForm:
    """sum_k coeffs[k] dx_k with homogeneous coefficients of a common degree."""

    coeffs: tuple[GradedClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        degs = set()
        for c in self.coeffs:
            if not c.is_homogeneous():
                raise ValueError("form coefficients must be homogeneous")
            degs |= c.degrees()
        if len(degs) > 1:
            raise ValueError(f"form coefficients have mixed degrees {sorted(degs)}")

    @property
    def spec(self) -> RingSpec:
        return self.coeffs[0].spec

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: TwistedForm) -> TwistedForm:
        return TwistedForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: TwistedForm) -> TwistedForm:
        return TwistedForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> TwistedForm:
        return TwistedForm(tuple(a.scale(c) for a in self.coeffs))

    def to_text(self) -> str:
        parts = [f"({c.to_text()}) dx{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) or "0"


def differential(p: GradedClass) -> tuple[GradedClass, ...]:
    """dp as a coefficient vector."""
    return tuple(p.derivative(x) for x in coords(p.spec))


def exterior_derivative(w: TwistedForm) -> dict[tuple[int, int], GradedClass]:
    """d(sum a_k dx_k) as {(i, j): coefficient of dx_i ^ dx_j}, i < j."""
    names = coords(w.spec)
    out = {}
    for i, j in combinations(range(len(names)), 2):
        out[(i, j)] = w.coeffs[j].derivative(names[i]) - w.coeffs[i].derivative(names[j])
    return out


def wedge11(a: Sequence[GradedClass], b: Sequence[GradedClass]) -> dict[tuple[int, int], GradedClass]:
    return {(i, j): a[i] * b[j] - a[j] * b[i] for i, j in combinations(range(len(a)), 2)}


def wedge12(a: Sequence[GradedClass], eta: dict) -> dict[tuple[int, int, int], GradedClass]:
    return {
        (i, j, k): a[i] * eta[(j, k)] - a[j] * eta[(i, k)] + a[k] * eta[(i, j)]
        for i, j, k in combinations(range(len(a)), 3)
    }


def omega(t: LinearTriple) -> TwistedForm:
    R = t.spec
    dF = [differential(f) for f in t.F]
    coeffs = []
    for k in range(t.n + 1):
        acc = R.zero()
        for i in range(3):
            if not t.lam[i]:
                continue
            j, l = (m for m in range(3) if m != i)
            acc = acc + (t.F[j] * t.F[l] * dF[i][k]).scale(t.lam[i])
        coeffs.append(acc)
    return TwistedForm(tuple(coeffs))


def contract_radial(w: TwistedForm) -> GradedClass:
    """i_R(w) = sum_k x_k a_k."""
    R = w.spec
    return sum((R.gen(x) * a for x, a in zip(coords(R), w.coeffs)), R.zero())


def frobenius_form(w: TwistedForm) -> dict[tuple[int, int, int], GradedClass]:
    return wedge12(w.coeffs, exterior_derivative(w))


def frobenius_check(w: TwistedForm) -> bool:
    """omega ^ d omega == 0 exactly."""
    return all(c.is_zero() for c in frobenius_form(w).values())


def log_derivative_identity(t: LinearTriple) -> bool:
    """F d(omega) == dF ^ omega with F = F1 F2 F3."""
    w = omega(t)
    F = t.F[0] * t.F[1] * t.F[2]
    lhs = {k: F * v for k, v in exterior_derivative(w).items()}
    rhs = wedge11(differential(F), w.coeffs)
    return lhs == rhs


def s3_orbit_invariance(t: LinearTriple) -> bool:
    w = omega(t)
    return all(omega(t.permuted(s)) == w for s in permutations(range(3)))


def base_locus_component(t: LinearTriple) -> str | None:
    """Which component of the base locus contains [t]: B0, B1, B2, B3 or None."""
    vecs = [linear_coeffs(f) for f in t.F]
    if proportional(vecs[0], vecs[1]) and proportional(vecs[1], vecs[2]):
        return "B0"
    for i, mu in MU.items():
        j, k = (m - 1 for m in (1, 2, 3) if m != i)
        if proportional(t.lam, mu) and proportional(vecs[j], vecs[k]):
            return f"B{i}"
    return None


# -- perturbations -----------------------------------------------------------


@dataclass(frozen=True)
class Perturbation:
    """A base point x and a direction v = (lambda', F'); the curve is x + eps v."""

    base: LinearTriple
    dlam: tuple[Fraction, Fraction, Fraction]
    dF: tuple[GradedClass, GradedClass, GradedClass]

    def __post_init__(self):
        dlam = tuple(Fraction(x) for x in self.dlam)
        object.__setattr__(self, "dlam", dlam)
        object.__setattr__(self, "dF", tuple(self.dF))
        if sum(dlam) != 0:
            raise ValueError("direction residues must sum to zero")
        for f in self.dF:
            if f.spec != self.base.spec or not f.is_homogeneous(1) and not f.is_zero():
                raise ValueError("direction forms must be linear forms in the base ring")

    def describe(self) -> str:
        dlam = ", ".join(str(x) for x in self.dlam)
        return f"{self.base.describe()} dlambda=({dlam}) dF=({'; '.join(f.to_text() for f in self.dF)})"


def _require_base_locus(p: Perturbation) -> None:
    if not omega(p.base).is_zero():
        raise BaseLocusError(f"base point is not in the base locus: {p.base.describe()}")


def expand_eps(p: Perturbation, order: int = 3) -> list[TwistedForm]:
    """Coefficients of eps^0 .. eps^(order-1) in mu(x + eps v), by direct expansion."""
    if not 1 <= order <= 3:
        raise ValueError("order must be between 1 and 3 (eps^3 = 0 in the form ring)")
    _require_base_locus(p)
    t = p.base
    R = t.spec
    eps = R.gen("eps")
    G = [f + eps * g for f, g in zip(t.F, p.dF)]
    L = [R.const(a) + eps.scale(b) for a, b in zip(t.lam, p.dlam)]
    dG = [differential(g) for g in G]
    raw = []
    for k in range(t.n + 1):
        acc = R.zero()
        for i in range(3):
            j, l = (m for m in range(3) if m != i)
            acc = acc + L[i] * G[j] * G[l] * dG[i][k]
        raw.append(acc.without("eps"))
    return [TwistedForm(tuple(r.get(e, R.zero()) for r in raw)) for e in range(order)]


def exact_divide(num: GradedClass, den: GradedClass) -> GradedClass:
    """Quotient num / den, raising NonPolynomialError unless it is exact.

    Graded-lex long division on packed keys; the remainder is updated in
    place and its leading key is tracked with a heap.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    R = num.spec
    if num.is_zero():
        return R.zero()
    if max(num.max_degree(), den.max_degree()) >= R.total_cap:
        raise ValueError("polynomial degree too close to the ring cap for exact division")
    dterms = den.packed_terms()
    kd = max(dterms)
    cd = dterms[kd]
    ed = R.unpack(kd)
    rem = dict(num.packed_terms())
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot: dict = {}
    while heap:
        kr = -heapq.heappop(heap)
        c = rem.get(kr)
        if not c:
            continue
        if any(a < b for a, b in zip(R.unpack(kr), ed)):
            raise NonPolynomialError("denominator does not divide the numerator")
        kq = kr - kd
        cq = _div(c, cd)
        quot[kq] = cq
        for k, v in dterms.items():
            key = kq + k
            new = rem.get(key, 0) - cq * v
            if new:
                if key not in rem:
                    heapq.heappush(heap, -key)
                rem[key] = new
            else:
                rem.pop(key, None)
    return GradedClass._raw(R, quot)


def _div(a, b):
    """a / b, staying in int when the quotient is integral."""
    if type(a) is int and type(b) is int and a % b == 0:
        return a // b
    q = Fraction(a) / b
    return q.numerator if q.denominator == 1 else q


@dataclass
class _Frac:
    """num / (F1^a1 F2^a2 F3^a3) for the fixed linear forms of a triple."""

    num: GradedClass
    den: tuple[int, int, int] = (0, 0, 0)


@dataclass
class _FracField:
    """Rational functions whose denominators are products of F1, F2, F3."""

    F: tuple[GradedClass, GradedClass, GradedClass]
    _dF: list = field(init=False)

    def __post_init__(self):
        self._dF = [differential(f) for f in self.F]

    def _prod(self, exps) -> GradedClass:
        out = self.F[0].spec.one()
        for f, e in zip(self.F, exps):
            if e:
                out = out * f**e
        return out

    def add(self, a: _Frac, b: _Frac) -> _Frac:
        den = tuple(max(x, y) for x, y in zip(a.den, b.den))
        na = a.num * self._prod(tuple(d - x for d, x in zip(den, a.den)))
        nb = b.num * self._prod(tuple(d - y for d, y in zip(den, b.den)))
        return _Frac(na + nb, den)

    def total(self, items) -> _Frac:
        out = _Frac(self.F[0].spec.zero())
        for it in items:
            out = self.add(out, it)
        return out

    def times(self, a: _Frac, b: _Frac) -> _Frac:
        return _Frac(a.num * b.num, tuple(x + y for x, y in zip(a.den, b.den)))

    def times_F(self, a: _Frac) -> _Frac:
        """Multiply by F = F1 F2 F3, cancelling against the denominator first."""
        num, den = a.num, list(a.den)
        for i in range(3):
            if den[i]:
                den[i] -= 1
            else:
                num = num * self.F[i]
        return _Frac(num, tuple(den))

    def gradient(self, a: _Frac) -> list[_Frac]:
        """All partials d/dx_k of N / prod F_i^a_i over one common denominator.

        The dF_i are constants, so the products N * prod_{m != i} F_m are
        shared between the coordinates.
        """
        names = coords(a.num.spec)
        P = [i for i in range(3) if a.den[i]]
        prodP = self._prod(tuple(1 if i in P else 0 for i in range(3)))
        rests = {
            i: a.num * self._prod(tuple(1 if (m in P and m != i) else 0 for m in range(3)))
            for i in P
        }
        den = tuple(d + (1 if i in P else 0) for i, d in enumerate(a.den))
        out = []
        for k, name in enumerate(names):
            num = a.num.derivative(name) * prodP
            for i in P:
                c = self._dF[i][k].constant_term()
                if c:
                    num = num - rests[i].scale(a.den[i] * c)
            out.append(_Frac(num, den))
        return out

    def clear(self, a: _Frac) -> GradedClass:
        return exact_divide(a.num, self._prod(a.den))


def _unit(i: int, e: int) -> tuple[int, int, int]:
    out = [0, 0, 0]
    out[i] = e
    return tuple(out)


def _H1_coeffs(p: Perturbation, field_: _FracField) -> list[GradedClass]:
    t = p.base
    R = t.spec
    dF = [differential(f) for f in t.F]
    S = field_.total(_Frac(p.dF[i].scale(t.lam[i]), _unit(i, 1)) for i in range(3))
    grad = field_.gradient(S)
    out = []
    for k in range(t.n + 1):
        poly = R.zero()
        for i in range(3):
            j, l = (m for m in range(3) if m != i)
            poly = poly + (t.F[j] * t.F[l] * dF[i][k]).scale(p.dlam[i])
        rest = field_.times_F(grad[k])
        out.append(field_.clear(field_.add(_Frac(poly), rest)))
    return out


def H1(p: Perturbation) -> TwistedForm:
    """F (sum lambda'_i dF_i/F_i + d(sum lambda_i F'_i/F_i)), cleared to a polynomial form."""
    _require_base_locus(p)
    return TwistedForm(tuple(_H1_coeffs(p, _FracField(p.base.F))))


def H2(p: Perturbation) -> TwistedForm:
    """(sum F'_i/F_i) H1 + F d(sum (lambda'_i F'_i F_i - lambda_i F'_i^2 / 2) / F_i^2)."""
    _require_base_locus(p)
    t = p.base
    fld = _FracField(t.F)
    h1 = _H1_coeffs(p, fld)
    sigma = fld.total(_Frac(p.dF[i], _unit(i, 1)) for i in range(3))
    T = fld.total(
        _Frac((p.dF[i] * t.F[i]).scale(p.dlam[i]) - (p.dF[i] * p.dF[i]).scale(t.lam[i] / 2), _unit(i, 2))
        for i in range(3)
    )
    grad = fld.gradient(T)
    out = []
    for k in range(t.n + 1):
        first = fld.times(sigma, _Frac(h1[k]))
        second = fld.times_F(grad[k])
        out.append(fld.clear(fld.add(first, second)))
    return TwistedForm(tuple(out))


# -- the Vandermonde dichotomy -----------------------------------------------


def reduce_mod_linear(p: GradedClass, F0: GradedClass) -> GradedClass:
    """Normal form of p modulo a linear form, by eliminating one variable."""
    vec = linear_coeffs(F0)
    names = coords(F0.spec)
    k = max(i for i, v in enumerate(vec) if v)
    R = F0.spec
    repl = sum((R.gen(names[i], -vec[i] / vec[k]) for i in range(len(vec)) if i != k and vec[i]), R.zero())
    mapping = {x: R.gen(x) for x in R.generators}
    mapping[names[k]] = repl
    return p.substitute(mapping, R)


def congruent(a: GradedClass, b: GradedClass, F0: GradedClass) -> bool:
    return reduce_mod_linear(a - b, F0).is_zero()


class Dichotomy(NamedTuple):
    kind: str  # "all" or "pair"
    pair: tuple[int, int] | None = None


def vandermonde_dichotomy(F0: GradedClass, lam: Sequence, Fp: Sequence[GradedClass]) -> Dichotomy:
    """Decide which alternative holds when the residues are killed by the
    Vandermonde matrix of F'_1, F'_2, F'_3 modulo F0.

    Returns ``Dichotomy("all")`` when all F'_i agree mod F0, otherwise the
    1-based pair (i, j) with F'_i = F'_j mod F0 and lambda_i + lambda_j = 0.
    """
    lam = tuple(Fraction(x) for x in lam)
    if len(lam) != 3 or len(Fp) != 3:
        raise ValueError("need three residues and three forms")
    if sum(lam) != 0 or not any(lam):
        raise ValueError("residues must be nonzero and sum to zero")
    if F0.is_zero() or not F0.is_homogeneous(1):
        raise ValueError("F0 must be a nonzero linear form")
    R = F0.spec
    lin = sum((f.scale(l) for f, l in zip(Fp, lam)), R.zero())
    quad = sum((f * f).scale(l) for f, l in zip(Fp, lam)) if Fp else R.zero()
    if not reduce_mod_linear(lin, F0).is_zero():
        raise ValueError("sum lambda_i F'_i is not divisible by F0")
    if not reduce_mod_linear(quad, F0).is_zero():
        raise ValueError("sum lambda_i F'_i^2 is not divisible by F0")
    red = [reduce_mod_linear(f, F0) for f in Fp]
    if red[0] == red[1] == red[2]:
        return Dichotomy("all")
    for i, j in combinations(range(3), 2):
        if red[i] == red[j] and lam[i] + lam[j] == 0:
            return Dichotomy("pair", (i + 1, j + 1))
    raise DichotomyViolation(f"no alternative holds for lambda={lam}")


# -- random instances --------------------------------------------------------


def random_vector(rng: random.Random, size: int, bound: int = 3, nonzero: bool = True) -> list[int]:
    while True:
        v = [rng.randint(-bound, bound) for _ in range(size)]
        if any(v) or not nonzero:
            return v


def random_form(rng: random.Random, n: int, bound: int = 3) -> GradedClass:
    return linear_form(n, random_vector(rng, n + 1, bound))


def random_lambda(rng: random.Random, bound: int = 4) -> tuple[int, int, int]:
    while True:
        a, b = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if a or b:
            return (a, b, -a - b)


def _nonzero(rng: random.Random, bound: int = 3) -> int:
    return rng.choice([k for k in range(-bound, bound + 1) if k])


def random_component_triple(rng: random.Random, n: int, component: str, exact: bool = False) -> LinearTriple:
    """A random point of B0..B3; ``exact`` uses equal (not merely proportional) forms."""
    if component == "B0":
        F0 = random_form(rng, n)
        forms = tuple(F0 if exact else F0.scale(_nonzero(rng)) for _ in range(3))
        return LinearTriple(random_lambda(rng), forms)
    i = int(component[1])
    j, k = (m - 1 for m in (1, 2, 3) if m != i)
    G = random_form(rng, n)
    forms = [None, None, None]
    forms[j] = G
    forms[k] = G if exact else G.scale(_nonzero(rng))
    forms[i - 1] = random_form(rng, n)
    scale = _nonzero(rng)
    return LinearTriple(tuple(scale * x for x in MU[i]), tuple(forms))


def random_adversarial_triple(rng: random.Random, n: int) -> LinearTriple:
    """Near misses: one condition of a component holds but not the other."""
    kind = rng.randrange(3)
    G, H, K = random_form(rng, n), random_form(rng, n), random_form(rng, n)
    if kind == 0:
        # F1 ~ F2 with generic residues
        return LinearTriple(random_lambda(rng), (G, G.scale(_nonzero(rng)), H))
    if kind == 1:
        # residues of B3 with the wrong pair proportional
        return LinearTriple(MU[3], (G, H, G.scale(_nonzero(rng))))
    # linearly dependent but pairwise independent forms
    return LinearTriple(random_lambda(rng), (G, H, G + H if (G + H) else K))


def random_triple(rng: random.Random, n: int) -> LinearTriple:
    return LinearTriple(random_lambda(rng), tuple(random_form(rng, n) for _ in range(3)))


def random_direction(rng: random.Random, n: int, base: LinearTriple) -> Perturbation:
    return Perturbation(base, random_lambda(rng), tuple(random_form(rng, n) for _ in range(3)))


def random_base_perturbation(rng: random.Random, n: int) -> Perturbation:
    comp = rng.choice(["B0", "B0", "B1", "B2", "B3"])
    return random_direction(rng, n, random_component_triple(rng, n, comp, exact=rng.random() < 0.5))


def random_B0_tangent(rng: random.Random, n: int) -> Perturbation:
    """A direction at an exact (B0)red point with sum lambda_i F'_i = 0 mod F0."""
    base = random_component_triple(rng, n, "B0", exact=True)
    F0 = base.F[0]
    lam = base.lam
    k = max(i for i in range(3) if lam[i])
    forms = [random_form(rng, n) for _ in range(3)]
    others = sum((forms[i].scale(lam[i]) for i in range(3) if i != k), F0.spec.zero())
    forms[k] = others.scale(-1 / lam[k]) + F0.scale(rng.randint(-2, 2))
    return Perturbation(base, random_lambda(rng), tuple(forms))


def random_vandermonde_instance(rng: random.Random, n: int):
    """A valid (F0, lambda, F') built to satisfy both congruences."""
    F0 = random_form(rng, n)
    G = random_form(rng, n)
    if rng.random() < 0.4:
        Fp = tuple(G + F0.scale(rng.randint(-2, 2)) for _ in range(3))
        return F0, random_lambda(rng), Fp
    i, j = rng.sample(range(3), 2)
    k = 3 - i - j
    t = _nonzero(rng, 4)
    lam = [0, 0, 0]
    lam[i], lam[j] = t, -t
    Fp = [None, None, None]
    Fp[i] = G + F0.scale(rng.randint(-2, 2))
    Fp[j] = G + F0.scale(rng.randint(-2, 2))
    Fp[k] = random_form(rng, n)
    return F0, tuple(lam), tuple(Fp)


# -- randomized oracle suite -------------------------------------------------

DEFAULT_SEED = 1729
SUITE_SIZES = {"forms": 500, "lemma": 200, "tangent": 200, "vandermonde": 200}
SUITE_NS = (3, 4, 5)
SHARDS = 4
MAX_REPORTED = 5

PROPERTIES = {
    "forms": ("radial_contraction", "frobenius", "log_derivative", "s3_orbit", "base_locus_iff"),
    "lemma": ("lemma_H1", "lemma_H2"),
    "tangent": ("tangent_B0red",),
    "vandermonde": ("vandermonde",),
}


@dataclass
class PropertyReport:
    name: str
    checked: int = 0
    failed: int = 0
    counterexamples: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.failed == 0

    def record(self, ok: bool, witness) -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if len(self.counterexamples) < MAX_REPORTED:
                self.counterexamples.append(witness() if callable(witness) else str(witness))

    def merge(self, other: PropertyReport) -> None:
        self.checked += other.checked
        self.failed += other.failed
        room = MAX_REPORTED - len(self.counterexamples)
        self.counterexamples.extend(other.counterexamples[:room])

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked - self.failed}/{self.checked}"


def _form_instance(rng: random.Random, idx: int, ns) -> tuple[LinearTriple, str | None]:
    """Mix of generic, base-locus and adversarial triples; returns the intended tag."""
    n = ns[idx % len(ns)]
    kind = idx % 5
    if kind == 2:
        comp = rng.choice(["B0", "B1", "B2", "B3"])
        return random_component_triple(rng, n, comp, exact=rng.random() < 0.5), comp
    if kind == 3:
        return random_adversarial_triple(rng, n), None
    return random_triple(rng, n), None


def _check_forms(reports, rng, count, ns):
    r = {name: reports[name] for name in PROPERTIES["forms"]}
    for idx in range(count):
        t, intended = _form_instance(rng, idx, ns)
        w = omega(t)
        tag = base_locus_component(t)
        r["radial_contraction"].record(contract_radial(w).is_zero(), t.describe)
        r["frobenius"].record(frobenius_check(w), t.describe)
        r["log_derivative"].record(log_derivative_identity(t), t.describe)
        r["s3_orbit"].record(s3_orbit_invariance(t), t.describe)
        agrees = w.is_zero() == (tag is not None)
        if intended is not None:
            # a degenerate draw may land in (B0)red, which takes priority
            agrees = agrees and tag in (intended, "B0")
        r["base_locus_iff"].record(agrees, lambda: f"{t.describe()} tag={tag}")


def _check_lemma(reports, rng, count, ns):
    for idx in range(count):
        p = random_base_perturbation(rng, ns[idx % len(ns)])
        c = expand_eps(p)
        reports["lemma_H1"].record(c[1] == H1(p), p.describe)
        reports["lemma_H2"].record(c[2] == H2(p), p.describe)


def _check_tangent(reports, rng, count, ns):
    for idx in range(count):
        n = ns[idx % len(ns)]
        if idx % 2:
            p = random_B0_tangent(rng, n)
        else:
            p = random_direction(rng, n, random_component_triple(rng, n, "B0", exact=True))
        F0 = p.base.F[0]
        lin = sum((f.scale(l) for f, l in zip(p.dF, p.base.lam)), F0.spec.zero())
        tangent = reduce_mod_linear(lin, F0).is_zero()
        reports["tangent_B0red"].record(H1(p).is_zero() == tangent, p.describe)


def _multiple_of(p: GradedClass, F0: GradedClass) -> bool:
    """Brute force: p is a (possibly zero) scalar multiple of F0 times a polynomial."""
    if p.is_zero():
        return True
    try:
        exact_divide(p, F0)
    except NonPolynomialError:
        return False
    return True


def recheck_dichotomy(F0, lam, Fp, result: Dichotomy) -> bool:
    """Verify a returned disjunct directly from its defining congruences."""
    lam = tuple(Fraction(x) for x in lam)
    if result.kind == "all":
        return all(_multiple_of(Fp[i] - Fp[j], F0) for i, j in combinations(range(3), 2))
    i, j = (k - 1 for k in result.pair)
    return _multiple_of(Fp[i] - Fp[j], F0) and lam[i] + lam[j] == 0


def _check_vandermonde(reports, rng, count, ns):
    for idx in range(count):
        F0, lam, Fp = random_vandermonde_instance(rng, ns[idx % len(ns)])

        def witness():
            return f"F0={F0.to_text()} lambda={lam} F'=({'; '.join(f.to_text() for f in Fp)})"

        try:
            result = vandermonde_dichotomy(F0, lam, Fp)
        except (DichotomyViolation, ValueError) as exc:
            reports["vandermonde"].record(False, f"{witness()} error={exc}")
            continue
        reports["vandermonde"].record(recheck_dichotomy(F0, lam, Fp, result), witness)


_CHECKERS = {
    "forms": _check_forms,
    "lemma": _check_lemma,
    "tangent": _check_tangent,
    "vandermonde": _check_vandermonde,
}


def _run_shard(job) -> dict[str, PropertyReport]:
    section, shard, seed, count, ns = job
    rng = random.Random(f"{seed}:{section}:{shard}")
    reports = {name: PropertyReport(name) for name in PROPERTIES[section]}
    _CHECKERS[section](reports, rng, count, ns)
    return reports


def _shard_sizes(total: int, shards: int) -> list[int]:
    base, extra = divmod(total, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def run_oracle_suite(
    seed: int = DEFAULT_SEED,
    *,
    workers: int = 1,
    sizes: dict[str, int] | None = None,
    ns: Sequence[int] = SUITE_NS,
) -> list[PropertyReport]:
    """Run every randomized property; the result does not depend on ``workers``."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    if workers < 1:
        raise ValueError("workers must be positive")
    sizes = {**SUITE_SIZES, **(sizes or {})}
    ns = tuple(ns)
    jobs = [
        (section, shard, seed, count, ns)
        for section in PROPERTIES
        for shard, count in enumerate(_shard_sizes(sizes[section], SHARDS))
        if count
    ]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_shard, jobs))
    else:
        parts = [_run_shard(j) for j in jobs]
    merged = {name: PropertyReport(name) for names in PROPERTIES.values() for name in names}
    for part in parts:
        for name, rep in part.items():
            merged[name].merge(rep)
    return list(merged.values())
