"""Degree of L(1,1,1): expand, push down to X, integrate, divide by |S3|.

The pulled-back hyperplane class on the final blow-up is

    H = h1 + h2 + h3 + h4 - e1 - e2 - e31 - e32 - e33

and the degree is (1/6) * integral of H^(3n+1).  The parametrization is
generically 6 to 1 because permuting the three linear forms (together with
the residues) does not change the 1-form.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator

from .geometry import E3, FACTORS, Catalog, GeometryError, get_catalog
from .pushforward import eliminate
from .ring import GradedClass, total

# Table of degrees for n = 3..8 (reference values).
REFERENCE_DEGREES = {
    3: 80,
    4: 4035,
    5: 165984,
    6: 6091960,
    7: 208063680,
    8: 6766823415,
}

SYMMETRY_ORDER = 6
DEFAULT_MAX_N = 12


class DegreeError(RuntimeError):
    """The pipeline produced a non-integral or non-divisible total."""


@dataclass(frozen=True)
class DegreeResult:
    n: int
    degree: int
    pre_division_total: int
    term_count: int
    elapsed: float

    def __post_init__(self):
        if self.pre_division_total != SYMMETRY_ORDER * self.degree:
            raise DegreeError("pre-division total is not 6 times the degree")
        if self.degree <= 0:
            raise DegreeError(f"degree must be positive, got {self.degree}")

    @property
    def elapsed_ms(self) -> int:
        return int(round(self.elapsed * 1000))

    @property
    def verified(self) -> bool | None:
        """True/False against the reference table, None when n is outside it."""
        if self.n not in REFERENCE_DEGREES:
            return None
        return REFERENCE_DEGREES[self.n] == self.degree

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "degree": str(self.degree),
            "pre_division_total": str(self.pre_division_total),
            "term_count": self.term_count,
            "elapsed_ms": self.elapsed_ms,
        }


def max_n(default: int = DEFAULT_MAX_N) -> int:
    """Resource cap for n; ``LOGDEG_MAX_N`` overrides the default."""
    env = os.environ.get("LOGDEG_MAX_N")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"LOGDEG_MAX_N must be an integer, got {env!r}") from None
    return default


def pullback_class(n: int, catalog: Catalog | None = None) -> GradedClass:
    cat = catalog or get_catalog(n)
    R = cat.ring
    out = R.zero()
    for h in ("h1",) + FACTORS:
        out = out + R.gen(h)
    for e in ("e1", "e2") + E3:
        out = out - R.gen(e)
    return out


def integrate_X(c: GradedClass) -> Fraction | int:
    """Degree of the zero-cycle part: coefficient of h1 h2^n h3^n h4^n."""
    spec = c.spec
    leftover = c.generators_used() - {"h1", *FACTORS}
    if leftover:
        raise GeometryError(f"cannot integrate over X with exceptional symbols {sorted(leftover)}")
    n = spec.nilpotency[spec.index("h2")] - 1
    return c.coefficient({"h1": 1, "h2": n, "h3": n, "h4": n})


def expansion_chunks(n: int, catalog: Catalog | None = None) -> Iterator[GradedClass]:
    """Stream H^(3n+1) as disjoint pieces, cross terms e3i*e3k already dropped.

    With A = h1+h2+h3+h4-e1-e2 and the e3 symbols pairwise annihilating,

        H^N = A^N + sum_i sum_{j>=1} C(N, j) (-1)^j A^(N-j) e3i^j.

    Yields A^N first, then one piece per (i, j).
    """
    cat = catalog or get_catalog(n)
    R = cat.ring
    N = cat.dim
    A = R.zero()
    for h in ("h1",) + FACTORS:
        A = A + R.gen(h)
    A = A - R.gen("e1") - R.gen("e2")
    powers = [R.one()]
    for _ in range(N):
        powers.append(powers[-1] * A)
    yield powers[N]
    for e in E3:
        for j in range(1, N + 1):
            piece = powers[N - j].times_power(e, j).scale(comb(N, j) * (-1) ** j)
            if piece:
                yield piece


def expand_pullback_power(n: int, catalog: Catalog | None = None) -> GradedClass:
    cat = catalog or get_catalog(n)
    return total(expansion_chunks(n, cat), cat.ring)


def _check_range(n: int, limit: int | None = None) -> None:
    if not isinstance(n, int) or n < 3:
        raise GeometryError(f"n must be an integer >= 3, got {n!r}")
    limit = max_n() if limit is None else limit
    if n > limit:
        raise ValueError(f"n={n} exceeds the resource cap {limit} (set --max-n or LOGDEG_MAX_N)")


def _partial_integral(args) -> tuple[Fraction | int, int]:
    n, lift, factors, symbol = args
    cat = get_catalog(n, lift, factors)
    pieces = [c for c in expansion_chunks(n, cat) if _chunk_symbol(c) == symbol]
    poly = total(pieces, cat.ring)
    return integrate_X(eliminate(poly, cat.stages())), len(poly)


def _chunk_symbol(c: GradedClass) -> str | None:
    used = c.generators_used() & set(E3)
    return used.pop() if used else None


def degree_L111(
    n: int,
    *,
    lift: str = "h2",
    factors: tuple[str, str, str] = FACTORS,
    workers: int = 1,
    limit: int | None = None,
) -> DegreeResult:
    """Degree of the logarithmic component of type (1,1,1) in P^n."""
    _check_range(n, limit)
    start = time.perf_counter()
    cat = get_catalog(n, lift, tuple(factors))
    if workers > 1:
        # the pipeline is linear: split by exceptional e3 symbol and sum
        jobs = [(n, lift, tuple(factors), s) for s in (None,) + E3]
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            parts = list(pool.map(_partial_integral, jobs))
        raw = sum(p[0] for p in parts)
        term_count = sum(p[1] for p in parts)
    else:
        poly = expand_pullback_power(n, cat)
        term_count = len(poly)
        raw = integrate_X(eliminate(poly, cat.stages()))
    raw = Fraction(raw)
    if raw.denominator != 1:
        raise DegreeError(f"n={n}: pre-division total {raw} is not an integer")
    pre = raw.numerator
    if pre % SYMMETRY_ORDER:
        raise DegreeError(f"n={n}: pre-division total {pre} is not divisible by {SYMMETRY_ORDER}")
    return DegreeResult(n, pre // SYMMETRY_ORDER, pre, term_count, time.perf_counter() - start)


def table(n_from: int, n_to: int, *, workers: int = 1, limit: int | None = None) -> list[DegreeResult]:
    """One result per n in [n_from, n_to]."""
    if not (isinstance(n_from, int) and isinstance(n_to, int)) or n_from < 3 or n_from > n_to:
        raise ValueError(f"invalid range {n_from}..{n_to}: need 3 <= from <= to")
    for n in (n_from, n_to):
        _check_range(n, limit)
    return [degree_L111(n, workers=workers, limit=limit) for n in range(n_from, n_to + 1)]
