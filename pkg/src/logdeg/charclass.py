"""Total Chern and Segre classes of vector bundles.

A bundle is a rank together with its total Chern class.  Segre classes are
always obtained by inverting a Chern series; twisted Segre classes go through
:func:`twist` first, so there is a single code path to trust.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .ring import GradedClass, RingError


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class BundleClass:
    rank: int
    chern: GradedClass

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 0:
            raise BundleError(f"rank must be a non-negative integer, got {self.rank!r}")
        if self.chern.constant_term() != 1:
            raise BundleError("total Chern class must have constant term 1")

    @property
    def spec(self):
        return self.chern.spec

    def c(self, k: int) -> GradedClass:
        """The k-th Chern class."""
        return self.chern.graded_part(k)

    def segre(self) -> GradedClass:
        return segre(self)

    def __mul__(self, other: BundleClass) -> BundleClass:
        """Whitney sum."""
        if not isinstance(other, BundleClass):
            return NotImplemented
        return BundleClass(self.rank + other.rank, self.chern * other.chern)

    def substitute(self, mapping, target) -> BundleClass:
        return BundleClass(self.rank, self.chern.substitute(mapping, target))


def trivial_bundle(spec, rank: int = 0) -> BundleClass:
    return BundleClass(rank, spec.one())


def line_bundle(c1: GradedClass) -> BundleClass:
    if not c1.is_homogeneous(1):
        raise BundleError("first Chern class of a line bundle must be of pure degree 1")
    return BundleClass(1, c1.spec.one() + c1)


def segre(b: BundleClass) -> GradedClass:
    """Total Segre class: the formal inverse of the total Chern class."""
    return b.chern.invert_unit()


def whitney_quotient(total: BundleClass, sub: BundleClass) -> BundleClass:
    """Chern data of ``Q`` in ``0 -> sub -> total -> Q -> 0``."""
    if total.rank < sub.rank:
        raise BundleError(f"rank underflow: {total.rank} - {sub.rank}")
    if total.spec != sub.spec:
        raise RingError("bundles live in different rings")
    return BundleClass(total.rank - sub.rank, total.chern * sub.chern.invert_unit())


def twist(b: BundleClass, t: GradedClass) -> BundleClass:
    """Tensor product with a line bundle of first Chern class ``t``.

    c_k(E (x) L) = sum_{i<=k} C(r - i, k - i) c_i(E) t^(k - i)
    """
    if t.spec != b.spec:
        raise RingError("twisting class lives in a different ring")
    if not t.is_homogeneous(1):
        raise BundleError("twisting class must be homogeneous of degree 1")
    r = b.rank
    parts = b.chern.graded_parts()
    if any(d > r for d in parts):
        raise BundleError(f"Chern series has classes above the rank {r}")
    if t.is_zero():
        return b
    spec = b.spec
    tpow = [spec.one()]
    for _ in range(r):
        tpow.append(tpow[-1] * t)
    out = spec.zero()
    for i, ci in parts.items():
        for k in range(i, r + 1):
            out = out + (ci * tpow[k - i]).scale(comb(r - i, k - i))
    return BundleClass(r, out)


def tangent_projective(m: int, h: GradedClass) -> BundleClass:
    """Tangent bundle of P^m with hyperplane class ``h`` (Euler sequence)."""
    if m < 1:
        raise BundleError("projective space dimension must be at least 1")
    if not h.is_homogeneous(1) or h.is_zero():
        raise BundleError("hyperplane class must be a nonzero degree-1 class")
    return BundleClass(m, (h.spec.one() + h) ** (m + 1))
