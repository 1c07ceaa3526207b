"""Elimination of exceptional symbols by blow-up pushforward.

For a blow-up along a smooth center C of codimension c with exceptional class e,

    pi_*(e^j) = (-1)^(j-1) s_{j-c}(N_C) . [C]      (j >= 1),

and the projection formula moves every factor free of ``e`` outside.  Both
the Segre series and [C] are ambient classes, so the whole computation stays
inside one symbol ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .ring import GradedClass, total


class EliminationError(RuntimeError):
    """A stage reintroduced a symbol that was already eliminated."""


@dataclass(frozen=True)
class BlowupStage:
    """One pushforward rule: exceptional symbol, center class, normal Segre series.

    Stages sharing a ``group`` have pairwise disjoint centers, so products of
    their exceptional symbols vanish.
    """

    symbol: str
    center_class: GradedClass
    center_codim: int
    segre_series: GradedClass
    group: str | None = None

    def __post_init__(self):
        if self.center_codim < 1:
            raise ValueError("center codimension must be positive")
        if not self.center_class.is_homogeneous(self.center_codim):
            raise ValueError(f"center class of {self.symbol} is not pure of codimension {self.center_codim}")
        if self.segre_series.constant_term() != 1:
            raise ValueError(f"Segre series of {self.symbol} must have constant term 1")
        if self.center_class.spec != self.segre_series.spec:
            raise ValueError("center class and Segre series live in different rings")
        self.spec.index(self.symbol)

    @property
    def spec(self):
        return self.center_class.spec

    @cached_property
    def segre_parts(self) -> dict[int, GradedClass]:
        return self.segre_series.graded_parts()

    def signed_segre(self, j: int) -> GradedClass:
        """(-1)^(j-1) s_{j-c}, zero for negative index."""
        k = j - self.center_codim
        part = self.segre_parts.get(k)
        if k < 0 or part is None:
            return self.spec.zero()
        return part if j % 2 else -part


def push_power(stage: BlowupStage, j: int) -> GradedClass:
    """Pushforward of the j-th power of the exceptional class."""
    if j < 0:
        raise ValueError("power must be non-negative")
    if j == 0:
        return stage.spec.one()
    return stage.signed_segre(j) * stage.center_class


def supported_push(G: GradedClass, support: GradedClass, e: str, grade: int) -> GradedClass:
    """Push a class living on an exceptional divisor back to the ambient.

    The integrand ``G`` is an ambient class restricted to the divisor; its
    piece of degree ``grade`` is multiplied by the class ``support`` of the
    sub-locus of the center it sits over, and by the divisor class ``e``.
    """
    if not support.is_homogeneous():
        raise ValueError("support class must be of pure codimension")
    if grade < 0 or grade > G.spec.total_cap:
        return G.spec.zero()
    return G.graded_part(grade) * support * G.spec.gen(e)


def annihilate_disjoint(poly: GradedClass, stages: Sequence[BlowupStage]) -> GradedClass:
    """Drop monomials containing two exceptional symbols of the same group."""
    groups: dict[str, list[int]] = {}
    for st in stages:
        if st.group is not None:
            groups.setdefault(st.group, []).append(poly.spec.field_mask(st.symbol))
    masks = [m for m in groups.values() if len(m) > 1]
    if not masks:
        return poly

    def single(key: int) -> bool:
        return all(sum(1 for m in ms if key & m) <= 1 for ms in masks)

    return poly.select(single)


def eliminate_stage(poly: GradedClass, stage: BlowupStage) -> GradedClass:
    """Apply one stage: sum_j e^j a_j  ->  a_0 + [C] * sum_j (-1)^(j-1) s_{j-c} a_j."""
    spec = poly.spec
    pieces = poly.without(stage.symbol)
    base = pieces.pop(0, spec.zero())
    inner = total((a * stage.signed_segre(j) for j, a in pieces.items()), spec)
    if inner.is_zero():
        return base
    return base + inner * stage.center_class


def eliminate(poly: GradedClass, stages: Sequence[BlowupStage]) -> GradedClass:
    """Eliminate the exceptional symbols of ``stages`` in the order given."""
    poly = annihilate_disjoint(poly, stages)
    done: list[str] = []
    for stage in stages:
        for name in done + [stage.symbol]:
            if stage.center_class.exponent_of(name) or stage.segre_series.exponent_of(name):
                raise EliminationError(
                    f"stage {stage.symbol} reintroduces already-eliminated symbol {name}"
                )
        poly = eliminate_stage(poly, stage)
        done.append(stage.symbol)
        for name in done:
            if poly.exponent_of(name):
                raise EliminationError(f"symbol {name} survived its elimination stage")
    return poly
