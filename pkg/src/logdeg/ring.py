"""Exact sparse arithmetic in truncated multigraded quotient algebras.

An algebra is ``Q[g_1, ..., g_k] / (g_i^{m_i}, monomials of degree > cap)``.
Every Chow class in the package lives in one of these.

Monomials are stored as packed integers: one bit field per generator plus a
leading field holding the total degree.  Each field is wide enough that the
sum of two valid exponents never carries into its neighbour, and a guard bit
per field flags an exponent that reached its nilpotency order.  Multiplying
two monomials is then a single integer addition followed by one mask test::

    key = ka + kb
    if (key + spec.offset) & spec.guard:   # some exponent hit g_i^{m_i} or cap
        continue

The packed order coincides with graded-lex order on exponent vectors (total
degree first, then the first generator), which gives leading terms for free.

Coefficients are Python ``int`` when integral and ``Fraction`` otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence, Union

Coefficient = Union[int, Fraction]
Exponents = tuple[int, ...]


class RingError(ValueError):
    """Raised for malformed ring specs or incompatible operands."""


class NotAUnitError(RingError):
    """Raised when inverting a class whose constant term is zero."""


def _normalize(c: Coefficient) -> Coefficient:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _as_coefficient(c) -> Coefficient:
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _normalize(c)
    if isinstance(c, Rational):
        return _normalize(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return _normalize(Fraction(c))
    raise TypeError(f"coefficient must be an exact rational, got {type(c).__name__}")


@dataclass(frozen=True)
class RingSpec:
    """Generators, per-generator nilpotency orders and a total-degree cap."""

    generators: tuple[str, ...]
    nilpotency: tuple[int, ...]
    total_cap: int

    shifts: tuple[int, ...] = field(init=False, repr=False, compare=False)
    total_shift: int = field(init=False, repr=False, compare=False)
    offset: int = field(init=False, repr=False, compare=False)
    guard: int = field(init=False, repr=False, compare=False)
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        nil = tuple(self.nilpotency)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "nilpotency", nil)
        if len(gens) != len(nil):
            raise RingError("generators and nilpotency orders differ in length")
        if len(set(gens)) != len(gens):
            raise RingError(f"duplicate generator names in {gens}")
        for g in gens:
            if not isinstance(g, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", g):
                raise RingError(f"invalid generator name {g!r}")
        if any((not isinstance(m, int)) or m < 1 for m in nil):
            raise RingError("nilpotency orders must be positive integers")
        if not isinstance(self.total_cap, int) or self.total_cap < 1:
            raise RingError("total cap must be a positive integer")

        # lay out fields from the least significant end: last generator first
        shifts = [0] * len(gens)
        offset = guard = 0
        pos = 0
        for i in reversed(range(len(gens))):
            m = nil[i]
            w = m.bit_length() + 1
            shifts[i] = pos
            offset |= ((1 << (w - 1)) - m) << pos
            guard |= (1 << (w - 1)) << pos
            pos += w
        m = self.total_cap + 1
        w = m.bit_length() + 1
        offset |= ((1 << (w - 1)) - m) << pos
        guard |= (1 << (w - 1)) << pos
        object.__setattr__(self, "shifts", tuple(shifts))
        object.__setattr__(self, "total_shift", pos)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "guard", guard)
        object.__setattr__(self, "masks", tuple((1 << (m.bit_length() + 1)) - 1 for m in nil))
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(gens)})

    # -- monomial packing -------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise RingError(f"unknown generator {name!r}") from None

    def admissible(self, exps: Sequence[int]) -> bool:
        """Whether the exponent vector survives both truncation rules."""
        if len(exps) != self.ngens or any(e < 0 for e in exps):
            return False
        if sum(exps) > self.total_cap:
            return False
        return all(e < m for e, m in zip(exps, self.nilpotency))

    def pack(self, exps: Sequence[int]) -> int:
        key = sum(exps) << self.total_shift
        for e, s in zip(exps, self.shifts):
            key |= e << s
        return key

    def unpack(self, key: int) -> Exponents:
        return tuple((key >> s) & m for s, m in zip(self.shifts, self.masks))

    def field_mask(self, name: str) -> int:
        """Bits of the packed key holding the exponent of ``name``."""
        i = self.index(name)
        return self.masks[i] << self.shifts[i]

    def key_degree(self, key: int) -> int:
        return key >> self.total_shift

    def monomial_key(self, spec_or_exps) -> int:
        exps = self.exponents_of(spec_or_exps)
        if not self.admissible(exps):
            raise RingError(f"monomial {exps} violates truncation of {self}")
        return self.pack(exps)

    def exponents_of(self, mono) -> Exponents:
        """Accept an exponent tuple or a ``{generator: exponent}`` mapping."""
        if isinstance(mono, Mapping):
            exps = [0] * self.ngens
            for g, e in mono.items():
                exps[self.index(g)] += int(e)
            return tuple(exps)
        exps = tuple(int(e) for e in mono)
        if len(exps) != self.ngens:
            raise RingError(f"exponent vector of length {len(exps)} for {self.ngens} generators")
        return exps

    # -- constructors -----------------------------------------------------

    def zero(self) -> GradedClass:
        return GradedClass._raw(self, {})

    def one(self) -> GradedClass:
        return self.const(1)

    def const(self, c) -> GradedClass:
        c = _as_coefficient(c)
        return GradedClass._raw(self, {0: c} if c else {})

    def gen(self, name: str, coef=1) -> GradedClass:
        exps = [0] * self.ngens
        exps[self.index(name)] = 1
        return self.monomial(exps, coef)

    def gens(self) -> tuple[GradedClass, ...]:
        return tuple(self.gen(g) for g in self.generators)

    def monomial(self, mono, coef=1) -> GradedClass:
        """The class ``coef * mono``; zero if the monomial is truncated away."""
        coef = _as_coefficient(coef)
        exps = self.exponents_of(mono)
        if any(e < 0 for e in exps):
            raise RingError(f"negative exponent in {exps}")
        if not coef or not self.admissible(exps):
            return self.zero()
        return GradedClass._raw(self, {self.pack(exps): coef})

    def from_dict(self, terms: Mapping) -> GradedClass:
        """Build from ``{exponents: coefficient}``; truncated monomials are dropped."""
        out: dict[int, Coefficient] = {}
        for mono, c in terms.items():
            c = _as_coefficient(c)
            exps = self.exponents_of(mono)
            if any(e < 0 for e in exps):
                raise RingError(f"negative exponent in {exps}")
            if not c or not self.admissible(exps):
                continue
            k = self.pack(exps)
            out[k] = out.get(k, 0) + c
        return GradedClass._raw(self, _clean(out))

    def parse(self, text: str) -> GradedClass:
        """Inverse of :meth:`GradedClass.to_text`."""
        text = text.strip()
        if text == "0":
            return self.zero()
        terms: dict[Exponents, Coefficient] = {}
        for chunk in re.split(r"\s\+\s", text):
            chunk = chunk.strip()
            if " * " in chunk:
                cs, ms = chunk.split(" * ", 1)
            elif re.fullmatch(r"-?\d+(/\d+)?", chunk):
                cs, ms = chunk, ""
            else:
                cs, ms = "1", chunk
            exps = [0] * self.ngens
            for factor in filter(None, ms.split("*")):
                name, _, e = factor.partition("^")
                exps[self.index(name)] += int(e) if e else 1
            terms[tuple(exps)] = terms.get(tuple(exps), 0) + Fraction(cs)
        return self.from_dict(terms)

    def __str__(self):
        body = ", ".join(f"{g}^{m}" for g, m in zip(self.generators, self.nilpotency))
        return f"Q[{', '.join(self.generators)}]/({body}, deg>{self.total_cap})"


def make_ring(generators: Sequence[str], nilpotency: Sequence[int], total_cap: int) -> RingSpec:
    """Build a :class:`RingSpec`, validating names, orders and cap."""
    if len(generators) != len(nilpotency):
        raise RingError("generators and nilpotency orders differ in length")
    return RingSpec(tuple(generators), tuple(nilpotency), total_cap)


def _clean(d: dict) -> dict:
    return {k: (v if type(v) is int else _normalize(v)) for k, v in d.items() if v}


class GradedClass:
    """An immutable element of a truncated multigraded algebra.

    Grading is codimension: the degree of a monomial is its exponent sum.
    """

    __slots__ = ("spec", "_terms", "_hash")

    def __init__(self, spec: RingSpec, terms: Mapping | None = None):
        built = spec.from_dict(terms or {})
        self.spec = spec
        self._terms = built._terms
        self._hash = None

    @classmethod
    def _raw(cls, spec: RingSpec, packed: dict) -> GradedClass:
        obj = object.__new__(cls)
        obj.spec = spec
        obj._terms = packed
        obj._hash = None
        return obj

    # -- inspection -------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> Iterator[tuple[Exponents, Coefficient]]:
        """Terms as ``(exponents, coefficient)`` in lexicographic order."""
        unpacked = [(self.spec.unpack(k), c) for k, c in self._terms.items()]
        unpacked.sort(key=lambda t: t[0])
        return iter(unpacked)

    def to_dict(self) -> dict[Exponents, Coefficient]:
        return dict(self.items())

    def packed_terms(self) -> Mapping[int, Coefficient]:
        """Read-only view of the packed representation (for hot loops)."""
        return self._terms

    def coefficient(self, mono) -> Coefficient:
        exps = self.spec.exponents_of(mono)
        if not self.spec.admissible(exps):
            return 0
        return self._terms.get(self.spec.pack(exps), 0)

    def constant_term(self) -> Coefficient:
        return self._terms.get(0, 0)

    def degrees(self) -> set[int]:
        ts = self.spec.total_shift
        return {k >> ts for k in self._terms}

    def is_homogeneous(self, k: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (k is None or ds == {k})

    def max_degree(self) -> int:
        return max(self.degrees(), default=-1)

    def generators_used(self) -> set[str]:
        acc = 0
        for k in self._terms:
            acc |= k
        return {g for g in self.spec.generators if acc & self.spec.field_mask(g)}

    def select(self, predicate) -> GradedClass:
        """Sub-class of the terms whose packed key satisfies ``predicate``."""
        return GradedClass._raw(self.spec, {k: c for k, c in self._terms.items() if predicate(k)})

    def exponent_of(self, name: str) -> int:
        """Largest exponent of ``name`` occurring in any term."""
        i = self.spec.index(name)
        s, m = self.spec.shifts[i], self.spec.masks[i]
        return max(((k >> s) & m for k in self._terms), default=0)

    def leading_term(self) -> tuple[Exponents, Coefficient]:
        """Graded-lex leading term (generators ordered as declared)."""
        if not self._terms:
            raise RingError("zero class has no leading term")
        k = max(self._terms)
        return self.spec.unpack(k), self._terms[k]

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: GradedClass):
        if other.spec is not self.spec and other.spec != self.spec:
            raise RingError("operands live in different rings")

    def _coerce(self, other) -> GradedClass:
        if isinstance(other, GradedClass):
            self._check(other)
            return other
        return self.spec.const(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return GradedClass._raw(self.spec, _clean(out))

    __radd__ = __add__

    def __neg__(self):
        return GradedClass._raw(self.spec, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> GradedClass:
        c = _as_coefficient(c)
        if not c:
            return self.spec.zero()
        return GradedClass._raw(self.spec, _clean({k: v * c for k, v in self._terms.items()}))

    def __mul__(self, other):
        if isinstance(other, GradedClass):
            self._check(other)
            return GradedClass._raw(self.spec, _mul(self.spec, self._terms, other._terms))
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _as_coefficient(c)
        if not c:
            raise ZeroDivisionError("division of a class by zero")
        return self.scale(Fraction(1) / c)

    def __pow__(self, m: int):
        if not isinstance(m, int) or m < 0:
            raise RingError("only non-negative integer powers are defined")
        result = self.spec.one()
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, GradedClass):
            return self.spec == other.spec and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == (({0: _normalize(other)}) if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, frozenset(self._terms.items())))
        return self._hash

    # -- graded structure -------------------------------------------------

    def graded_part(self, k: int) -> GradedClass:
        """Sum of the terms of total degree exactly ``k`` (zero when out of range)."""
        ts = self.spec.total_shift
        return GradedClass._raw(self.spec, {key: c for key, c in self._terms.items() if key >> ts == k})

    def graded_parts(self) -> dict[int, GradedClass]:
        ts = self.spec.total_shift
        buckets: dict[int, dict] = {}
        for key, c in self._terms.items():
            buckets.setdefault(key >> ts, {})[key] = c
        return {d: GradedClass._raw(self.spec, t) for d, t in sorted(buckets.items())}

    def invert_unit(self) -> GradedClass:
        """Formal inverse, computed degree by degree.

        With ``a = a_0 + a_1 + ...`` and ``b = a^{-1}`` we have
        ``b_0 = 1/a_0`` and ``b_k = -(1/a_0) * sum_{i>=1} a_i b_{k-i}``.
        """
        a0 = self.constant_term()
        if not a0:
            raise NotAUnitError("constant term is zero; class is not invertible")
        spec = self.spec
        parts = self.graded_parts()
        inv0 = _normalize(Fraction(1) / a0) if a0 not in (1, -1) else a0
        b = {0: {0: inv0}}
        for k in range(1, spec.total_cap + 1):
            acc: dict[int, Coefficient] = {}
            for i in range(1, k + 1):
                ai = parts.get(i)
                bk = b.get(k - i)
                if ai is None or not bk:
                    continue
                _mul_into(spec, ai._terms, bk, acc)
            acc = _clean(acc)
            if acc:
                b[k] = {key: _normalize(-c * inv0) for key, c in acc.items()}
        out: dict[int, Coefficient] = {}
        for t in b.values():
            out.update(t)
        return GradedClass._raw(spec, out)

    def substitute(self, mapping: Mapping[str, GradedClass], target: RingSpec | None = None) -> GradedClass:
        """Ring-homomorphic image under ``generator -> class``.

        Every generator appearing in ``self`` must be mapped; images live in
        ``target`` (defaults to the images' common ring).
        """
        if target is None:
            specs = {img.spec for img in mapping.values()}
            if len(specs) != 1:
                raise RingError("cannot infer target ring for substitution")
            target = specs.pop()
        for name, img in mapping.items():
            self.spec.index(name)
            if img.spec != target:
                raise RingError(f"image of {name!r} is not in the target ring")
        images = []
        for g in self.spec.generators:
            images.append(mapping.get(g))
        powers: list[dict[int, GradedClass]] = [dict() for _ in images]

        def power(i: int, e: int) -> GradedClass:
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        result: dict[int, Coefficient] = {}
        for exps, c in self.items():
            term = target.const(c)
            for i, e in enumerate(exps):
                if not e:
                    continue
                if images[i] is None:
                    raise RingError(f"generator {self.spec.generators[i]!r} is not mapped")
                term = term * power(i, e)
                if not term:
                    break
            for k, v in term._terms.items():
                result[k] = result.get(k, 0) + v
        return GradedClass._raw(target, _clean(result))

    def without(self, name: str) -> dict[int, GradedClass]:
        """Split as ``sum_j name^j * alpha_j``; returns ``{j: alpha_j}``."""
        spec = self.spec
        i = spec.index(name)
        s = spec.shifts[i]
        mask = spec.masks[i]
        ts = spec.total_shift
        groups: dict[int, dict[int, Coefficient]] = {}
        for key, c in self._terms.items():
            j = (key >> s) & mask
            if j:
                key = key - (j << s) - (j << ts)
            groups.setdefault(j, {})[key] = c
        return {j: GradedClass._raw(spec, t) for j, t in sorted(groups.items())}

    def times_power(self, name: str, j: int) -> GradedClass:
        """``self * name**j`` by shifting packed keys (no full product)."""
        spec = self.spec
        i = spec.index(name)
        unit = (j << spec.shifts[i]) + (j << spec.total_shift)
        out = {}
        for key, c in self._terms.items():
            k = key + unit
            if (k + spec.offset) & spec.guard:
                continue
            out[k] = c
        return GradedClass._raw(spec, out)

    def derivative(self, name: str) -> GradedClass:
        """Formal partial derivative with respect to a generator."""
        i = self.spec.index(name)
        out: dict[Exponents, Coefficient] = {}
        for exps, c in self.items():
            e = exps[i]
            if e:
                mono = list(exps)
                mono[i] -= 1
                out[tuple(mono)] = c * e
        return self.spec.from_dict(out)

    # -- text -------------------------------------------------------------

    def to_text(self) -> str:
        """Canonical serialization: ``c * g1^a1*...*gk^ak`` terms joined by `` + ``."""
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                g if e == 1 else f"{g}^{e}" for g, e in zip(self.spec.generators, exps) if e
            )
            cs = str(c)
            parts.append(f"{cs} * {mono}" if mono else cs)
        return " + ".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"GradedClass({self.to_text()!r})"


def _mul_into(spec: RingSpec, a: Mapping[int, Coefficient], b: Mapping[int, Coefficient], acc: dict) -> None:
    off, guard = spec.offset, spec.guard
    if len(a) > len(b):
        a, b = b, a
    bitems = list(b.items())
    get = acc.get
    for ka, ca in a.items():
        for kb, cb in bitems:
            k = ka + kb
            if (k + off) & guard:
                continue
            acc[k] = get(k, 0) + ca * cb


def _mul(spec: RingSpec, a: Mapping, b: Mapping) -> dict:
    if not a or not b:
        return {}
    acc: dict[int, Coefficient] = {}
    _mul_into(spec, a, b, acc)
    return _clean(acc)


def arith(a: GradedClass, b: GradedClass, op: str, scalar=None) -> GradedClass:
    """Apply ``op`` in {add, sub, mul}; the result is optionally scaled."""
    if a.spec != b.spec:
        raise RingError("operands live in different rings")
    if op == "add":
        out = a + b
    elif op == "sub":
        out = a - b
    elif op == "mul":
        out = a * b
    else:
        raise RingError(f"unknown operation {op!r}")
    return out if scalar is None else out.scale(scalar)


def graded_part(a: GradedClass, k: int) -> GradedClass:
    return a.graded_part(k)


def invert_unit(a: GradedClass) -> GradedClass:
    return a.invert_unit()


def substitute(a: GradedClass, mapping: Mapping[str, GradedClass], target: RingSpec) -> GradedClass:
    return a.substitute(mapping, target)


def coefficient(a: GradedClass, mono) -> Coefficient:
    return a.coefficient(mono)


def total(classes: Iterable[GradedClass], spec: RingSpec) -> GradedClass:
    """Sum of many classes without intermediate copies."""
    out: dict[int, Coefficient] = {}
    for c in classes:
        if c.spec != spec:
            raise RingError("operands live in different rings")
        for k, v in c.packed_terms().items():
            out[k] = out.get(k, 0) + v
    return GradedClass._raw(spec, _clean(out))
