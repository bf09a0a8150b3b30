# iis_core.py
from __future__ import annotations
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Annotated, Any, Iterable, Literal, Optional

from pydantic import BaseModel, ConfigDict, PlainValidator, model_validator

from exact_arith import FieldElement, NumberFieldElement, as_rational

DEFAULT_ORBIT_SIZE = 10_000
GENERICITY_BOUND = 8

Label = str
Member = Literal["left", "right"]


class SystemShapeError(ValueError):
    pass


def as_field(x) -> FieldElement:
    if isinstance(x, NumberFieldElement):
        return x
    try:
        return as_rational(x)
    except ArithmeticError as e:
        raise SystemShapeError(f"not a field element: {x!r}") from e


# Q(lambda) values pass through untouched; rationals are made exact
ExactValue = Annotated[Any, PlainValidator(as_field)]


# -----------------------------
# Data model
# -----------------------------
@dataclass(frozen=True, slots=True)
class Interval:
    lo: FieldElement
    hi: FieldElement

    def __post_init__(self):
        if not self.lo < self.hi:
            raise SystemShapeError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> FieldElement:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def shifted(self, delta) -> "Interval":
        return Interval(self.lo + delta, self.hi + delta)

    def reflected(self, pivot) -> "Interval":
        return Interval(pivot - self.hi, pivot - self.lo)


@dataclass(frozen=True, slots=True)
class IdentificationPair:
    left: Interval
    right: Interval
    label: Label

    def __post_init__(self):
        if self.left.length != self.right.length:
            raise SystemShapeError(f"pair {self.label}: intervals have different lengths")
        if self.left.lo > self.right.lo:
            raise SystemShapeError(f"pair {self.label}: left.lo must not exceed right.lo")

    @classmethod
    def of(cls, first: Interval, second: Interval, label: Label) -> "IdentificationPair":
        """Canonical pair: the interval with the smaller lo becomes `left`."""
        if first.lo > second.lo:
            first, second = second, first
        return cls(first, second, label)

    @property
    def length(self) -> FieldElement:
        return self.left.length

    def member(self, which: Member) -> Interval:
        return self.left if which == "left" else self.right

    def partner(self, which: Member) -> Interval:
        return self.right if which == "left" else self.left

    def endpoints(self) -> tuple[FieldElement, ...]:
        return (self.left.lo, self.left.hi, self.right.lo, self.right.hi)


@dataclass(frozen=True, slots=True)
class IISystem:
    support: Interval
    pairs: tuple[IdentificationPair, ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        labels = [p.label for p in self.pairs]
        if len(set(labels)) != len(labels):
            raise SystemShapeError(f"duplicate pair labels: {labels}")
        for p in self.pairs:
            for iv in (p.left, p.right):
                if not self.support.contains_interval(iv):
                    raise SystemShapeError(
                        f"pair {p.label}: [{iv.lo}, {iv.hi}] leaves the support "
                        f"[{self.support.lo}, {self.support.hi}]"
                    )

    @property
    def order(self) -> int:
        return len(self.pairs)

    @property
    def A(self) -> FieldElement:
        return self.support.lo

    @property
    def B(self) -> FieldElement:
        return self.support.hi

    def pair(self, label: Label) -> IdentificationPair:
        for p in self.pairs:
            if p.label == label:
                return p
        raise SystemShapeError(f"no pair labelled {label!r}")

    def with_pair(self, new: IdentificationPair, support: Optional[Interval] = None) -> "IISystem":
        pairs = tuple(new if p.label == new.label else p for p in self.pairs)
        return IISystem(support or self.support, pairs)


class SymmetricParams(BaseModel):
    """(a, b, c, u) of a special symmetric system."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: ExactValue
    b: ExactValue
    c: ExactValue
    u: ExactValue

    @model_validator(mode="after")
    def _ranges(self):
        for name, v in zip("abcu", self.astuple()):
            if not v > 0:
                raise ValueError(f"parameter {name} must be positive, got {v}")
        if self.u > self.a + self.b:
            raise ValueError("u must not exceed a + b (c-pair would leave the support)")
        return self

    @classmethod
    def of(cls, a, b, c, u) -> "SymmetricParams":
        try:
            return cls(a=a, b=b, c=c, u=u)
        except (ValueError, TypeError) as e:
            raise SystemShapeError(str(e)) from e

    def astuple(self) -> tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
        return (self.a, self.b, self.c, self.u)

    def scaled(self, k) -> "SymmetricParams":
        return SymmetricParams.of(*(k * v for v in self.astuple()))

    @property
    def total(self) -> FieldElement:
        return self.a + self.b + self.c


@dataclass(frozen=True)
class OrbitResult:
    points: frozenset
    status: Literal["exhausted", "truncated"]
    edges: tuple = field(default=(), compare=False)


# -----------------------------
# Construction
# -----------------------------
def build_special_symmetric(p: SymmetricParams) -> IISystem:
    a, b, c, u = p.astuple()
    total = a + b + c
    return IISystem(
        Interval(Fraction(0), total),
        (
            IdentificationPair.of(Interval(Fraction(0), a), Interval(b + c, total), "a"),
            IdentificationPair.of(Interval(Fraction(0), b), Interval(a + c, total), "b"),
            IdentificationPair.of(Interval(u, u + c), Interval(a + b - u, total - u), "c"),
        ),
    )


def reflect(s: IISystem, pivot: Optional[FieldElement] = None) -> IISystem:
    """Mirror image x -> pivot - x; pivot defaults to A + B (the support midpoint, an involution)."""
    if pivot is None:
        pivot = s.A + s.B
    return IISystem(
        s.support.reflected(pivot),
        tuple(
            IdentificationPair.of(p.right.reflected(pivot), p.left.reflected(pivot), p.label)
            for p in s.pairs
        ),
    )


# -----------------------------
# Predicates
# -----------------------------
def is_symmetric(s: IISystem) -> bool:
    return all(p.left.lo - s.A == s.B - p.right.hi for p in s.pairs)


def is_balanced(s: IISystem) -> bool:
    if not s.pairs:
        return False
    if min(p.left.lo for p in s.pairs) != s.A or max(p.right.hi for p in s.pairs) != s.B:
        return False
    return sum((p.length for p in s.pairs), Fraction(0)) == s.B - s.A


def boundary_pairs(s: IISystem) -> list[IdentificationPair]:
    return [p for p in s.pairs if p.left.lo == s.A and p.right.hi == s.B]


def is_special(s: IISystem) -> bool:
    return s.order == 3 and len(boundary_pairs(s)) == 2 and is_symmetric(s) and is_balanced(s)


def pair_midpoints(s: IISystem) -> dict[Label, FieldElement]:
    return {p.label: (p.left.lo + p.right.hi) / 2 for p in s.pairs}


def coverage_gaps(s: IISystem) -> list[Interval]:
    """Maximal open subintervals of the support covered by no pair interval."""
    ivs = sorted((iv for p in s.pairs for iv in (p.left, p.right)), key=lambda iv: iv.lo)
    gaps: list[Interval] = []
    cur = s.A
    for iv in ivs:
        if iv.lo > cur:
            gaps.append(Interval(cur, iv.lo))
        if iv.hi > cur:
            cur = iv.hi
    if cur < s.B:
        gaps.append(Interval(cur, s.B))
    return gaps


def has_hole(s: IISystem) -> bool:
    return bool(coverage_gaps(s))


def critical_points(s: IISystem) -> list[FieldElement]:
    pts = sorted(x for p in s.pairs for x in p.endpoints())
    out: list[FieldElement] = []
    for x in pts:
        if not out or out[-1] != x:
            out.append(x)
    return out


# -----------------------------
# Orbits
# -----------------------------
def _neighbours(s: IISystem, y) -> Iterable[tuple[FieldElement, Label]]:
    for p in s.pairs:
        if p.left.contains(y):
            yield y - p.left.lo + p.right.lo, p.label
        if p.right.contains(y):
            yield y - p.right.lo + p.left.lo, p.label


def orbit(s: IISystem, x, max_size: int = DEFAULT_ORBIT_SIZE, *, with_edges: bool = False) -> OrbitResult:
    """Breadth-first closure of {x} under all identifications (closed intervals)."""
    x = as_field(x)
    if not s.support.contains(x):
        raise SystemShapeError(f"point {x} lies outside the support [{s.A}, {s.B}]")
    if max_size < 1:
        raise SystemShapeError("max_size must be at least 1")
    seen = {x}
    edges: list[tuple[FieldElement, FieldElement, Label]] = []
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for z, label in _neighbours(s, y):
            if with_edges:
                edges.append((y, z, label))
            if z in seen:
                continue
            if len(seen) >= max_size:
                return OrbitResult(frozenset(seen), "truncated", tuple(edges))
            seen.add(z)
            queue.append(z)
    return OrbitResult(frozenset(seen), "exhausted", tuple(edges))


def orbit_edges(s: IISystem, x, max_size: int = DEFAULT_ORBIT_SIZE) -> list[tuple[FieldElement, FieldElement, Label]]:
    return list(orbit(s, x, max_size, with_edges=True).edges)


# -----------------------------
# Parameters
# -----------------------------
def _ordered(a, b, c, u) -> tuple:
    if a < b:
        a, b = b, a
    if u > a + b - u:
        u = a + b - u
    return a, b, c, u


def params_of(s: IISystem) -> SymmetricParams:
    if not is_special(s):
        raise SystemShapeError("system is not special symmetric of order 3")
    ends = boundary_pairs(s)
    third = next(p for p in s.pairs if p not in ends)
    x, y = ends[0].length, ends[1].length
    return SymmetricParams.of(*_ordered(x, y, third.length, third.left.lo - s.A))


def _integer_vectors(values) -> list[list[int]]:
    vecs = [[as_rational(c) for c in v.coeffs] if isinstance(v, NumberFieldElement) else [v] for v in values]
    width = max(len(v) for v in vecs)
    vecs = [v + [Fraction(0)] * (width - len(v)) for v in vecs]
    den = math.lcm(*(c.denominator for v in vecs for c in v))
    return [[int(c * den) for c in v] for v in vecs]


def genericity_relation(p: SymmetricParams, bound: int = GENERICITY_BOUND) -> Optional[tuple[int, int, int, int]]:
    """First integer relation alpha*a + beta*b + gamma*c + delta*u = 0 with |coef| <= bound, or None."""
    va, vb, vc, vu = _integer_vectors(p.astuple())
    j = next(i for i, x in enumerate(vu) if x != 0)
    xa, xb, xc, xu = va[j], vb[j], vc[j], vu[j]
    rng = range(-bound, bound + 1)
    for alpha in rng:
        for beta in rng:
            partial = alpha * xa + beta * xb
            for gamma in rng:
                r = partial + gamma * xc
                if r % xu:
                    continue
                delta = -r // xu
                if abs(delta) > bound or (alpha, beta, gamma, delta) == (0, 0, 0, 0):
                    continue
                if len(vu) == 1 or all(
                    alpha * x + beta * y + gamma * z + delta * w == 0
                    for x, y, z, w in zip(va, vb, vc, vu)
                ):
                    return (alpha, beta, gamma, delta)
    return None


def is_generic(p: SymmetricParams, bound: int = GENERICITY_BOUND) -> bool:
    return genericity_relation(p, bound) is None
