# block_route.py
from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional

from exact_arith import FieldElement, det_int
from iis_core import (
    IISystem, IdentificationPair, Interval, SymmetricParams,
    build_special_symmetric, coverage_gaps,
)

DEFAULT_MAX_MOVES = 10_000

Row = tuple[int, int, int, int]
Verdict = Literal["symmetric", "hole"]


class DegenerateCase(RuntimeError):
    pass


@dataclass(frozen=True)
class Tracked:
    """An exact value together with its integer row over (a, b, c, u)."""

    value: FieldElement
    row: Row

    def __add__(self, other: "Tracked") -> "Tracked":
        return Tracked(self.value + other.value, tuple(x + y for x, y in zip(self.row, other.row)))

    def __sub__(self, other: "Tracked") -> "Tracked":
        return Tracked(self.value - other.value, tuple(x - y for x, y in zip(self.row, other.row)))


@dataclass(frozen=True)
class EuclidState:
    la: Tracked
    lb: Tracked
    c: Tracked
    starts: tuple[Tracked, Tracked]

    @property
    def total(self) -> Tracked:
        return self.la + self.lb + self.c

    def length(self, label: str) -> Tracked:
        return self.la if label == "a" else self.lb


@dataclass(frozen=True)
class EuclidMove:
    carrier: str
    step: FieldElement
    transmitted: int

    def __str__(self) -> str:
        other = "b" if self.carrier == "a" else "a"
        return f"{other}>{self.carrier}/{self.transmitted}"


@dataclass(frozen=True)
class BlockRoute:
    verdict: Verdict
    params: Optional[SymmetricParams]
    matrix: Optional[tuple[Row, Row, Row, Row]]
    moves: tuple[EuclidMove, ...]
    generalized: int

    @property
    def determinant(self) -> Optional[int]:
        return det_int(self.matrix) if self.matrix else None


_E = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def euclid_state(p: SymmetricParams) -> EuclidState:
    a, b, c, u = (Tracked(v, e) for v, e in zip(p.astuple(), _E))
    return EuclidState(a, b, c, (u, a + b - u))


def to_system(g: EuclidState) -> IISystem:
    total = g.total.value
    zero = Fraction(0)
    s1, s2 = (s.value for s in g.starts)
    c = g.c.value
    return IISystem(
        Interval(zero, total),
        (
            IdentificationPair.of(Interval(zero, g.la.value), Interval(total - g.la.value, total), "a"),
            IdentificationPair.of(Interval(zero, g.lb.value), Interval(total - g.lb.value, total), "b"),
            IdentificationPair.of(Interval(s1, s1 + c), Interval(s2, s2 + c), "c"),
        ),
    )


def is_symmetric_state(g: EuclidState) -> bool:
    return g.starts[0].value + g.starts[1].value + g.c.value == g.total.value


def has_hole(g: EuclidState) -> bool:
    return bool(coverage_gaps(to_system(g)))


def euclid_move(g: EuclidState) -> tuple[EuclidState, EuclidMove]:
    """The longer of the a/b roles carries; both c-intervals ending inside it move down by (shorter + c)."""
    if g.la.value == g.lb.value:
        raise DegenerateCase("a/b length tie in the Euclid state")
    carrier = "a" if g.la.value > g.lb.value else "b"
    big = g.length(carrier)
    small = g.length("b" if carrier == "a" else "a")
    total = g.total.value
    step = small + g.c
    if big.value <= step.value:
        raise DegenerateCase("carrier no longer exceeds the step; state leaves the Euclid form")
    starts = list(g.starts)
    moved = 0
    for i, s in enumerate(starts):
        hi = s.value + g.c.value
        if big.value < hi < total:
            if s.value < step.value:
                raise DegenerateCase("c-interval would leave the support; state leaves the Euclid form")
            starts[i] = s - step
            moved += 1
    shrunk = big - step
    la, lb = (shrunk, g.lb) if carrier == "a" else (g.la, shrunk)
    return EuclidState(la, lb, g.c, (starts[0], starts[1])), EuclidMove(carrier, step.value, moved)


def _symmetric_result(g: EuclidState) -> tuple[SymmetricParams, tuple[Row, Row, Row, Row]]:
    x, y = (g.la, g.lb) if g.la.value > g.lb.value else (g.lb, g.la)
    if x.value == y.value:
        raise DegenerateCase("a/b length tie in the symmetric state")
    uu = g.starts[0] if g.starts[0].value < g.starts[1].value else g.starts[1]
    mirror = x + y - uu
    if uu.value > mirror.value:
        uu = mirror
    params = SymmetricParams.of(x.value, y.value, g.c.value, uu.value)
    return params, (x.row, y.row, g.c.row, uu.row)


def _generalized(moves) -> int:
    runs, prev = 0, None
    for m in moves:
        if m.carrier != prev:
            runs += 1
        prev = m.carrier
    return runs


def block_route(p: SymmetricParams, max_moves: int = DEFAULT_MAX_MOVES) -> BlockRoute:
    g = euclid_state(p)
    if coverage_gaps(build_special_symmetric(p)):
        return BlockRoute("hole", None, None, (), 0)
    moves: list[EuclidMove] = []
    while len(moves) < max_moves:
        if moves and is_symmetric_state(g):
            params, matrix = _symmetric_result(g)
            return BlockRoute("symmetric", params, matrix, tuple(moves), _generalized(moves))
        g, move = euclid_move(g)
        moves.append(move)
        if has_hole(g):
            return BlockRoute("hole", None, None, tuple(moves), _generalized(moves))
    raise DegenerateCase(f"block route did not close within {max_moves} moves")
