# rauzy_engine.py
from __future__ import annotations
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Sequence, Union

from exact_arith import FieldElement
from iis_core import (
    IISystem, IdentificationPair, Interval, Label, Member,
    critical_points, has_hole, is_special, reflect,
)

DEFAULT_MAX_STEPS = 10_000

Side = Literal["left", "right"]
StepKind = Literal["transmission", "reduction"]
Outcome = Literal["hole", "symmetric", "step_cap", "degenerate"]
StopWhen = Literal["symmetric", "hole_only"]


class InductionError(RuntimeError):
    pass


class TransmissionError(InductionError):
    pass


class ReductionError(InductionError):
    pass


class DegenerateError(InductionError):
    pass


@dataclass(frozen=True)
class StepRecord:
    kind: StepKind
    side: Side
    moved_pair: Label
    along_pair: Optional[Label]
    cut_point: Optional[FieldElement]
    support_after: Interval
    moved_member: Optional[Member] = None
    along_member: Optional[Member] = None
    iteration: int = 0


@dataclass(frozen=True)
class InductionTrace:
    initial: IISystem
    steps: tuple[StepRecord, ...]
    final: IISystem
    outcome: Outcome
    side: Side = "right"
    detail: Optional[str] = None

    @property
    def ordinary_iterations(self) -> int:
        return sum(1 for r in self.steps if r.kind == "reduction")


@dataclass(frozen=True)
class GeneralizedIteration:
    reduced_pair: Label
    step_span: range
    ordinary: int = 1


def _swap(m: Member) -> Member:
    return "right" if m == "left" else "left"


# -----------------------------
# Transmission
# -----------------------------
def transmission(
    s: IISystem,
    moved: tuple[Label, Member],
    along: Union[Label, tuple[Label, Member]],
) -> IISystem:
    """Replace the moved interval by its image under the shift taking the host interval of `along` to its partner."""
    label, member = moved
    pair = s.pair(label)
    iv = pair.member(member)
    if isinstance(along, str):
        hosts = [m for m in ("right", "left") if s.pair(along).member(m).contains_interval(iv)]
        if not hosts:
            raise TransmissionError(f"[{iv.lo}, {iv.hi}] lies in no interval of pair {along}")
        along = (along, hosts[0])
    along_label, along_member = along
    if along_label == label:
        raise TransmissionError(f"pair {label} cannot be transmitted along itself")
    carrier = s.pair(along_label)
    host = carrier.member(along_member)
    if not host.contains_interval(iv):
        raise TransmissionError(
            f"[{iv.lo}, {iv.hi}] is not contained in {along_label}-{along_member} [{host.lo}, {host.hi}]"
        )
    image = iv.shifted(carrier.partner(along_member).lo - host.lo)
    return s.with_pair(IdentificationPair.of(image, pair.partner(member), label))


def _ending_at_b(s: IISystem) -> list[tuple[Label, Member]]:
    return [(p.label, m) for p in s.pairs for m in ("left", "right") if p.member(m).hi == s.B]


def _length(s: IISystem, ref: tuple[Label, Member]) -> FieldElement:
    return s.pair(ref[0]).member(ref[1]).length


def _carrier(s: IISystem, ending: list[tuple[Label, Member]]) -> tuple[Label, Member]:
    ranked = sorted(ending, key=lambda r: _length(s, r), reverse=True)
    if len(ranked) > 1 and _length(s, ranked[0]) == _length(s, ranked[1]):
        raise DegenerateError(f"length tie between {ranked[0][0]} and {ranked[1][0]} at B")
    return ranked[0]


def _right_transmission(s: IISystem) -> tuple[IISystem, tuple[Label, Member], tuple[Label, Member]]:
    """Shortest other B-ending interval along the longest; if the longest is alone at B, the interval it contains nearest to B."""
    ending = _ending_at_b(s)
    if not ending:
        raise TransmissionError("no interval ends at B")
    carrier = _carrier(s, ending)
    others = [r for r in ending if r != carrier and r[0] != carrier[0]]
    if others:
        moved = min(others, key=lambda r: _length(s, r))
    else:
        host = s.pair(carrier[0]).member(carrier[1])
        inside = [
            (p.label, m)
            for p in s.pairs if p.label != carrier[0]
            for m in ("left", "right")
            if host.contains_interval(p.member(m)) and p.member(m) != host
        ]
        if not inside:
            raise TransmissionError("no admissible transmission: a single interval touches B and contains nothing")
        # nearest to B first, longer first on equal right ends
        moved = max(inside, key=lambda r: (s.pair(r[0]).member(r[1]).hi, _length(s, r)))
    return transmission(s, moved, carrier), moved, carrier


def _right_reduction(s: IISystem) -> tuple[IISystem, Label, FieldElement]:
    ending = _ending_at_b(s)
    if len(ending) != 1:
        raise ReductionError(f"B is covered by {len(ending)} intervals, reduction needs exactly one")
    label, member = ending[0]
    pair = s.pair(label)
    cov, partner = pair.member(member), pair.partner(member)
    interior = [x for x in critical_points(s) if cov.lo < x < s.B]
    if not interior:
        raise DegenerateError(f"no critical point inside [{cov.lo}, {cov.hi}]")
    w = interior[-1]
    cut = s.B - w
    new = IdentificationPair.of(Interval(cov.lo, w), Interval(partner.lo, partner.hi - cut), label)
    return s.with_pair(new, support=Interval(s.A, w)), label, w


def _mirrored(s: IISystem, side: Side, fn: Callable[[IISystem], tuple]) -> tuple:
    if side == "right":
        return fn(s)
    if side != "left":
        raise InductionError(f"unknown side: {side}")
    pivot = s.A + s.B
    new, *rest = fn(reflect(s))
    return (reflect(new, pivot), pivot, *rest)


def admissible_transmission(s: IISystem, side: Side = "right", iteration: int = 0) -> tuple[IISystem, StepRecord]:
    if side == "right":
        new, moved, along = _right_transmission(s)
    else:
        new, _pivot, moved, along = _mirrored(s, side, _right_transmission)
        moved, along = (moved[0], _swap(moved[1])), (along[0], _swap(along[1]))
    rec = StepRecord(
        kind="transmission", side=side, moved_pair=moved[0], along_pair=along[0],
        cut_point=None, support_after=new.support,
        moved_member=moved[1], along_member=along[1], iteration=iteration,
    )
    return new, rec


def reduction(s: IISystem, side: Side = "right", iteration: int = 0) -> tuple[IISystem, StepRecord]:
    if side == "right":
        new, label, w = _right_reduction(s)
    else:
        new, pivot, label, w = _mirrored(s, side, _right_reduction)
        w = pivot - w
    rec = StepRecord(
        kind="reduction", side=side, moved_pair=label, along_pair=None,
        cut_point=w, support_after=new.support, iteration=iteration,
    )
    return new, rec


def _covering_count(s: IISystem, side: Side) -> int:
    if side == "right":
        return len(_ending_at_b(s))
    return sum(1 for p in s.pairs for m in ("left", "right") if p.member(m).lo == s.A)


# -----------------------------
# Iterations
# -----------------------------
def rauzy_step(s: IISystem, side: Side = "right", iteration: int = 0) -> tuple[IISystem, list[StepRecord]]:
    """One ordinary iteration: boundary transmissions (shortest first) then one reduction."""
    records: list[StepRecord] = []
    cur = s
    while _covering_count(cur, side) > 1:
        cur, rec = admissible_transmission(cur, side, iteration)
        records.append(rec)
    cur, rec = reduction(cur, side, iteration)
    records.append(rec)
    return cur, records


def run_induction(
    s: IISystem,
    side: Side = "right",
    max_ordinary_steps: int = DEFAULT_MAX_STEPS,
    stop_when: StopWhen = "symmetric",
) -> InductionTrace:
    steps: list[StepRecord] = []
    cur = s
    n = 0
    detail = None
    while True:
        if has_hole(cur):
            outcome: Outcome = "hole"
            break
        if n >= max_ordinary_steps:
            outcome = "step_cap"
            break
        try:
            cur, recs = rauzy_step(cur, side, n)
        except InductionError as e:
            outcome, detail = "degenerate", str(e)
            break
        steps.extend(recs)
        n += 1
        if has_hole(cur):
            outcome = "hole"
            break
        if stop_when == "symmetric" and is_special(cur):
            outcome = "symmetric"
            break
    return InductionTrace(s, tuple(steps), cur, outcome, side, detail)


def group_generalized(t: InductionTrace) -> list[GeneralizedIteration]:
    """Maximal runs of ordinary iterations whose reductions hit the same pair."""
    groups: list[GeneralizedIteration] = []
    current: Optional[Label] = None
    start = next_start = count = 0
    for i, rec in enumerate(t.steps):
        if rec.kind != "reduction":
            continue
        if rec.moved_pair != current:
            if current is not None:
                groups.append(GeneralizedIteration(current, range(start, next_start), count))
            current, start, count = rec.moved_pair, next_start, 0
        count += 1
        next_start = i + 1
    if current is not None:
        groups.append(GeneralizedIteration(current, range(start, next_start), count))
    return groups


def reduced_sequence(t: InductionTrace) -> list[str]:
    """Per ordinary iteration: 'b,c>a' (transmitted pairs > reduced pair), or just the reduced pair."""
    out: list[str] = []
    moved: list[str] = []
    for rec in t.steps:
        if rec.kind == "transmission":
            moved.append(rec.moved_pair)
            continue
        out.append(f"{','.join(moved)}>{rec.moved_pair}" if moved else rec.moved_pair)
        moved = []
    return out


def replay(initial: IISystem, steps: Sequence[StepRecord]) -> IISystem:
    cur = initial
    for i, rec in enumerate(steps):
        if rec.kind == "transmission":
            if rec.moved_member is None or rec.along_pair is None or rec.along_member is None:
                raise InductionError(f"step {i}: transmission record lacks member data")
            cur = transmission(cur, (rec.moved_pair, rec.moved_member), (rec.along_pair, rec.along_member))
        else:
            cur, got = reduction(cur, rec.side, rec.iteration)
            if got.moved_pair != rec.moved_pair or got.cut_point != rec.cut_point:
                raise InductionError(
                    f"step {i}: replay diverged (reduced {got.moved_pair} at {got.cut_point}, "
                    f"recorded {rec.moved_pair} at {rec.cut_point})"
                )
        if cur.support != rec.support_after:
            raise InductionError(f"step {i}: support differs from the recorded one")
    return cur
