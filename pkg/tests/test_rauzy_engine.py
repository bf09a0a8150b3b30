from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis.strategies import fractions

from conftest import P
from sampling import seeded_samples
from iis_core import (
    IISystem, IdentificationPair, Interval, SymmetricParams, build_special_symmetric,
    is_special, params_of, reflect,
)
from rauzy_engine import (
    DegenerateError, InductionError, InductionTrace, ReductionError, StepRecord,
    TransmissionError, admissible_transmission, group_generalized, rauzy_step,
    reduced_sequence, reduction, replay, run_induction, transmission,
)

F = Fraction


def test_transmission_shifts_along_carrier(ten_four):
    s = transmission(ten_four, ("b", "right"), "a")
    assert s.pair("b") == IdentificationPair(Interval(F(0), F(4)), Interval(F(6), F(10)), "b")
    assert s.support == ten_four.support


def test_transmission_errors(ten_four):
    with pytest.raises(TransmissionError):
        transmission(ten_four, ("a", "right"), "a")
    with pytest.raises(TransmissionError):
        transmission(ten_four, ("b", "left"), "c")
    with pytest.raises(TransmissionError):
        transmission(ten_four, ("c", "right"), ("a", "left"))


def test_transmissions_then_reduction_give_next_symmetric_system(ten_four):
    s = transmission(ten_four, ("b", "right"), "a")
    s = transmission(s, ("c", "right"), "a")
    s, rec = reduction(s)
    assert rec.cut_point == 10
    assert s.support == Interval(F(0), F(10))
    assert s.pair("a") == IdentificationPair(Interval(F(0), F(5)), Interval(F(5), F(10)), "a")
    assert is_special(s)
    assert params_of(s).astuple() == (F(5), F(4), F(1), F(2))


def test_reduction_needs_a_single_interval_at_b(ten_four):
    with pytest.raises(ReductionError):
        reduction(ten_four)


def test_admissible_transmission_moves_shortest_boundary_interval(ten_four):
    s, rec = admissible_transmission(ten_four)
    assert (rec.moved_pair, rec.moved_member, rec.along_pair, rec.along_member) == ("b", "right", "a", "right")
    assert s.pair("b").right == Interval(F(6), F(10))


def _lone_at_b(b_right: Interval) -> IISystem:
    return IISystem(Interval(F(0), F(5)), (
        IdentificationPair.of(Interval(F(0), F(2)), Interval(F(3), F(5)), "a"),
        IdentificationPair.of(Interval(F(0), F(1)), b_right, "b"),
        IdentificationPair.of(Interval(F(1), F(2)), Interval(F(2), F(3)), "c"),
    ))


def test_lone_interval_at_b_carries_the_interval_nearest_b():
    s, rec = admissible_transmission(_lone_at_b(Interval(F(7, 2), F(9, 2))))
    assert (rec.moved_pair, rec.moved_member, rec.along_pair, rec.along_member) == ("b", "right", "a", "right")
    assert s.pair("b") == IdentificationPair(Interval(F(0), F(1)), Interval(F(1, 2), F(3, 2)), "b")
    with pytest.raises(TransmissionError):
        admissible_transmission(_lone_at_b(Interval(F(1), F(2))))


def test_first_ordinary_iteration(ten_four):
    s, recs = rauzy_step(ten_four)
    assert [r.kind for r in recs] == ["transmission", "reduction"]
    assert recs[-1].cut_point == 13
    assert s.support == Interval(F(0), F(13))
    assert s.pair("a") == IdentificationPair(Interval(F(0), F(8)), Interval(F(5), F(13)), "a")


def test_run_induction_reaches_symmetric_state(ten_four):
    t = run_induction(ten_four)
    assert t.outcome == "symmetric"
    assert t.ordinary_iterations == 2
    assert reduced_sequence(t) == ["b>a", "c>a"]
    assert params_of(t.final).astuple() == (F(5), F(4), F(1), F(2))
    groups = group_generalized(t)
    assert [(g.reduced_pair, g.ordinary) for g in groups] == [("a", 2)]


def test_left_side_mirrors_right_side(ten_four):
    right = run_induction(ten_four, "right")
    left = run_induction(ten_four, "left")
    assert left.outcome == "symmetric"
    assert left.ordinary_iterations == 2
    assert left.final.support == Interval(F(5), F(15))
    assert left.final == reflect(right.final, F(15))
    assert all(r.side == "left" for r in left.steps)


def test_step_cap_zero_and_hole_first(ten_four):
    t = run_induction(ten_four, max_ordinary_steps=0)
    assert t.outcome == "step_cap"
    assert t.steps == ()
    holey = run_induction(build_special_symmetric(P(4, 3, 2, F(1, 2))))
    assert holey.outcome == "hole"
    assert holey.ordinary_iterations == 0


def test_length_tie_is_degenerate():
    s = build_special_symmetric(P(2, 2, 1, 1))
    with pytest.raises(DegenerateError):
        admissible_transmission(s)
    with pytest.raises(DegenerateError):
        rauzy_step(s)


def test_replay_reproduces_trace(ten_four):
    t = run_induction(ten_four)
    assert replay(t.initial, t.steps) == t.final
    left = run_induction(ten_four, "left")
    assert replay(left.initial, left.steps) == left.final


def test_replay_detects_tampering(ten_four):
    t = run_induction(ten_four)
    bad = list(t.steps)
    last = bad[-1]
    bad[-1] = StepRecord(last.kind, last.side, last.moved_pair, None, F(9), last.support_after)
    with pytest.raises(InductionError):
        replay(t.initial, bad)


def _rec(kind, pair):
    return StepRecord(kind, "right", pair, None, None, Interval(F(0), F(1)))


def test_grouping_of_synthetic_records(ten_four):
    steps = (
        _rec("transmission", "b"), _rec("reduction", "a"),
        _rec("transmission", "c"), _rec("reduction", "a"),
        _rec("reduction", "b"),
    )
    t = InductionTrace(ten_four, steps, ten_four, "step_cap")
    groups = group_generalized(t)
    assert [(g.reduced_pair, g.step_span, g.ordinary) for g in groups] == [
        ("a", range(0, 4), 2),
        ("b", range(4, 5), 1),
    ]
    assert reduced_sequence(t) == ["b>a", "c>a", "b"]


@given(fractions(min_value=F(1, 20), max_value=20),
       fractions(min_value=F(1, 20), max_value=20),
       fractions(min_value=F(1, 20), max_value=20),
       fractions(min_value=F(1, 20), max_value=20))
@settings(max_examples=40, deadline=None)
def test_lengths_track_support_through_iterations(a, b, c, u):
    assume(u <= a + b)
    s = build_special_symmetric(SymmetricParams.of(a, b, c, u))
    t = run_induction(s, "right", 12, "hole_only")
    for end in range(len(t.steps) + 1):
        if end and t.steps[end - 1].kind != "reduction":
            continue
        cur = replay(t.initial, t.steps[:end])
        assert sum(p.length for p in cur.pairs) == cur.B - cur.A


@pytest.mark.parametrize("p", seeded_samples(3, 15, 20))
def test_support_strictly_shrinks_at_every_reduction(p):
    t = run_induction(build_special_symmetric(p))
    width = t.initial.B - t.initial.A
    for r in t.steps:
        after = r.support_after.hi - r.support_after.lo
        if r.kind == "reduction":
            assert after < width
        else:
            assert after == width
        width = after
