from fractions import Fraction

import pytest

from conftest import P
from block_route import (
    DegenerateCase, block_route, euclid_move, euclid_state, has_hole,
    is_symmetric_state, to_system,
)
from iis_core import build_special_symmetric, is_special
from sampling import seeded_samples
from symmetry_cases import classify_case, normalize_params, symmetrize

F = Fraction


def test_initial_state_is_the_special_system():
    p = P(19, 10, 1, 12)
    g = euclid_state(p)
    assert to_system(g) == build_special_symmetric(p)
    assert is_symmetric_state(g)
    assert g.total.row == (1, 1, 1, 0)


def test_moves_track_integer_rows():
    g = euclid_state(P(19, 10, 1, 12))
    g, m1 = euclid_move(g)
    assert str(m1) == "b>a/0"
    assert g.la.value == 8 and g.la.row == (1, -1, -1, 0)
    assert not has_hole(g)
    g, m2 = euclid_move(g)
    assert str(m2) == "a>b/2"
    assert g.lb.value == 1 and g.lb.row == (-1, 2, 0, 0)
    assert g.starts[0].value == 3 and g.starts[0].row == (-1, 1, 0, 1)
    assert g.starts[1].value == 8
    assert not is_symmetric_state(g)


def test_integer_parameters_run_into_a_tie():
    with pytest.raises(DegenerateCase):
        block_route(P(19, 10, 1, 12))


def test_holey_start_is_reported_without_moves():
    route = block_route(P(4, 3, 2, F(1, 2)))
    assert route.verdict == "hole"
    assert route.moves == ()
    assert route.determinant is None


def test_block_route_agrees_with_engine_on_cases_7_and_8():
    checked = 0
    for p in seeded_samples(11, 300, 40):
        q = normalize_params(p)
        label, hole = classify_case(q)
        if label.index not in (7, 8) or hole:
            continue
        route = block_route(q)
        out = symmetrize(build_special_symmetric(q), attach_matrix=False)
        assert route.verdict == out.result
        if route.verdict == "symmetric":
            assert route.params == out.params
            assert abs(route.determinant) == 1
            assert is_special(build_special_symmetric(route.params))
        checked += 1
    assert checked > 0
