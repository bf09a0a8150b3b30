import random
from fractions import Fraction

import pytest

from conftest import P
from iis_core import is_generic
from sampling import _off_boundary, map_ordered, sample_params, seeded_samples
from symmetry_cases import DegenerateCase, classify_case, integral_quotients, normalize_params


def test_samples_are_reproducible():
    assert seeded_samples(7, 20, 50) == seeded_samples(7, 20, 50)
    assert seeded_samples(7, 20, 50) != seeded_samples(8, 20, 50)


def test_samples_respect_height_and_constraints():
    for p in seeded_samples(3, 50, 12):
        a, b, c, u = p.astuple()
        assert all(v.numerator <= 12 and v.denominator <= 12 for v in p.astuple())
        assert a != b
        assert u < a + b
        assert 2 * u != a + b
        assert is_generic(p)


def test_height_must_leave_room():
    with pytest.raises(ValueError):
        sample_params(random.Random(0), 1)


def test_map_ordered_keeps_input_order():
    items = [-x for x in range(10)]
    assert map_ordered(abs, items) == list(range(10))
    assert map_ordered(abs, items, workers=2) == list(range(10))
    assert map_ordered(abs, [], workers=4) == []


def test_samples_avoid_integral_case_ratios():
    assert not _off_boundary(P(Fraction(19, 6), Fraction(3, 11), 21, Fraction(3, 2)))
    assert _off_boundary(P(10, 4, 1, 2))
    assert _off_boundary(P(3, 3, 1, 1))
    for p in seeded_samples(5, 200, 30):
        try:
            q = normalize_params(p)
            label, _ = classify_case(q)
        except DegenerateCase:
            continue
        assert integral_quotients(label, q) == []
