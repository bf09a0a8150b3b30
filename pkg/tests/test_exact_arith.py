from fractions import Fraction
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis.strategies import fractions, integers, tuples

from exact_arith import (
    AlgebraicReal, ExactArithError, IntPoly, NumberFieldElement, as_rational, build_number_field,
    charpoly, det_int, exact_floor, factor_small, isolate_real_roots, mat_mul,
    nf_arith, nf_compare, rational_arith, squarefree_part, to_decimal,
)

M = ((3, 1, -1, -4), (-1, 2, 0, 0), (-2, -2, 1, 4), (3, 2, -1, -5))


def test_as_rational_accepts_exact_inputs_only():
    assert as_rational(3) == Fraction(3)
    assert as_rational("7/3") == Fraction(7, 3)
    with pytest.raises(ExactArithError):
        as_rational(0.5)
    with pytest.raises(ExactArithError):
        as_rational(True)
    with pytest.raises(ExactArithError):
        as_rational("1/0")


def test_rational_division_by_zero():
    with pytest.raises(ExactArithError):
        rational_arith(1, 0, "div")
    assert rational_arith("1/3", "1/6", "add") == Fraction(1, 2)


@given(fractions(), fractions(), fractions())
def test_rational_add_is_commutative_and_associative(x, y, z):
    assert rational_arith(rational_arith(x, y, "add"), z, "add") == rational_arith(x, rational_arith(y, z, "add"), "add")
    assert rational_arith(x, y, "add") == rational_arith(y, x, "add")


@given(fractions(), fractions())
def test_rational_div_inverts_mul(x, y):
    assume(y != 0)
    assert rational_arith(rational_arith(x, y, "mul"), y, "div") == x


def test_charpoly_of_thin_matrix():
    assert charpoly(M).coeffs == (-1, 5, -4, -1, 1)
    assert str(charpoly(M)) == "t^4 - t^3 - 4t^2 + 5t - 1"


def test_factor_small_splits_off_unit_root():
    factors = factor_small(charpoly(M))
    assert [f.coeffs for f in factors] == [(-1, 1), (1, -4, 0, 1)]
    product = factors[0] * factors[1]
    assert product == charpoly(M)


def test_squarefree_part_drops_repeated_factor():
    p = IntPoly((1, -1)) * IntPoly((1, -1)) * IntPoly((2, 1))
    assert squarefree_part(p).degree() == 2


def test_isolate_real_roots_of_cubic():
    roots = isolate_real_roots(IntPoly((1, -4, 0, 1)))
    assert len(roots) == 3
    poly = IntPoly((1, -4, 0, 1))
    mids = sorted(float(AlgebraicReal(poly, lo, hi).refine(Fraction(1, 10**6)).midpoint()) for lo, hi in roots)
    assert abs(mids[1] - 0.2541) < 1e-3
    assert mids[0] < -2 < 1 < mids[2]


def test_build_number_field_picks_eigenvalue_in_unit_interval():
    alpha = build_number_field(M)
    assert alpha.minimal_poly.coeffs == (1, -4, 0, 1)
    fine = alpha.refine(Fraction(1, 10**6))
    assert fine.width < Fraction(1, 10**6)
    assert abs(float(fine.midpoint()) - 0.2541) < 1e-3


def test_build_number_field_rejects_matrix_without_eigenvalue_in_unit_interval():
    with pytest.raises(ExactArithError):
        build_number_field(((2, 0), (0, 3)))


@pytest.fixture(scope="module")
def lam():
    return NumberFieldElement.gen(build_number_field(M))


def test_generator_satisfies_minimal_polynomial(lam):
    assert lam * lam * lam - 4 * lam + 1 == 0
    assert lam * lam * lam == 4 * lam - 1


def test_inverse_and_division(lam):
    inv = lam.inverse()
    assert lam * inv == 1
    assert (1 / lam) == inv
    assert (lam + 1) / (lam + 1) == 1
    with pytest.raises(ExactArithError):
        NumberFieldElement(lam.generator, ()).inverse()


def test_comparisons_and_floor(lam):
    assert 0 < lam < Fraction(1, 3)
    assert nf_compare(lam, lam * lam) == "greater"
    assert nf_compare(lam, lam + 0) == "equal"
    assert exact_floor(10 * lam) == 2
    assert math.floor(1 / lam) == 3
    assert to_decimal(lam, 4) == "0.2541"


def test_nf_arith_checks_generator(lam):
    one = NumberFieldElement(lam.generator, (1,))
    assert nf_arith(lam, one, "add") == lam + 1
    assert nf_arith(lam, lam, "mul") == lam * lam
    assert nf_arith(one, lam, "div") * lam == 1
    with pytest.raises(ExactArithError):
        nf_arith(lam, lam, "pow")
    other = NumberFieldElement.gen(AlgebraicReal(IntPoly((1, -4, 0, 1)), Fraction(1), Fraction(2)))
    with pytest.raises(ExactArithError):
        nf_arith(lam, other, "sub")


def test_field_elements_are_immutable_and_hashable(lam):
    with pytest.raises(AttributeError):
        lam.coeffs = ()
    assert len({lam, lam + 0, lam * 1}) == 1
    assert hash(NumberFieldElement(lam.generator, (3,))) == hash(Fraction(3))


@given(integers(-20, 20), integers(-20, 20), integers(1, 9))
@settings(max_examples=50, deadline=None)
def test_number_field_arithmetic_agrees_with_floats(p, q, r):
    alpha = build_number_field(M)
    x = NumberFieldElement(alpha, (p, q))
    y = NumberFieldElement(alpha, (r, 1))
    approx = 0.25410168836
    assert abs(float(x * y) - (p + q * approx) * (r + approx)) < 1e-5
    assert abs(float(x / y) - (p + q * approx) / (r + approx)) < 1e-5


def test_exact_floor_of_rationals():
    assert exact_floor(Fraction(-1, 2)) == -1
    assert exact_floor(Fraction(7, 2)) == 3


def test_det_and_mat_mul():
    assert det_int(M) == -1
    ident = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert mat_mul(M, ident) == M
    assert det_int(mat_mul(M, M)) == 1


small = tuples(*(fractions(min_value=-5, max_value=5, max_denominator=7) for _ in range(3)))


@given(small, small, small)
@settings(max_examples=60, deadline=None)
def test_number_field_axioms(xs, ys, zs):
    alpha = build_number_field(M)
    x, y, z = (NumberFieldElement(alpha, cs) for cs in (xs, ys, zs))
    assert (x * y) * z == x * (y * z)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if x != 0:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(small, small)
@settings(max_examples=60, deadline=None)
def test_exact_order_agrees_with_floats(xs, ys):
    alpha = build_number_field(M)
    x, y = NumberFieldElement(alpha, xs), NumberFieldElement(alpha, ys)
    fx, fy = float(x), float(y)
    assume(abs(fx - fy) > 1e-9)
    assert (x < y) == (fx < fy)
    assert nf_compare(x, y) == ("less" if fx < fy else "greater")
