"""Tests for local heights, component indices and the canonical height."""

from fractions import Fraction

import pytest

from lang_heights.arch_analytic import period_lattice
from lang_heights.curve_core import RationalPoint, WeierstrassModel, group_add, group_sub, scalar_mul, tate_reduce
from lang_heights.errors import NotSplitMultiplicative, PointIsOrigin, PreconditionViolated, TorsionShortCircuit
from lang_heights.height_engine import (
    bernoulli2,
    canonical_height,
    division_polynomial,
    local_height_terms,
    naive_height_oracle,
    nonarch_local_height,
    oracle_tolerance,
    tate_parameter_order,
    torsion_order,
)

from .conftest import HEIGHT_37A1, REGULATOR_37A1


def test_bernoulli2():
    assert bernoulli2(Fraction(0)) == Fraction(1, 6)
    assert bernoulli2(Fraction(1, 2)) == Fraction(-1, 12)
    assert bernoulli2(Fraction(1, 5)) == bernoulli2(Fraction(4, 5))


def test_division_polynomials(e37, p37, e11, t11):
    assert division_polynomial(e37, p37, 2) == 1
    assert division_polynomial(e37, p37, 3) == -1
    assert division_polynomial(e11, t11, 5) == 0
    assert division_polynomial(e11, t11, 3) != 0
    with pytest.raises(PointIsOrigin):
        division_polynomial(e37, RationalPoint.origin(), 2)


def test_torsion_order(e37, p37, e11, t11, congruent):
    assert torsion_order(e11, t11) == 5
    assert torsion_order(congruent, RationalPoint.affine(0, 0)) == 2
    assert torsion_order(e37, p37) is None
    with pytest.raises(PreconditionViolated):
        torsion_order(e37, p37, cap=0)


# =============================================================================
# Finite places
# =============================================================================


def test_nonsingular_point_at_bad_prime(e37, p37):
    term = nonarch_local_height(e37, p37, tate_reduce(e37, 37))
    assert term.value_over_log_p == Fraction(1, 12)
    assert term.meets_floor


def test_component_index_is_a_homomorphism(e11, t11):
    reduction = tate_reduce(e11, 11)
    base = tate_parameter_order(e11, t11, 11, reduction)
    assert 0 <= base < 5
    for k in range(2, 6):
        multiple = scalar_mul(e11, k, t11)
        expected = (k * base) % 5
        actual = 0 if multiple.is_origin else tate_parameter_order(e11, multiple, 11, reduction)
        assert actual == expected


def test_component_index_needs_split_place(e37, p37, cubic_twist):
    with pytest.raises(NotSplitMultiplicative):
        tate_parameter_order(e37, p37, 5)
    with pytest.raises(NotSplitMultiplicative):
        tate_parameter_order(cubic_twist, RationalPoint.affine(2, 3), 3)


def test_local_terms_meet_their_floors(e11, t11, e389):
    for model, P in ((e11, t11), (e389, RationalPoint.affine(-1, 1))):
        terms = local_height_terms(model, P, period_lattice(model))
        assert terms[0].place == "infinity"
        assert all(t.meets_floor for t in terms)


def test_good_primes_in_the_denominator(e37, p37):
    P = scalar_mul(e37, 5, p37)
    terms = local_height_terms(e37, P, period_lattice(e37))
    places = [t.place for t in terms]
    assert 2 in places
    two = next(t for t in terms if t.place == 2)
    assert two.formula_case == "good"
    assert two.value_over_log_p == Fraction(1)


# =============================================================================
# Oracle
# =============================================================================


def test_naive_oracle_close_to_height(e37, p37):
    oracle = naive_height_oracle(e37, p37, 8)
    assert abs(oracle - HEIGHT_37A1) <= oracle_tolerance(e37, 8)


def test_naive_oracle_short_circuits_on_two_torsion(congruent):
    with pytest.raises(TorsionShortCircuit) as info:
        naive_height_oracle(congruent, RationalPoint.affine(0, 0), 3)
    assert info.value.doublings == 1


def test_oracle_doublings_range(e37, p37):
    with pytest.raises(PreconditionViolated):
        naive_height_oracle(e37, p37, 13)


# =============================================================================
# Canonical height
# =============================================================================


def test_canonical_height_37a1(e37, p37):
    report = canonical_height(e37, p37)
    assert report.canonical_height == pytest.approx(HEIGHT_37A1, abs=1e-9)
    assert report.canonical_height_bsd == pytest.approx(REGULATOR_37A1, abs=2e-9)
    assert report.agrees
    assert not report.is_torsion


def test_canonical_height_is_model_independent(e37, p37):
    scaled = WeierstrassModel(0, 0, 8, -16, 0)
    report = canonical_height(scaled, RationalPoint.affine(0, 0), doublings=2)
    assert report.canonical_height == pytest.approx(canonical_height(e37, p37, doublings=2).canonical_height, abs=1e-15)


def test_torsion_point_has_height_zero(e11, t11):
    report = canonical_height(e11, t11, doublings=2)
    assert report.canonical_height == 0.0
    assert report.torsion_order == 5
    assert abs(report.local_sum) < 1e-10


def test_origin_report(e37):
    report = canonical_height(e37, RationalPoint.origin())
    assert report.canonical_height == 0.0
    assert report.torsion_order == 1
    assert report.terms == []


@pytest.mark.parametrize("k", [2, 3, 4])
def test_height_is_quadratic(e37, p37, k):
    base = canonical_height(e37, p37, doublings=2).canonical_height
    multiple = canonical_height(e37, scalar_mul(e37, k, p37), doublings=0).canonical_height
    assert multiple == pytest.approx(k * k * base, rel=1e-12)


def test_parallelogram_law(e389):
    P, Q = RationalPoint.affine(-1, 1), RationalPoint.affine(0, 0)
    periods = period_lattice(e389)

    def h(R):
        return canonical_height(e389, R, doublings=0, periods=periods).canonical_height

    lhs = h(group_add(e389, P, Q)) + h(group_sub(e389, P, Q))
    assert lhs == pytest.approx(2 * h(P) + 2 * h(Q), rel=1e-12)


def test_height_record(e37, p37):
    record = canonical_height(e37, p37, doublings=2).to_record()
    assert record["point"] == "(0, 0)"
    assert record["places"].startswith("infinity:arch")
