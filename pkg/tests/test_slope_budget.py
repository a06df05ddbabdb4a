"""Tests for parameter choice, the zeros lemma, the slope budget and the constants audit."""

import math
from fractions import Fraction

import pytest

from lang_heights.errors import H0Violated, PreconditionViolated
from lang_heights.lang_verifier import torsion_coefficient
from lang_heights.slope_budget import (
    BIG_J_TORSION,
    T_BOUNDS,
    _row,
    bingo_height_bounds,
    budget_terms,
    choose_parameters,
    constants_table,
    h0_floor,
    minimal_zeros_z,
    params_zeros_check,
    reproduce_constants,
    t_bound_audit,
    zeros_lemma_ok,
)


@pytest.fixture
def floor_params():
    """d = 1, N_E = 1 at the log|N Delta| floor with h_F = log|N Delta| / 4."""
    log_delta = h0_floor(1)
    return choose_parameters(1, 1, log_delta, log_delta / 4)


# =============================================================================
# Parameters
# =============================================================================


def test_parameters_at_degree_one(floor_params):
    p = floor_params
    assert (p.D, p.M, p.Z, p.T0, p.T1) == (4000, 64, 16_000_000, 8000, 1)
    assert p.n == 46_080_003_157
    assert p.N == 2116 * p.n + 1
    assert p.m_max == 24 * (p.N - 1)
    assert p.binding_n_constraint == "2880(Z+1)"
    assert p.h0_holds


def test_divisibility_of_D():
    for d in (1, 2, 3):
        for N_E in (1, 5, 12):
            p = choose_parameters(d, N_E, h0_floor(d), 0.0)
            assert p.D % (4 * N_E) == 0


def test_pigeonhole_binds_for_small_z():
    p = choose_parameters(5, 1, h0_floor(5), 0.0, Z=0)
    assert p.binding_n_constraint == "pigeonhole"


def test_h0_floor_enforced():
    with pytest.raises(H0Violated):
        choose_parameters(1, 1, 100.0, 10.0)
    relaxed = choose_parameters(1, 1, 100.0, 10.0, enforce_h0=False)
    assert not relaxed.h0_holds


def test_parameters_need_positive_inputs():
    with pytest.raises(PreconditionViolated):
        choose_parameters(0, 1, 1e9, 0.0)


# =============================================================================
# Zeros lemma
# =============================================================================


def test_zeros_lemma_small_instance():
    check = zeros_lemma_ok(1, 1, 2, [6])
    assert check.ok and bool(check)
    assert not zeros_lemma_ok(1, 1, 2, [5])


def test_zeros_lemma_rejects_non_positive():
    with pytest.raises(PreconditionViolated):
        zeros_lemma_ok(0, 1, 2, [6])


def test_zeros_lemma_fails_at_printed_z(floor_params):
    check = params_zeros_check(floor_params)
    assert check.first_ok
    assert check.sum_T == 16_008_000
    assert check.rhs == 16_388_000
    assert not check.second_ok
    assert minimal_zeros_z(floor_params) == 16_380_001


def test_minimal_z_repairs_zeros_lemma(floor_params):
    Z = minimal_zeros_z(floor_params)
    repaired = choose_parameters(1, 1, h0_floor(1), h0_floor(1) / 4, Z=Z)
    assert params_zeros_check(repaired).ok
    just_below = choose_parameters(1, 1, h0_floor(1), h0_floor(1) / 4, Z=Z - 1)
    assert not params_zeros_check(just_below).ok


# =============================================================================
# Budget
# =============================================================================


def test_budget_at_degree_one(floor_params):
    budget = budget_terms(floor_params)
    assert 0.149 < budget.t4 < 0.150
    assert budget.t1 == pytest.approx(825 * 8000 / 15_992_000 / 4)
    assert budget.t3 == pytest.approx(1650 / 8001 / 4)
    assert budget.t5 < T_BOUNDS["t5"]
    assert set(budget.violations) == {"t4"}
    assert budget.slack > 0.5
    assert not budget.zeros_ok


def test_exact_factorial_term_below_bound(floor_params):
    budget = budget_terms(floor_params)
    assert budget.term_C_exact < budget.term_C
    assert budget.term_D < 0


def test_t3_grows_with_degree():
    log_delta = h0_floor(2)
    budget = budget_terms(choose_parameters(2, 1, log_delta, log_delta / 4))
    assert budget.t3 == pytest.approx(1650 / 16001, rel=1e-6)
    assert "t3" in budget.violations


def test_height_lower_bounds(floor_params):
    bounds = bingo_height_bounds(floor_params)
    assert bounds.faltings_coefficient == pytest.approx(4 * bounds.disc_coefficient)
    assert bounds.disc_bound == pytest.approx(bounds.disc_coefficient * h0_floor(1))


def test_t_bound_audit_grid():
    frame = t_bound_audit(range(1, 3), range(1, 3))
    assert len(frame) == 4
    assert set(frame.columns) >= {"d", "N_E", *T_BOUNDS, "slack", "zeros_ok", "minimal_Z", "violations"}
    assert frame.loc[frame["d"] == 1, "violations"].str.contains("t4").all()
    assert frame.loc[frame["d"] == 2, "violations"].str.contains("t3").all()
    assert not frame["zeros_ok"].any()


# =============================================================================
# Constants audit
# =============================================================================


def _rows(d: int = 1) -> dict:
    return {row.name: row for row in reproduce_constants(d)}


def test_big_j_constants_reproduce():
    rows = _rows()
    assert rows["big_j torsion"].status == "match"
    assert rows["big_j torsion"].recomputed == pytest.approx(10207584 * math.log(2))
    assert rows["big_j torsion"].exact is True
    assert rows["big_j height denominator"].status == "match"
    assert rows["small_disc threshold C0"].status == "match"


def test_printed_constants_that_are_too_strong():
    rows = _rows()
    assert rows["N constant term"].status == "match"
    assert rows["12N constant term"].status == "stated_stronger"
    assert rows["12N constant term"].recomputed == 12 * 6_094_081
    assert rows["N coefficient of d log(2d)"].recomputed == 846_400
    assert rows["N coefficient of d log(2d)"].status == "stated_stronger"
    assert rows["final C_d"].status == "stated_stronger"
    assert not rows["final C_d"].consistent


def test_case_two_constant_is_conservative():
    rows = _rows()
    assert rows["case II height denominator"].status == "stated_weaker"
    assert rows["case II height denominator"].consistent


def test_constants_table_columns():
    frame = constants_table(2)
    assert {"name", "stated", "recomputed", "direction", "status", "consistent", "relative_error"} <= set(
        frame.columns
    )
    assert len(frame) == len(reproduce_constants(2))


def test_constants_need_positive_degree():
    with pytest.raises(PreconditionViolated):
        reproduce_constants(0)


def test_torsion_coefficient_is_exact():
    assert torsion_coefficient(Fraction(1, 2)) == 2412 * 46**2 * 2 == BIG_J_TORSION
    assert torsion_coefficient(Fraction(1, 2)).denominator == 1


@pytest.mark.parametrize("stated", [10_207_583, 10_200_000])
def test_exact_row_rejects_near_misses(stated):
    row = _row("big_j torsion", stated, BIG_J_TORSION, "upper", exact=stated == BIG_J_TORSION)
    assert row.exact is False
    assert row.status == "stated_stronger"


def test_rounded_rows_have_no_exact_flag():
    assert _rows()["big_j height denominator"].exact is None
