"""Tests for the split multiplicative profile, pigeonhole, branch classification and verification."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lang_heights.curve_core import ORIGIN, RationalPoint, WeierstrassModel
from lang_heights.errors import ParameterTooSmall, PreconditionViolated
from lang_heights.lang_verifier import (
    TheoremConstants,
    TorsionDetected,
    branch_bounds,
    c0,
    check_S_decomposition,
    classify_case,
    grid_size,
    hard_branch_parameters,
    in_S,
    in_S_tilde,
    lang_check,
    pigeonhole_from_coords,
    pigeonhole_min_n,
    pigeonhole_multiples,
    s_decomposition,
    split_mult_profile,
    verify_main_theorem,
)

HALF = Fraction(1, 2)

# 11a2: discriminant -11, j = -52893159101157376/11
CURVE_11A2 = (0, -1, 1, -7820, -263580)


# =============================================================================
# Parameters and constants
# =============================================================================


def test_grid_and_pigeonhole_floor():
    assert grid_size(HALF) == 46
    assert grid_size(Fraction(1, 4)) == 92
    assert pigeonhole_min_n(1, HALF) == 278


def test_hard_branch_parameters():
    assert hard_branch_parameters(1, HALF, 1) == (5760, 5760 * 2116 + 1)
    n, N = hard_branch_parameters(1, HALF, 3)
    assert n == 2880 * 4
    assert N == n * 46 * 46 + 1


def test_small_disc_threshold():
    assert c0(1) == pytest.approx(1e8 * math.log(2))


def test_theorem_constants_shrink_with_degree():
    one, two = TheoremConstants.for_degree(1), TheoremConstants.for_degree(2)
    assert one.B_d == pytest.approx(1e16 * math.log(2) ** 1.54)
    assert two.B_d > one.B_d
    assert two.C_d < one.C_d
    assert 0 < one.C_d_prime < 1e-40


def test_branch_bounds():
    big = branch_bounds("big_j")
    assert big.torsion_bound == pytest.approx(10207584 * math.log(2))
    case_two = branch_bounds("small_j_big_disc_case_II", n=5760, N=12188161)
    assert case_two.torsion_bound == 12 * 12188161
    assert case_two.disc_coefficient is None
    with pytest.raises(PreconditionViolated):
        branch_bounds("small_j_big_disc_case_I")


# =============================================================================
# S-profile
# =============================================================================


def test_threshold_membership():
    assert in_S(1, 6) and in_S(5, 6)
    assert not in_S(0, 6)
    assert not in_S(1, 7)
    assert in_S_tilde(1, 3) and in_S_tilde(2, 3)
    assert not in_S_tilde(1, 4)


@given(st.integers(1, 60).flatmap(lambda N: st.tuples(st.just(N), st.integers(0, N - 1))))
def test_S_is_union_of_halves(case):
    N, o = case
    assert in_S(o, N) == (in_S_tilde(o, N) or in_S_tilde((2 * o) % N, N))


@given(st.integers(1, 60).flatmap(lambda N: st.tuples(st.just(N), st.integers(0, N - 1))))
def test_halves_overlap_only_at_thirds(case):
    N, o = case
    both = in_S_tilde(o, N) and in_S_tilde((2 * o) % N, N)
    assert both == (3 * o in (N, 2 * N))


def test_profile_of_torsion_point(e11, t11):
    profile = split_mult_profile(e11, t11)
    assert set(profile.ords) == {11}
    assert profile.N_v == {11: 5}
    assert profile.total_weight == pytest.approx(5 * math.log(11))
    assert (11 in profile.place_set_S) == (profile.ords[11] != 0)
    assert profile.place_set_S_tilde.keys() <= profile.place_set_S.keys()


def test_decomposition_without_thirds(e11, t11):
    result = s_decomposition(e11, t11)
    assert result.union_holds and result.disjoint_holds
    assert result.overlaps == []
    assert check_S_decomposition(e11, t11)


def test_profile_without_split_places(e37, p37):
    profile = split_mult_profile(e37, ORIGIN)
    assert profile.place_set_S == {}
    assert s_decomposition(e37, p37).union_holds


# =============================================================================
# Pigeonhole
# =============================================================================


def test_pigeonhole_from_coords():
    n = pigeonhole_min_n(1, HALF)
    N = n * 46 * 46 + 1
    alpha, beta = math.sqrt(2) - 1, math.sqrt(3) - 1
    result = pigeonhole_from_coords(alpha, beta, HALF, n, N)
    m = np.asarray(result.multipliers)
    assert len(m) == n
    assert np.all(np.diff(m) > 0)
    assert m[0] >= 1 and result.base + m[-1] <= N
    assert result.grid == 46
    for coord in (alpha, beta):
        offsets = np.mod(m * coord + 0.5, 1.0) - 0.5
        assert np.abs(offsets).max() <= 1 / 46 + 1e-9


def test_pigeonhole_parameter_floors():
    with pytest.raises(ParameterTooSmall):
        pigeonhole_from_coords(0.1, 0.2, HALF, 278, 1000)
    with pytest.raises(ParameterTooSmall):
        pigeonhole_from_coords(0.1, 0.2, HALF, 10, 10 * 2116 + 1)


def test_pigeonhole_detects_torsion(e11, t11):
    result = pigeonhole_multiples(e11, t11, HALF, 278, 278 * 2116 + 1)
    assert result == TorsionDetected(5)


# =============================================================================
# Classification and verification
# =============================================================================


def test_small_curves_take_small_disc_branch(e37, p37, e11, t11):
    assert classify_case(e37, p37).branch == "small_j_small_disc"
    assert classify_case(e11, t11).branch == "small_j_small_disc"


def test_big_j_branch():
    model = WeierstrassModel(*CURVE_11A2)
    assert model.discriminant == -11
    classification = classify_case(model, ORIGIN)
    assert classification.branch == "big_j"
    assert classification.log_j1 >= classification.j_threshold


def test_classification_needs_minimal_model():
    scaled = WeierstrassModel(0, 0, 8, -16, 0)
    with pytest.raises(PreconditionViolated):
        classify_case(scaled, RationalPoint.affine(0, 0))


def test_hard_branch(hard_curve):
    classification = classify_case(hard_curve, RationalPoint.affine(0, 1))
    assert classification.branch.startswith("small_j_big_disc")
    assert (classification.n, classification.N) == (5760, 12188161)
    assert classification.abs_disc > classification.C0


def test_verification_on_generator(e37, p37, config):
    record = verify_main_theorem(e37, p37, config)
    assert record.holds
    assert record.torsion_order is None
    assert record.disc_margin > 0 and record.faltings_margin > 0


def test_verification_on_torsion(e11, t11, config):
    record = verify_main_theorem(e11, t11, config)
    assert record.torsion_order == 5
    assert record.torsion_margin == pytest.approx(TheoremConstants.for_degree(1).B_d - 5)
    assert record.disc_margin is None


def test_lang_check_moves_to_minimal_model(e37, config):
    report = lang_check(WeierstrassModel(0, 0, 8, -16, 0), RationalPoint.affine(0, 0), config)
    assert report.model == e37
    record = report.to_record()
    assert record["branch"] == "small_j_small_disc"
    assert record["holds"] is True
    assert record["witness_status"] == "not_applicable"
