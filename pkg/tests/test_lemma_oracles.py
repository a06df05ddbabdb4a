"""Tests for the spread maximum, the combinatorial selection and the N_E bound."""

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from lang_heights.errors import InstanceTooLarge, PreconditionViolated
from lang_heights.lemma_oracles import (
    CombiInstance,
    ProofOfAbsence,
    combi_select,
    fmax_bound,
    fmax_bruteforce,
    fmax_closed_form,
    fmax_split_values,
    ne_bound_check,
    ne_exponent,
    spread,
    split_values_consistent,
)

# =============================================================================
# Spread maximum
# =============================================================================


def test_spread():
    assert spread([1, 4]) == 18
    assert spread([7]) == 0
    assert spread([1, 2, 5, 6]) == 136


def test_fmax_small_instance():
    instance = fmax_bruteforce(4, 2)
    assert instance.value_bruteforce == 18
    assert instance.maximiser == (1, 4)
    assert instance.bound == Fraction(225, 2)
    assert instance.closedform == 18


def test_closed_form_only_for_even_n():
    assert fmax_closed_form(6, 4) == 136
    assert fmax_closed_form(6, 3) is None


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 12).flatmap(lambda N: st.tuples(st.just(N), st.integers(1, min(N, 6)))))
def test_fmax_below_bound(case):
    N, n = case
    instance = fmax_bruteforce(N, n)
    assert instance.value_bruteforce <= fmax_bound(N, n)
    if n % 2 == 0:
        assert instance.value_bruteforce == fmax_closed_form(N, n)


def test_fmax_caps():
    with pytest.raises(InstanceTooLarge):
        fmax_bruteforce(15, 2)
    with pytest.raises(InstanceTooLarge):
        fmax_bruteforce(12, 9)
    with pytest.raises(PreconditionViolated):
        fmax_bruteforce(3, 4)


def test_split_values():
    values = fmax_split_values(6, 4)
    assert values == [40, 112, 136, 112, 40]
    assert split_values_consistent(values)
    assert max(values) == fmax_bruteforce(6, 4).value_bruteforce
    assert not split_values_consistent([40, 30, 40])


# =============================================================================
# Combinatorial selection
# =============================================================================


def test_no_selection_for_fractional_ell():
    instance = CombiInstance.build(
        {"a": 1, "b": 1, "c": 1},
        [{"a", "b"}, {"a", "b"}, {"a", "c"}, {"a", "c"}, {"b", "c"}],
        Fraction(3, 2),
        2,
    )
    assert instance.threshold == Fraction(16, 45)
    result = combi_select(instance)
    assert isinstance(result, ProofOfAbsence)
    assert result.heavy_pairs == [(0, 1), (2, 3)]
    assert result.partner_counts == [1, 1, 1, 1, 0]
    assert result.needed == 2


def test_selection_with_integral_ell():
    instance = CombiInstance.build(
        {"a": 1, "b": 1, "c": 1, "d": 1},
        [{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}],
        2,
        1,
    )
    selection = combi_select(instance)
    assert isinstance(selection, list)
    assert len(selection) == 2 == len(set(selection))
    pivot, partner = selection
    overlap = instance.measure(instance.subsets[pivot] & instance.subsets[partner])
    assert overlap >= instance.threshold * instance.total


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.frozensets(st.integers(0, 5), min_size=3, max_size=6), min_size=6, max_size=10),
    st.integers(1, 2),
)
def test_selection_always_exists_for_integral_ell(subsets, Z):
    assume(len(subsets) >= 2 * (Z + 1))
    instance = CombiInstance.build({v: 1 for v in range(6)}, subsets, 2, Z)
    selection = combi_select(instance)
    assert not isinstance(selection, ProofOfAbsence)
    assert len(set(selection)) == Z + 1


def test_selection_needs_enough_subsets():
    instance = CombiInstance.build({"a": 1, "b": 1}, [{"a", "b"}], 1, 1)
    with pytest.raises(PreconditionViolated):
        combi_select(instance)


def test_inadmissible_subset_rejected():
    with pytest.raises(ValidationError):
        CombiInstance.build({"a": 1, "b": 1, "c": 1}, [{"a"}], 2, 0)


# =============================================================================
# N_E bound
# =============================================================================


def test_ne_exponent():
    assert ne_exponent() == pytest.approx(0.5307378, abs=1e-6)
    assert ne_exponent() < 0.54


@pytest.mark.parametrize("factorization, N_E", [(((11, 5),), 5), (((2, 12),), 12), (((2, 3), (3, 4)), 12)])
def test_ne_bound(factorization, N_E):
    result = ne_bound_check(factorization)
    assert result.N_E == N_E
    assert result.holds
    assert result.margin == pytest.approx(0.54 * math.log(result.abs_discriminant) - math.log(N_E))


def test_ne_bound_needs_nontrivial_discriminant():
    with pytest.raises(PreconditionViolated):
        ne_bound_check(())
