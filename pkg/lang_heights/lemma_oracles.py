"""
Exhaustive and closed-form oracles for the combinatorial lemmas.

- fmax: the largest spread sum over n distinct integers in [1, N]
- combi: Z+1 subsets whose pairwise overlaps with a pivot stay heavy
- N_E: lcm of the discriminant exponents against a power of |Delta|

Usage:
    from lang_heights.lemma_oracles import fmax_bruteforce, combi_select

    fmax_bruteforce(4, 2).value_bruteforce        # 18
"""

import logging
import math
from fractions import Fraction
from itertools import combinations
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InstanceTooLarge, PreconditionViolated

logger = logging.getLogger(__name__)

FMAX_MAX_N = 8
FMAX_MAX_RANGE = 14

NE_STATED_EXPONENT = 0.54


# =============================================================================
# Spread maximum
# =============================================================================


def spread(values) -> int:
    """sum over ordered pairs of (m_i - m_j)^2, as 2n sum m^2 - 2 (sum m)^2."""
    values = list(values)
    n = len(values)
    return 2 * n * sum(m * m for m in values) - 2 * sum(values) ** 2


def fmax_bound(N: int, n: int) -> Fraction:
    return Fraction((n + 1) ** 2 * (N + 1) ** 2, 2)


def fmax_closed_form(N: int, n: int) -> Fraction | None:
    """Value at the balanced split, defined for even n."""
    if n % 2:
        return None
    M = N + 1
    return Fraction(n * n * M * M, 2) * (
        1 - Fraction(n + 2, M) + Fraction((n + 1) * (n + 2), 3 * M * M)
    )


class FmaxInstance(BaseModel):
    """Exhaustive maximum of the spread sum against its bound and closed form."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    N: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    value_bruteforce: int
    maximiser: tuple[int, ...]
    bound: Fraction
    closedform: Fraction | None = None

    @model_validator(mode="after")
    def _check(self) -> "FmaxInstance":
        if self.value_bruteforce > self.bound:
            raise ValueError(f"spread maximum {self.value_bruteforce} exceeds bound {self.bound}")
        if self.closedform is not None and self.value_bruteforce != self.closedform:
            raise ValueError(
                f"spread maximum {self.value_bruteforce} differs from closed form {self.closedform}"
            )
        return self


def fmax_bruteforce(N: int, n: int) -> FmaxInstance:
    """
    Maximum spread over all n-subsets of [1, N].

    Args:
        N: Range end
        n: Number of distinct integers

    Returns:
        FmaxInstance, validated against bound and closed form

    Raises:
        InstanceTooLarge: n > 8 or N > 14
        PreconditionViolated: n > N

    Example:
        >>> fmax_bruteforce(4, 2).maximiser
        (1, 4)
    """
    if n > FMAX_MAX_N or N > FMAX_MAX_RANGE:
        raise InstanceTooLarge(f"exhaustive spread search capped at n<={FMAX_MAX_N}, N<={FMAX_MAX_RANGE}")
    if not 1 <= n <= N:
        raise PreconditionViolated(f"need 1 <= n <= N, got n={n}, N={N}")
    best, arg = -1, ()
    for subset in combinations(range(1, N + 1), n):
        value = spread(subset)
        if value > best:
            best, arg = value, subset
    return FmaxInstance(
        N=N,
        n=n,
        value_bruteforce=best,
        maximiser=arg,
        bound=fmax_bound(N, n),
        closedform=fmax_closed_form(N, n),
    )


def fmax_split_values(N: int, n: int) -> list[int]:
    """
    F_max^k for k = 0..n: the k smallest values 1..k and the rest packed at the top.

    The list is symmetric (k <-> n - k) and strictly increasing up to the middle.
    """
    if not 1 <= n <= N:
        raise PreconditionViolated(f"need 1 <= n <= N, got n={n}, N={N}")
    values = []
    for k in range(n + 1):
        low = list(range(1, k + 1))
        high = list(range(N - n + k + 1, N + 1))
        values.append(spread(low + high))
    return values


def split_values_consistent(values: list[int]) -> bool:
    n = len(values) - 1
    symmetric = all(values[k] == values[n - k] for k in range(n + 1))
    increasing = all(values[k + 1] > values[k] for k in range(n // 2))
    return symmetric and increasing


# =============================================================================
# Combinatorial selection
# =============================================================================


class CombiInstance(BaseModel):
    """Weighted ground set, n subsets, and the parameters l and Z."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: dict[Any, Fraction]
    subsets: list[frozenset]
    ell: Fraction = Field(..., description="Measure ratio: every subset carries at least 1/ell of the total")
    Z: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _admissible(self) -> "CombiInstance":
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be non-negative")
        total = self.total
        for i, subset in enumerate(self.subsets):
            if not subset <= self.weights.keys():
                raise ValueError(f"subset {i} leaves the ground set")
            if self.measure(subset) * self.ell < total:
                raise ValueError(f"subset {i} has measure below 1/l of the total")
        return self

    @classmethod
    def build(cls, weights, subsets, ell, Z: int) -> "CombiInstance":
        return cls(
            weights={k: Fraction(v) for k, v in dict(weights).items()},
            subsets=[frozenset(s) for s in subsets],
            ell=Fraction(ell),
            Z=Z,
        )

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    @property
    def threshold(self) -> Fraction:
        """2 / (l^2 (l + 1)) as a fraction of the total."""
        return 2 / (self.ell * self.ell * (self.ell + 1))

    def measure(self, subset) -> Fraction:
        return sum((self.weights[v] for v in subset), Fraction(0))


class ProofOfAbsence(BaseModel):
    """Every index has fewer than Z heavy partners; no selection exists."""

    model_config = ConfigDict(frozen=True)

    heavy_pairs: list[tuple[int, int]]
    partner_counts: list[int]
    needed: int


def pivot_select(overlap, count: int, size: int, threshold) -> list[int] | None:
    """
    A pivot i0 and `count` partners j with overlap(i0, j) >= threshold.

    Pivots are tried in the elimination order: once i fails, only indices
    light against every failed pivot are tried next; if that pool empties,
    every remaining index is tried, which makes the search complete.

    Args:
        overlap: overlap(i, j) -> weight; overlap(i, i) is the weight of i
        count: Partners needed
        size: Number of indices
        threshold: Minimal overlap

    Returns:
        [i0, j1, ..., j_count] or None
    """
    tried: set[int] = set()
    pool = list(range(size))

    def attempt(i: int) -> list[int] | None:
        tried.add(i)
        if overlap(i, i) < threshold:
            return None
        partners = [j for j in range(size) if j != i and overlap(i, j) >= threshold]
        return [i, *partners[:count]] if len(partners) >= count else None

    while pool:
        pivot = pool[0]
        found = attempt(pivot)
        if found:
            return found
        pool = [j for j in pool[1:] if overlap(pivot, j) < threshold]
    for i in range(size):
        if i not in tried:
            found = attempt(i)
            if found:
                logger.debug("pivot %d found outside the elimination order", i)
                return found
    return None


def combi_select(instance: CombiInstance) -> list[int] | ProofOfAbsence:
    """
    Z+1 distinct indices i0, ..., iZ with mu(S_i0 & S_ij) >= 2/(l^2(l+1)).

    Returns:
        The indices, validated by recomputing every overlap, or a
        ProofOfAbsence listing the heavy pairs when none exist (possible
        when l is not an integer)

    Raises:
        PreconditionViolated: n < l (Z + 1)
    """
    n = len(instance.subsets)
    if n < instance.ell * (instance.Z + 1):
        raise PreconditionViolated(f"n={n} < l(Z+1)={instance.ell * (instance.Z + 1)}")
    total = instance.total
    threshold = instance.threshold * total
    sets = instance.subsets

    def overlap(i: int, j: int) -> Fraction:
        return instance.measure(sets[i] & sets[j])

    selection = pivot_select(overlap, instance.Z, n, threshold)
    if selection is None:
        heavy = [(i, j) for i in range(n) for j in range(i + 1, n) if overlap(i, j) >= threshold]
        counts = [sum(1 for j in range(n) if j != i and overlap(i, j) >= threshold) for i in range(n)]
        logger.warning("no combinatorial selection for l=%s, Z=%d, n=%d", instance.ell, instance.Z, n)
        return ProofOfAbsence(heavy_pairs=heavy, partner_counts=counts, needed=instance.Z)

    pivot = selection[0]
    if len(set(selection)) != instance.Z + 1 or any(
        overlap(pivot, j) < threshold for j in selection[1:]
    ):
        raise PreconditionViolated("selection failed re-validation")
    return selection


# =============================================================================
# N_E against the discriminant
# =============================================================================


def ne_exponent() -> float:
    """1 / (e log 2) ~ 0.5307."""
    return 1 / (math.e * math.log(2))


class NEBound(BaseModel):
    """N_E with both exponent forms of its discriminant bound."""

    model_config = ConfigDict(frozen=True)

    N_E: int
    abs_discriminant: int
    sharp_bound: float = Field(..., description="|Delta|^(1/(e log 2))")
    stated_bound: float = Field(..., description="|Delta|^0.54")
    holds: bool
    margin: float = Field(..., description="log of stated bound minus log N_E")


def ne_bound_check(factorization) -> NEBound:
    """
    lcm of the exponents of |Delta_min| against |Delta_min|^0.54.

    Args:
        factorization: ((p, e), ...) of |Delta_min|

    Raises:
        PreconditionViolated: |Delta_min| < 2
    """
    factorization = tuple((int(p), int(e)) for p, e in factorization)
    abs_disc = math.prod(p**e for p, e in factorization)
    if abs_disc < 2:
        raise PreconditionViolated("|Delta_min| must be at least 2")
    N_E = math.lcm(*(e for _, e in factorization))
    log_disc = math.log(abs_disc)
    margin = NE_STATED_EXPONENT * log_disc - math.log(N_E)
    result = NEBound(
        N_E=N_E,
        abs_discriminant=abs_disc,
        sharp_bound=math.exp(ne_exponent() * log_disc),
        stated_bound=math.exp(NE_STATED_EXPONENT * log_disc),
        holds=margin >= 0,
        margin=margin,
    )
    if not result.holds:
        logger.error("N_E=%d exceeds |Delta|^0.54 for |Delta|=%d", N_E, abs_disc)
    return result
