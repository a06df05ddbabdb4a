"""
Numeric budget of the transcendence construction.

Parameter choices, the zeros-lemma conditions, the four terms of the slope
inequality with the t1..t5 ratios they reduce to, and an end-to-end
recomputation of every printed constant from the reduction branches through
the semi-stable theorem to the final constants.

All parameter arithmetic is exact-integer; only the final divisions are real.

Usage:
    from lang_heights.slope_budget import choose_parameters, budget_terms

    params = choose_parameters(d=1, N_E=1, logNDelta=7e7, h_F=1.75e7)
    budget = budget_terms(params)
    print(budget.slack, budget.violations)
"""

import logging
import math
from fractions import Fraction
from typing import Literal

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import H0Violated, PreconditionViolated
from .lang_verifier import (
    TheoremConstants,
    branch_bounds,
    c0,
    grid_size,
    pigeonhole_min_n,
    torsion_coefficient,
)

logger = logging.getLogger(__name__)

EPSILON = Fraction(1, 2)
C1 = Fraction(2)

# Upper bounds printed for t1..t5
T_BOUNDS = {"t1": 0.1039, "t2": 0.0516, "t3": 0.0516, "t4": 0.104, "t5": 0.000002}

# Worst case of h_F / log|N Delta| in the hard branch (4 h_F < log|N Delta|)
WORST_FALTINGS_RATIO = Fraction(1, 4)

NONARCH_DIVISOR = 1650
BIG_J_TORSION = 10207584
RELATIVE_ROUNDING = 1e-3


def h0_floor(d: int) -> float:
    """10^8 d log(2d)."""
    return 1e8 * d * math.log(2 * d)


# =============================================================================
# Parameters
# =============================================================================


class ConstructionParams(BaseModel):
    """Integer parameters of the construction and the curve data they depend on."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1)
    N_E: int = Field(..., ge=1)
    logNDelta: float
    h_F: float
    D: int
    M: int
    Z: int
    T0: int
    T1: int
    n: int = Field(..., description="floor(2880(Z+1) + 400 d log(2d))")
    N: int = Field(..., description="46^2 n + 1")
    m_max: int = Field(..., description="24(N - 1)")
    binding_n_constraint: Literal["2880(Z+1)", "pigeonhole"]
    h0_holds: bool

    @model_validator(mode="after")
    def _divisibility(self) -> "ConstructionParams":
        if self.D % (4 * self.N_E):
            raise ValueError(f"4 N_E = {4 * self.N_E} must divide D = {self.D}")
        return self


def choose_parameters(
    d: int,
    N_E: int,
    logNDelta: float,
    h_F: float,
    enforce_h0: bool = True,
    Z: int | None = None,
) -> ConstructionParams:
    """
    D = 4000 N_E d, M = floor(sqrt D) + 1, Z = 1.6e7 d, T1 = N_E^2 d, T0 = 8000 N_E^2 d.

    Args:
        d: Degree
        N_E: lcm of the multiplicative exponents
        logNDelta: log|N Delta|
        h_F: Faltings height
        enforce_h0: Raise when log|N Delta| < 10^8 d log(2d)
        Z: Override of the Z choice (e.g. the least Z satisfying the zeros lemma)

    Raises:
        H0Violated: log|N Delta| below the floor and enforce_h0 is set

    Example:
        >>> choose_parameters(1, 1, 7e7, 0.0).M
        64
    """
    if d < 1 or N_E < 1:
        raise PreconditionViolated("d and N_E must be positive")
    floor = h0_floor(d)
    h0_holds = logNDelta >= floor
    if not h0_holds:
        message = f"log|N Delta| = {logNDelta:.6g} < 10^8 d log(2d) = {floor:.6g}"
        if enforce_h0:
            raise H0Violated(message)
        logger.warning("%s; continuing without the floor", message)

    D = 4000 * N_E * d
    Z = 16_000_000 * d if Z is None else Z
    n_from_z = 2880 * (Z + 1)
    n_pigeonhole = pigeonhole_min_n(d, EPSILON)
    n = math.floor(n_from_z + 400 * d * math.log(2 * d))
    N = grid_size(EPSILON) ** 2 * n + 1
    return ConstructionParams(
        d=d,
        N_E=N_E,
        logNDelta=logNDelta,
        h_F=h_F,
        D=D,
        M=math.isqrt(D) + 1,
        Z=Z,
        T0=8000 * N_E * N_E * d,
        T1=N_E * N_E * d,
        n=n,
        N=N,
        m_max=24 * (N - 1),
        binding_n_constraint="2880(Z+1)" if n_from_z >= n_pigeonhole else "pigeonhole",
        h0_holds=h0_holds,
    )


# =============================================================================
# Zeros lemma
# =============================================================================


class ZerosLemmaCheck(BaseModel):
    """M^2 > D1 and sum T_j > D1 + M^2 D2, with both sides of each."""

    model_config = ConfigDict(frozen=True)

    M_squared: int
    D1: int
    sum_T: int
    rhs: int = Field(..., description="D1 + M^2 D2")
    first_ok: bool
    second_ok: bool

    @property
    def ok(self) -> bool:
        return self.first_ok and self.second_ok

    def __bool__(self) -> bool:
        return self.ok


def zeros_lemma_ok(D1: int, D2: int, M: int, T_list) -> ZerosLemmaCheck:
    """
    Injectivity conditions of the evaluation map.

    Example:
        >>> bool(zeros_lemma_ok(1, 1, 2, [6]))
        True
    """
    T_list = [int(t) for t in T_list]
    if min(D1, D2, M, *T_list) < 1:
        raise PreconditionViolated("zeros-lemma inputs must be positive integers")
    sum_T = sum(T_list)
    rhs = D1 + M * M * D2
    return ZerosLemmaCheck(
        M_squared=M * M,
        D1=D1,
        sum_T=sum_T,
        rhs=rhs,
        first_ok=M * M > D1,
        second_ok=sum_T > rhs,
    )


def params_zeros_check(params: ConstructionParams) -> ZerosLemmaCheck:
    """The construction's instance: T0 + Z T1 > D (1 + M^2)."""
    return zeros_lemma_ok(params.D, params.D, params.M, [params.T0, params.Z * params.T1])


def minimal_zeros_z(params: ConstructionParams) -> int:
    """Least Z with T0 + Z T1 > D (1 + M^2)."""
    gap = params.D * (1 + params.M**2) - params.T0
    return max(0, gap // params.T1 + 1)


# =============================================================================
# Slope inequality
# =============================================================================


class SlopeBudget(BaseModel):
    """The four slope-inequality terms and the ratios t1..t5."""

    model_config = ConfigDict(frozen=True)

    term_A: float = Field(..., description="-D^2 h_F + (D^2/2) log(D/2pi)")
    term_B: float = Field(..., description="Slope term without its hat-h part")
    term_B_height_coefficient: float = Field(..., description="D^3 (1+M^2) m_max^2")
    term_C: float = Field(..., description="Archimedean term with the factorial bound")
    term_C_exact: float = Field(..., description="Archimedean term with the exact factorial ratio")
    term_D: float
    t1: float
    t2: float
    t3: float
    t4: float
    t5: float
    slack: float = Field(..., description="1 - t1 - ... - t5")
    zeros: ZerosLemmaCheck

    @property
    def zeros_ok(self) -> bool:
        return self.zeros.ok

    @property
    def violations(self) -> dict[str, tuple[float, float]]:
        """t_i above its printed bound, as (computed, bound)."""
        found = {}
        for name, bound in T_BOUNDS.items():
            value = getattr(self, name)
            if value >= bound:
                found[name] = (value, bound)
        return found


def factorial_ratio_log(params: ConstructionParams) -> float:
    """1/2 log((X+2)!(X+1)! / ((X+2-D^2)!(X+1-D^2)!)) with X = D(1+M^2), by log-gamma."""
    X, D2 = params.D * (1 + params.M**2), params.D**2
    return 0.5 * (
        math.lgamma(X + 3) + math.lgamma(X + 2) - math.lgamma(X + 3 - D2) - math.lgamma(X + 2 - D2)
    )


def budget_terms(params: ConstructionParams) -> SlopeBudget:
    """
    Evaluate (A), (B), (C), (D) and t1..t5 for a parameter set.

    The t-ratios are the slope inequality divided by its non-archimedean
    term (T0+1)(D^2-T0) log|N Delta| / (1650 d).
    """
    d, D, M, T0, T1 = params.d, params.D, params.M, params.T0, params.T1
    h_F, log_delta = params.h_F, params.logNDelta
    D2 = D * D
    X = D * (1 + M * M)
    bracket = Fraction(T0 * (T0 + 1), 2) + T1 * (D2 - T0 + T1 - 1)
    log_root = 0.5 * math.log(X / math.pi)

    term_A = -D2 * h_F + D2 / 2 * math.log(D / (2 * math.pi))
    term_B = float(bracket) * (h_F + log_root)
    arch_head = math.pi * D**4 / math.sqrt(3) + D2 * math.log(D / math.pi)
    term_C = arch_head + D2 * math.log(X)
    term_C_exact = arch_head + factorial_ratio_log(params)
    term_D = -(T0 + 1) * (D2 - T0) / (NONARCH_DIVISOR * d) * log_delta

    scale = NONARCH_DIVISOR * d / ((T0 + 1) * (D2 - T0))
    ratio = h_F / log_delta
    t1 = float(Fraction(825 * T0 * (T0 + 1) * d, (T0 + 1) * (D2 - T0))) * ratio
    t2 = float(Fraction(NONARCH_DIVISOR * D2 * d, (T0 + 1) * (D2 - T0))) * ratio
    t3 = float(Fraction(NONARCH_DIVISOR * T1 * (D2 - T0 + T1 - 1) * d, (T0 + 1) * (D2 - T0))) * ratio
    t4 = NONARCH_DIVISOR * math.pi * D**4 / ((T0 + 1) * (D2 - T0) * log_delta)
    t5 = (
        scale
        / log_delta
        * (
            float(Fraction((T0 + 1) ** 2, 2) + T1 * (D2 - T0 + T1 - 1)) * log_root
            + D2 * math.log(X)
            + D2 / 2 * math.log(D / (2 * math.pi))
            + D2 * math.log(D / math.pi)
        )
    )
    budget = SlopeBudget(
        term_A=term_A,
        term_B=term_B,
        term_B_height_coefficient=float(D**3 * (1 + M * M) * params.m_max**2),
        term_C=term_C,
        term_C_exact=term_C_exact,
        term_D=term_D,
        t1=t1,
        t2=t2,
        t3=t3,
        t4=t4,
        t5=t5,
        slack=1 - (t1 + t2 + t3 + t4 + t5),
        zeros=params_zeros_check(params),
    )
    for name, (value, bound) in budget.violations.items():
        logger.warning("%s = %.6g exceeds its printed bound %.6g (d=%d, N_E=%d)", name, value, bound, d, params.N_E)
    if not budget.zeros_ok:
        logger.warning(
            "zeros lemma fails: T0 + Z T1 = %d vs D(1+M^2) = %d; least Z is %d",
            budget.zeros.sum_T,
            budget.zeros.rhs,
            minimal_zeros_z(params),
        )
    return budget


class HeightLowerBounds(BaseModel):
    """Lower bounds for hat-h once the slack reaches 1/2."""

    model_config = ConfigDict(frozen=True)

    disc_coefficient: float = Field(..., description="(T0+1)(D^2-T0) / (3300 d D^3 (1+M^2) m_max^2)")
    faltings_coefficient: float = Field(..., description="(T0+1)(D^2-T0) / (825 d D^3 (1+M^2) m_max^2)")
    disc_bound: float
    faltings_bound: float


def bingo_height_bounds(params: ConstructionParams) -> HeightLowerBounds:
    """
    The two lower bounds the slope inequality gives when 1 - sum t_i >= 1/2.

    The h_F form uses h_F < log|N Delta| / 4.
    """
    d, D, M, T0 = params.d, params.D, params.M, params.T0
    core = Fraction((T0 + 1) * (D * D - T0), d * D**3 * (1 + M * M) * params.m_max**2)
    disc_c = float(core / 3300)
    falt_c = float(core / 825)
    return HeightLowerBounds(
        disc_coefficient=disc_c,
        faltings_coefficient=falt_c,
        disc_bound=disc_c * params.logNDelta,
        faltings_bound=falt_c * params.h_F,
    )


# =============================================================================
# Audits
# =============================================================================


def t_bound_audit(ds=range(1, 6), nes=range(1, 11)) -> pd.DataFrame:
    """
    t1..t5 on a (d, N_E) grid at the H0 floor with h_F / log|N Delta| = 1/4.

    Returns:
        One row per (d, N_E) with the t-values, the slack, the zeros-lemma
        verdict and the names of the violated bounds
    """
    rows = []
    for d in ds:
        log_delta = h0_floor(d)
        for N_E in nes:
            params = choose_parameters(d, N_E, log_delta, float(WORST_FALTINGS_RATIO) * log_delta)
            budget = budget_terms(params)
            row = {"d": d, "N_E": N_E}
            row.update({name: getattr(budget, name) for name in T_BOUNDS})
            row["slack"] = budget.slack
            row["zeros_ok"] = budget.zeros_ok
            row["minimal_Z"] = minimal_zeros_z(params)
            row["violations"] = ",".join(sorted(budget.violations))
            rows.append(row)
    return pd.DataFrame(rows)


Direction = Literal["equal", "upper", "lower"]
Status = Literal["match", "stated_weaker", "stated_stronger"]


class ConstantRow(BaseModel):
    """A printed constant next to its recomputation."""

    model_config = ConfigDict(frozen=True)

    name: str
    stated: float
    recomputed: float
    direction: Direction = Field(
        ...,
        description="upper: stated must be >= recomputed; lower: stated must be <= recomputed",
    )
    status: Status
    exact: bool | None = Field(None, description="Result of an exact integer comparison, when one applies")

    @property
    def consistent(self) -> bool:
        return self.status != "stated_stronger"

    @property
    def relative_error(self) -> float:
        return abs(self.stated - self.recomputed) / max(abs(self.recomputed), 1e-300)


def _row(
    name: str, stated: float, recomputed: float, direction: Direction, exact: bool | None = None
) -> ConstantRow:
    if exact is None:
        exact_or_close = abs(stated - recomputed) <= RELATIVE_ROUNDING * max(abs(stated), abs(recomputed))
    else:
        exact_or_close = exact
    if exact_or_close:
        status: Status = "match"
    elif direction == "equal":
        status = "stated_stronger"
    elif (direction == "upper") == (stated > recomputed):
        status = "stated_weaker"
    else:
        status = "stated_stronger"
    return ConstantRow(
        name=name, stated=stated, recomputed=recomputed, direction=direction, status=status, exact=exact
    )


def _n_expression() -> tuple[int, int, int]:
    """Recomputed (constant, d, d log 2d) coefficients of N = 46^2 n + 1."""
    K2 = grid_size(EPSILON) ** 2
    return (K2 * 2880 + 1, K2 * 2880 * 16_000_000, K2 * 400)


def _semi_inner(d: int, const: float = 6094080, lin: float = 9.755e13, log_coeff: float = 18400) -> float:
    return const + lin * d + log_coeff * d * math.log(2 * d)


def semi_constants(d: int) -> dict[str, float]:
    """Stated constants of the semi-stable theorem for degree d."""
    L = d * math.log(2 * d)
    inner = _semi_inner(d)
    return {
        "B_tilde": 1e16 * L**1.54,
        "C_tilde": 1 / (1e15 * d * d * inner**2),
        "C_tilde_prime": 1 / (1e11 * d * d * inner**2.08),
    }


def reproduce_constants(d: int = 1) -> list[ConstantRow]:
    """
    Recompute every printed constant from the formulas it is derived from.

    Branch constants come from the reduction summary at eps = 1/2, C1 = 2,
    the hard-branch n and N from Z = 1.6e7 d, case II from the slope
    inequality at N_E = 1, and the final constants from the semi-stable ones
    at degree 24d.
    """
    if d < 1:
        raise PreconditionViolated("d must be positive")
    L = math.log(2 * d)
    dL = d * L
    rows: list[ConstantRow] = []

    big = branch_bounds("big_j", d, EPSILON, C1)
    # integer coefficient, compared exactly rather than to rounding
    coefficient = torsion_coefficient(EPSILON)
    rows.append(
        _row(
            "big_j torsion",
            BIG_J_TORSION * dL,
            big.torsion_bound,
            "upper",
            exact=coefficient == BIG_J_TORSION,
        )
    )
    rows.append(_row("big_j height denominator", 5.502e14 * d**3 * L**2, 1 / big.disc_coefficient, "upper"))
    rows.append(
        _row("big_j h_F denominator", 2.063e14 * d**3 * L**2 * (1 + 4 * d), 1 / big.faltings_coefficient, "upper")
    )

    small = branch_bounds("small_j_small_disc", d, EPSILON, C1)
    rows.append(_row("small_disc torsion", 1e12 * dL**1.54, small.torsion_bound, "upper"))
    rows.append(_row("small_disc height denominator", 3.18e23 * dL**3.08, 1 / small.disc_coefficient, "upper"))
    stated_small_falt = 7.818e19 * (1 + 4 * d) * dL**3.08 / float(1 - EPSILON) ** 3
    rows.append(_row("small_disc h_F denominator", stated_small_falt, 1 / small.faltings_coefficient, "upper"))
    rows.append(_row("small_disc threshold C0", 1e8 * dL, c0(d), "equal"))

    Z = 16_000_000 * d
    n = math.floor(2880 * (Z + 1) + 400 * dL)
    N = grid_size(EPSILON) ** 2 * n + 1
    rows.append(_row("n", 2880 + 4.61e10 * d + 400 * dL, n, "upper"))
    const, lin, log_coeff = _n_expression()
    rows.append(_row("N constant term", 6094080, const, "upper"))
    rows.append(_row("N coefficient of d", 9.755e13, lin, "upper"))
    rows.append(_row("N coefficient of d log(2d)", 18400, log_coeff, "upper"))
    rows.append(_row("12N constant term", 7312896, 12 * const, "upper"))
    rows.append(_row("12N coefficient of d", 1.18e15, 12 * lin, "upper"))
    rows.append(_row("12N coefficient of d log(2d)", 220800, 12 * log_coeff, "upper"))

    case_one = branch_bounds("small_j_big_disc_case_I", d, EPSILON, C1, n, N)
    rows.append(_row("case I height denominator", 62208 * d * (N + 1) ** 2, 1 / case_one.disc_coefficient, "upper"))
    rows.append(
        _row("case I h_F denominator", 20736 * (1 + 2 * d) * (N + 1) ** 2, 1 / case_one.faltings_coefficient, "upper")
    )

    params = choose_parameters(d, 1, h0_floor(d), 0.0)
    bingo = bingo_height_bounds(params)
    # printed in terms of N^2; the recomputation carries m_max^2 = (24(N-1))^2
    rows.append(_row("case II height denominator", 4.361e11 * d * d * N**2, 1 / bingo.disc_coefficient, "upper"))
    rows.append(_row("case II h_F denominator", 1.09e11 * d * d * N**2, 1 / bingo.faltings_coefficient, "upper"))

    semi = semi_constants(d)
    disc_coefficients = [
        big.disc_coefficient,
        small.disc_coefficient,
        1 / (62208 * d * _semi_inner(d, 6094081) ** 2),
        1 / (4.361e11 * d * d * _semi_inner(d) ** 2),
    ]
    falt_coefficients = [
        big.faltings_coefficient,
        small.faltings_coefficient,
        1 / (20736 * (1 + 2 * d) * _semi_inner(d, 6094081) ** 2),
        1 / (1.09e11 * d * d * _semi_inner(d) ** 2),
    ]
    torsion_bounds = [big.torsion_bound, 1e12 * dL**1.54, 12 * _semi_inner(d)]
    rows.append(_row("semi-stable torsion B~_d", semi["B_tilde"], max(torsion_bounds), "upper"))
    rows.append(_row("semi-stable C~_d", semi["C_tilde"], min(disc_coefficients), "lower"))
    rows.append(_row("semi-stable C~'_d", semi["C_tilde_prime"], min(falt_coefficients), "lower"))

    final = TheoremConstants.for_degree(d)
    lifted = semi_constants(24 * d)
    nonsemi = _nonsemistable_disc_coefficient(d)
    rows.append(_row("final torsion B_d", final.B_d, max(semi["B_tilde"], 48 * d), "upper"))
    rows.append(_row("final C_d", final.C_d, min(2 / 3 * lifted["C_tilde"], nonsemi), "lower"))
    rows.append(_row("final C_d (instability bound)", 1 / (1.49e16 * d**3 * L**2), nonsemi, "lower"))
    rows.append(_row("final C'_d", final.C_d_prime, lifted["C_tilde_prime"] / 2, "lower"))

    for row in rows:
        if not row.consistent:
            logger.warning(
                "constant %s: printed %.6g, recomputed %.6g (%s)", row.name, row.stated, row.recomputed, row.status
            )
    return rows


def _nonsemistable_disc_coefficient(d: int) -> float:
    """
    1 / (72 d) * 2n(n-1) / (144 (n+1)^2 (N+1)^2) with n = ceil(400 d log 2d), N = 46^2 n + 1.

    The bound obtained when the unstable part of the discriminant dominates.
    """
    n = math.ceil(400 * d * math.log(2 * d))
    N = grid_size(EPSILON) ** 2 * n + 1
    return 2 * n * (n - 1) / (144 * (n + 1) ** 2 * (N + 1) ** 2) / (72 * d)


def constants_table(d: int = 1) -> pd.DataFrame:
    """reproduce_constants as a DataFrame."""
    return pd.DataFrame(
        [{**row.model_dump(), "consistent": row.consistent, "relative_error": row.relative_error} for row in reproduce_constants(d)]
    )
