"""
Canonical heights of rational points.

The canonical height is assembled as a sum of local heights, one per place:
the archimedean term from arch_analytic and exact non-archimedean terms from
the reduction type at each bad prime. A second, independent value comes from
the naive-height limit along the doubling ladder; the two are reported
together.

Normalisation: h(P) = 1/2 h(x(P)) and hat-h = sum of lambda_v, so the
generator of 37a1 has hat-h ~ 0.02556. `canonical_height_bsd` (twice that)
is the value most tables list.

Usage:
    from lang_heights.height_engine import canonical_height

    report = canonical_height(E, P)
    print(report.canonical_height, report.oracle_height)
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from .arch_analytic import PeriodData, arch_local_height, period_lattice
from .curve_core import (
    ORIGIN,
    LocalReductionData,
    RationalPoint,
    WeierstrassModel,
    global_minimal_model,
    prime_divisors,
    reduction_table,
    require_on_curve,
    scalar_mul,
    tate_reduce,
    valuation,
    _add,
)
from .errors import (
    NotSplitMultiplicative,
    PointIsOrigin,
    PrecisionExhausted,
    PreconditionViolated,
    TorsionShortCircuit,
)
from .utils import height_of_rational

logger = logging.getLogger(__name__)

FormulaCase = Literal["arch", "good", "additive_or_nonsplit_via_12P", "split_multiplicative"]

# Torsion over Q has order at most 12
MAZUR_BOUND = 12
TORSION_SEARCH_CAP = 10_000
TORSION_CUTOFF = 1e-8
MAX_DOUBLINGS = 12

# Good primes of larger x-denominators are summed without factoring
GOOD_PART_FACTOR_LIMIT = 10**40

# Constants of the explicit bound between 1/2 h(x) and the canonical height
NAIVE_LOWER_CONSTANT = 0.973
NAIVE_UPPER_CONSTANT = 1.07


# =============================================================================
# Report types
# =============================================================================


class LocalHeightTerm(BaseModel):
    """One place's contribution to the canonical height."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    place: int | Literal["infinity", "good_primes"]
    value: float
    value_over_log_p: Fraction | None = Field(
        None, description="Exact value in units of log p (finite places)"
    )
    formula_case: FormulaCase
    ord_v: int | None = Field(None, description="Component index (split places)")
    N_v: int = 0

    @property
    def floor(self) -> Fraction | None:
        """-N_v/24, the least value a finite place can take (in log p units)."""
        if self.place in ("infinity", "good_primes"):
            return None
        return Fraction(-self.N_v, 24)

    @property
    def meets_floor(self) -> bool:
        if self.floor is None:
            return self.place == "infinity" or self.value >= 0
        return self.value_over_log_p >= self.floor


class HeightReport(BaseModel):
    """Canonical height of a point with its local decomposition and the oracle value."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: RationalPoint
    canonical_height: float = Field(..., ge=0)
    canonical_height_bsd: float = Field(..., ge=0)
    local_sum: float
    terms: list[LocalHeightTerm]
    oracle_height: float | None
    oracle_doublings: int
    discrepancy: float | None
    tolerance: float
    torsion_order: int | None
    precision_bits: int

    @property
    def is_torsion(self) -> bool:
        return self.torsion_order is not None

    @property
    def agrees(self) -> bool:
        return self.discrepancy is None or self.discrepancy <= self.tolerance

    def to_record(self) -> dict:
        return {
            "point": str(self.point),
            "canonical_height": self.canonical_height,
            "canonical_height_bsd": self.canonical_height_bsd,
            "local_sum": self.local_sum,
            "oracle_height": self.oracle_height,
            "discrepancy": self.discrepancy,
            "tolerance": self.tolerance,
            "torsion_order": self.torsion_order,
            "places": ";".join(f"{t.place}:{t.formula_case}" for t in self.terms),
        }


def bernoulli2(t: Fraction) -> Fraction:
    """B2(T) = T^2 - T + 1/6."""
    return t * t - t + Fraction(1, 6)


# =============================================================================
# Division polynomials
# =============================================================================


def division_polynomial(model: WeierstrassModel, P: RationalPoint, n: int) -> Fraction:
    """
    psi_n evaluated at P, exactly.

    psi_2 = 2y + a1 x + a3; psi_n(P) = 0 iff [n]P = O.

    Raises:
        PointIsOrigin: P is O
        PreconditionViolated: n < 0, or P is 2-torsion and n >= 5 is odd
    """
    if P.is_origin:
        raise PointIsOrigin("division polynomials are evaluated at affine points")
    if n < 0:
        raise PreconditionViolated("n must be non-negative")
    psi2 = 2 * P.y + model.a1 * P.x + model.a3
    if psi2 == 0 and n >= 4:
        if n % 2 == 0:
            return Fraction(0)
        raise PreconditionViolated("odd psi_n at a 2-torsion point needs the x-polynomial form")
    return _psi(model, P.x, P.y, n)


@lru_cache(maxsize=1024)
def _psi(model: WeierstrassModel, x: Fraction, y: Fraction, n: int) -> Fraction:
    inv = model.invariants
    b2, b4, b6, b8 = inv.b2, inv.b4, inv.b6, inv.b8
    if n in (0, 1):
        return Fraction(n)
    psi2 = 2 * y + model.a1 * x + model.a3
    if n == 2:
        return psi2
    if n == 3:
        return 3 * x**4 + b2 * x**3 + 3 * b4 * x**2 + 3 * b6 * x + b8
    if n == 4:
        return psi2 * (
            2 * x**6
            + b2 * x**5
            + 5 * b4 * x**4
            + 10 * b6 * x**3
            + 10 * b8 * x**2
            + (b2 * b8 - b4 * b6) * x
            + (b4 * b8 - b6 * b6)
        )
    m = n // 2

    def psi(k: int) -> Fraction:
        return _psi(model, x, y, k)

    if n % 2:
        return psi(m + 2) * psi(m) ** 3 - psi(m - 1) * psi(m + 1) ** 3
    return psi(m) * (psi(m + 2) * psi(m - 1) ** 2 - psi(m - 2) * psi(m + 1) ** 2) / psi2


# =============================================================================
# Non-archimedean local heights
# =============================================================================


def _reduces_nonsingular(model: WeierstrassModel, P: RationalPoint, p: int) -> bool:
    """Does P reduce to a non-singular point of the model mod p (O included)?"""
    x, y = P.x, P.y
    if valuation(x, p) < 0:
        return True
    partial_x = model.a1 * y - 3 * x * x - 2 * model.a2 * x - model.a4
    partial_y = 2 * y + model.a1 * x + model.a3
    return valuation(partial_x, p) <= 0 or valuation(partial_y, p) <= 0


def _identity_component_value(model: WeierstrassModel, P: RationalPoint, p: int, N_v: int) -> Fraction:
    """1/2 max(0, -v(x)) + N_v/12 in units of log p."""
    if P.is_origin:
        raise PointIsOrigin("local height is infinite at O")
    return Fraction(max(0, -valuation(P.x, p)), 2) + Fraction(N_v, 12)


def _hensel_lift(f, df, root: int, p: int, K: int) -> int:
    modulus = p**K
    for _ in range(2 * K.bit_length() + 4):
        value = f(root) % modulus
        if value == 0:
            return root % modulus
        root = (root - value * pow(df(root), -1, modulus)) % modulus
    if f(root) % modulus:
        raise PreconditionViolated(f"Hensel lift failed at p={p}")
    return root


def _critical_point(model: WeierstrassModel, p: int, K: int) -> tuple[int, int]:
    """
    p-adic point (x0, y0) mod p^K where both partials of the equation vanish.

    It lifts the node of the reduction; translating it to (0, 0) leaves
    y^2 + a1 xy - a2' x^2 = x^3 + a6' with v(a6') = N_v.
    """
    a1, a2, a3, a4, _ = model.coefficients

    def fx(x, y):
        return a1 * y - 3 * x * x - 2 * a2 * x - a4

    def fy(x, y):
        return 2 * y + a1 * x + a3

    start = [
        (x, y)
        for x in range(p)
        for y in range(p)
        if fx(x, y) % p == 0 and fy(x, y) % p == 0 and model.equation_defect(x, y) % p == 0
    ] if p < 50 else None
    if start is None:
        inv = model.invariants
        r = (-(inv.c6 + inv.b2 * inv.c4) * pow(12 * inv.c4, -1, p)) % p
        start = [(r, (-(a1 * r + a3) * pow(2, -1, p)) % p)]
    if not start:
        raise NotSplitMultiplicative(f"no singular point mod {p}")
    x, y = start[0]
    modulus = p**K
    for _ in range(2 * K.bit_length() + 4):
        gx, gy = fx(x, y) % modulus, fy(x, y) % modulus
        if gx == 0 and gy == 0:
            return x, y
        # Jacobian [[-6x - 2a2, a1], [a1, 2]], determinant -(12x + b2), a unit at a node
        det = (-6 * x - 2 * a2) * 2 - a1 * a1
        inv_det = pow(det, -1, modulus)
        dx = (2 * gx - a1 * gy) * inv_det
        dy = ((-6 * x - 2 * a2) * gy - a1 * gx) * inv_det
        x, y = (x - dx) % modulus, (y - dy) % modulus
    raise PreconditionViolated(f"critical point did not lift at p={p}")


def _tangent_slopes(a1: int, a2: int, p: int, K: int) -> list[int]:
    """Roots of s^2 + a1 s - a2 mod p^K, ordered by residue mod p."""
    residues = [s for s in range(p) if (s * s + a1 * s - a2) % p == 0] if p < 50 else None
    if residues is None:
        from sympy.ntheory import sqrt_mod

        disc = (a1 * a1 + 4 * a2) % p
        root = sqrt_mod(disc, p)
        if root is None:
            residues = []
        else:
            half = pow(2, -1, p)
            residues = sorted({((-a1 + root) * half) % p, ((-a1 - root) * half) % p})
    if len(residues) != 2:
        raise NotSplitMultiplicative(f"tangent cone at p={p} is not split")
    return [
        _hensel_lift(lambda s: s * s + a1 * s - a2, lambda s: 2 * s + a1, s0, p, K)
        for s0 in sorted(residues)
    ]


def tate_parameter_order(
    model: WeierstrassModel,
    P: RationalPoint,
    p: int,
    reduction: LocalReductionData | None = None,
) -> int:
    """
    Component of the special fibre met by P at a split multiplicative prime.

    The node is lifted p-adically and the two tangent lines l1, l2 through it
    are fixed once per curve. A point reducing to the node has
    m = min(v(l1(P)), v(l2(P))) = min(i, N_v - i), and the side with the
    smaller valuation tells i from N_v - i. The result is a homomorphism onto
    Z/N_v, so ord_v([2]P) = 2 ord_v(P) mod N_v.

    Args:
        model: Model minimal at p
        P: Affine point
        p: Prime of split multiplicative reduction

    Returns:
        ord_v(P) in [0, N_v)

    Raises:
        NotSplitMultiplicative: reduction at p is not split multiplicative
    """
    reduction = reduction or tate_reduce(model, p)
    if not reduction.is_split:
        raise NotSplitMultiplicative(f"{model} has {reduction.kodaira_symbol} ({reduction.reduction_kind}) at {p}")
    if not reduction.local_minimal:
        raise PreconditionViolated(f"{model} is not minimal at {p}")
    if P.is_origin or _reduces_nonsingular(model, P, p):
        return 0
    N = reduction.N_v
    K = 2 * N + 4
    x0, y0 = _critical_point(model, p, K)
    slopes = _tangent_slopes(model.a1, model.a2 + 3 * x0, p, K)
    dx, dy = P.x - x0, P.y - y0
    v1, v2 = (min(valuation(dy - s * dx, p), K) for s in slopes)
    m = min(v1, v2)
    ord_v = m if v1 <= v2 else N - m
    logger.debug("ord_%d(%s) = %d (v(l1)=%d, v(l2)=%d)", p, P, ord_v, v1, v2)
    return ord_v % N


def _psi_fallback(model: WeierstrassModel, P: RationalPoint, reduction: LocalReductionData) -> Fraction:
    """Valuation recipe in v(psi_2), v(psi_3) for a singular point whose [12]-multiple is O."""
    p, N = reduction.p, reduction.N_v
    A = Fraction(valuation(division_polynomial(model, P, 2), p))
    if reduction.is_multiplicative:
        M = min(A, Fraction(N, 2))
        L = M * (M - N) / N
    else:
        B = Fraction(valuation(division_polynomial(model, P, 3), p))
        L = -2 * A / 3 if B >= 3 * A else -B / 4
    return L / 2 + Fraction(N, 12)


def nonarch_local_height(
    model: WeierstrassModel, P: RationalPoint, reduction: LocalReductionData
) -> LocalHeightTerm:
    """
    Canonical local height at a finite prime.

    good / non-singular reduction: 1/2 max(0, -v(x)) + N_v/12
    split multiplicative: the same plus 1/2 B2(i/N_v) N_v with i = ord_v(P)
    additive or non-split: lambda([12]P) lands on the identity component, and
        lambda(P) = (lambda([12]P) - v(psi_12(P)) + 143 N_v/12) / 144

    All values in units of log p before the final float.

    Raises:
        PointIsOrigin: P is O
    """
    if P.is_origin:
        raise PointIsOrigin("local height is infinite at O")
    if not reduction.local_minimal:
        raise PreconditionViolated(f"{model} is not minimal at {reduction.p}")
    p, N = reduction.p, reduction.N_v
    ord_v = None

    if reduction.reduction_kind == "good" or _reduces_nonsingular(model, P, p):
        case: FormulaCase = "good" if reduction.reduction_kind == "good" else (
            "split_multiplicative" if reduction.is_split else "additive_or_nonsplit_via_12P"
        )
        value = _identity_component_value(model, P, p, N)
        if reduction.is_split:
            ord_v = 0
    elif reduction.is_split:
        case = "split_multiplicative"
        ord_v = tate_parameter_order(model, P, p, reduction)
        value = Fraction(max(0, -valuation(P.x, p)), 2) + bernoulli2(Fraction(ord_v, N)) * N / 2
    else:
        case = "additive_or_nonsplit_via_12P"
        Q = scalar_mul(model, 12, P)
        if Q.is_origin:
            value = _psi_fallback(model, P, reduction)
        else:
            if not _reduces_nonsingular(model, Q, p):
                raise PrecisionExhausted(f"[12]P is still singular mod {p}")
            psi12 = division_polynomial(model, P, 12)
            value = (_identity_component_value(model, Q, p, N) - valuation(psi12, p) + Fraction(143 * N, 12)) / 144

    term = LocalHeightTerm(
        place=p,
        value=float(value) * math.log(p),
        value_over_log_p=value,
        formula_case=case,
        ord_v=ord_v,
        N_v=N,
    )
    if not term.meets_floor:
        logger.error("local height %s at %d is below -N_v/24 = %s", value, p, term.floor)
    return term


# =============================================================================
# Torsion and the naive-height oracle
# =============================================================================


def torsion_order(model: WeierstrassModel, P: RationalPoint, cap: int = MAZUR_BOUND) -> int | None:
    """
    Exact order of P, or None when no n <= cap kills it.

    Over Q the cap 12 is sharp; larger caps (up to 10^4) serve other bounds.
    """
    require_on_curve(model, P)
    if not 1 <= cap <= TORSION_SEARCH_CAP:
        raise PreconditionViolated(f"torsion search cap must lie in [1, {TORSION_SEARCH_CAP}]")
    multiple = P
    for n in range(1, cap + 1):
        if multiple.is_origin:
            return n
        multiple = _add(model, multiple, P)
    return None


def _double_x(inv, X: int, Z: int) -> tuple[int, int]:
    b2, b4, b6, b8 = inv.b2, inv.b4, inv.b6, inv.b8
    X2, Z2 = X * X, Z * Z
    num = X2 * X2 - b4 * X2 * Z2 - 2 * b6 * X * Z2 * Z - b8 * Z2 * Z2
    den = 4 * X2 * X * Z + b2 * X2 * Z2 + 2 * b4 * X * Z2 * Z + b6 * Z2 * Z2
    g = math.gcd(num, den)
    if g > 1:
        num, den = num // g, den // g
    if den < 0:
        num, den = -num, -den
    return num, den


def naive_height_oracle(model: WeierstrassModel, P: RationalPoint, doublings: int = 8) -> float:
    """
    h([2^k]P) / 4^k with h = 1/2 log max(|num x|, |den x|).

    Doubles the x-coordinate alone on coprime integer pairs.

    Raises:
        TorsionShortCircuit: an intermediate multiple is O
        PreconditionViolated: doublings outside [0, 12]
    """
    if not 0 <= doublings <= MAX_DOUBLINGS:
        raise PreconditionViolated(f"doublings must lie in [0, {MAX_DOUBLINGS}]")
    if P.is_origin:
        return 0.0
    require_on_curve(model, P)
    inv = model.invariants
    X, Z = P.x.numerator, P.x.denominator
    for k in range(1, doublings + 1):
        X, Z = _double_x(inv, X, Z)
        if Z == 0:
            raise TorsionShortCircuit(k)
    return height_of_rational(Fraction(X, Z)) / 2 / 4**doublings


def oracle_tolerance(model: WeierstrassModel, doublings: int) -> float:
    """
    C / 4^k, with C bounding |hat-h - 1/2 h(x)| on the model.

    -h(j)/8 - h(Delta)/12 - 0.973 <= hat-h - 1/2 h(x) <= h(j)/12 + h(Delta)/12 + 1.07
    """
    inv = model.invariants
    h_j = height_of_rational(inv.j)
    h_disc = math.log(abs(inv.discriminant))
    lower = h_j / 8 + h_disc / 12 + NAIVE_LOWER_CONSTANT
    upper = h_j / 12 + h_disc / 12 + NAIVE_UPPER_CONSTANT
    return max(lower, upper) / 4**doublings


# =============================================================================
# Canonical height
# =============================================================================


def local_height_terms(
    model: WeierstrassModel,
    P: RationalPoint,
    periods: PeriodData,
    reductions: list[LocalReductionData] | None = None,
) -> list[LocalHeightTerm]:
    """
    Local terms of P on a globally minimal model, archimedean first.

    Primes where x(P) has a denominator but reduction is good also contribute,
    one term each; above GOOD_PART_FACTOR_LIMIT their sum 1/2 log(good part)
    is reported as a single "good_primes" term instead.
    """
    reductions = reductions if reductions is not None else reduction_table(model)
    arch = arch_local_height(model, P, periods)
    terms = [LocalHeightTerm(place="infinity", value=float(arch), formula_case="arch")]
    for reduction in reductions:
        terms.append(nonarch_local_height(model, P, reduction))

    good_part = P.x.denominator
    for r in reductions:
        while good_part % r.p == 0:
            good_part //= r.p
    if 1 < good_part <= GOOD_PART_FACTOR_LIMIT:
        for p in prime_divisors(good_part):
            terms.append(nonarch_local_height(model, P, tate_reduce(model, p)))
    elif good_part > 1:
        terms.append(
            LocalHeightTerm(place="good_primes", value=math.log(good_part) / 2, formula_case="good")
        )

    def order(t: LocalHeightTerm):
        return {"infinity": (0, 0), "good_primes": (2, 0)}.get(t.place, (1, t.place))

    return sorted(terms, key=order)


def canonical_height(
    model: WeierstrassModel,
    P: RationalPoint,
    precision_bits: int = 128,
    doublings: int = 8,
    periods: PeriodData | None = None,
) -> HeightReport:
    """
    Canonical height of P as a sum of local heights, with the oracle alongside.

    A point on a non-minimal model is carried to the global minimal model first.

    Args:
        model: Any integral model
        P: Point on the model
        precision_bits: Working precision of the archimedean term
        doublings: Steps of the naive-height oracle
        periods: Precomputed lattice of the minimal model

    Returns:
        HeightReport

    Raises:
        PrecisionExhausted: the archimedean evaluation failed its self-check
    """
    require_on_curve(model, P)
    minimal = global_minimal_model(model)
    if minimal.model != model:
        logger.info("moving %s from %s to minimal model %s", P, model, minimal.model)
        P = minimal.transform.map_point(P)
        model = minimal.model

    tolerance = oracle_tolerance(model, doublings)
    order = torsion_order(model, P)
    if P.is_origin:
        return HeightReport(
            point=ORIGIN,
            canonical_height=0.0,
            canonical_height_bsd=0.0,
            local_sum=0.0,
            terms=[],
            oracle_height=0.0,
            oracle_doublings=doublings,
            discrepancy=0.0,
            tolerance=tolerance,
            torsion_order=1,
            precision_bits=precision_bits,
        )

    periods = periods or period_lattice(model, precision_bits)
    terms = local_height_terms(model, P, periods)
    local_sum = math.fsum(t.value for t in terms)

    try:
        oracle = naive_height_oracle(model, P, doublings)
    except TorsionShortCircuit as e:
        logger.debug("oracle short-circuited: %s", e)
        oracle = 0.0

    if order is not None:
        height = 0.0
        if abs(local_sum) > TORSION_CUTOFF:
            logger.warning("torsion point %s has local sum %.3e", P, local_sum)
    else:
        if local_sum < TORSION_CUTOFF:
            logger.warning("point %s of infinite order has height %.3e below cutoff", P, local_sum)
        height = max(local_sum, 0.0)

    discrepancy = abs(height - oracle)
    if discrepancy > tolerance:
        logger.error(
            "local sum %.12f and oracle %.12f differ by %.3e > %.3e for %s",
            height,
            oracle,
            discrepancy,
            tolerance,
            P,
        )
    return HeightReport(
        point=P,
        canonical_height=height,
        canonical_height_bsd=2 * height,
        local_sum=local_sum,
        terms=terms,
        oracle_height=oracle,
        oracle_doublings=doublings,
        discrepancy=discrepancy,
        tolerance=tolerance,
        torsion_order=order,
        precision_bits=precision_bits,
    )
