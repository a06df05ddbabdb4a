"""
Archimedean analytics of an elliptic curve over Q.

Period lattice by the AGM, tau in the fundamental domain, q-expansions of the
Weierstrass functions and of the modular discriminant, the elliptic logarithm,
the archimedean canonical local height, the Faltings height, and the three
archimedean inequalities (small torus coordinates, configurations of distinct
points, j versus Im tau).

Every evaluation runs in its own mpmath context whose precision is carried by
the PeriodData it produced; no global mpmath state is touched.

Usage:
    from lang_heights.arch_analytic import period_lattice, arch_local_height

    periods = period_lattice(E, precision_bits=128)
    lam = arch_local_height(E, P, periods)
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .curve_core import (
    RationalPoint,
    WeierstrassModel,
    group_add,
    group_sub,
    is_globally_minimal,
)
from .errors import (
    DuplicatePoints,
    NotMinimalModel,
    PointIsOrigin,
    PrecisionExhausted,
    PreconditionViolated,
)
from .utils import log1_abs

logger = logging.getLogger(__name__)

DEFAULT_PRECISION_BITS = 128
GUARD_BITS = 32

# Lower bound for log|prod (1 - q^n)^24| on the fundamental domain
ETA_PRODUCT_LOG_FLOOR = -0.104927
STATED_FALTINGS_CONSTANT = -2.7572


def make_context(bits: int) -> mpmath.MPContext:
    """A private mpmath context at the given binary precision."""
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def _to_ctx(ctx: mpmath.MPContext, value) -> Any:
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    if isinstance(value, complex):
        return ctx.mpc(value.real, value.imag)
    return ctx.convert(value)


# =============================================================================
# Period lattice
# =============================================================================


@dataclass(frozen=True)
class PeriodData:
    """Reduced period basis (omega1, omega2 = tau * omega1) and its nome."""

    omega1: Any
    omega2: Any
    tau: Any
    q: Any
    precision_bits: int
    roots: tuple = field(repr=False)
    b2: int = field(repr=False)
    ctx: mpmath.MPContext = field(repr=False, compare=False)

    @property
    def im_tau(self):
        return self.ctx.im(self.tau)

    @property
    def tolerance(self):
        """Agreement demanded of self-checks: 2^-(precision - 16)."""
        return self.ctx.ldexp(1, -(self.precision_bits - 16))

    def half_periods(self) -> tuple:
        w1, w2 = self.omega1, self.omega2
        return (w1 / 2, w2 / 2, (w1 + w2) / 2)


def truncation_terms(abs_q: float, bits: int) -> tuple[int, float]:
    """
    Terms needed so that 25|q|^(N+1)/(1-|q|) < 2^-bits.

    Returns:
        (N, tail bound)
    """
    if not 0 < abs_q < 1:
        raise PreconditionViolated(f"|q| = {abs_q} outside (0, 1)")
    target = -bits * math.log(2)
    log_q = math.log(abs_q)
    n = max(1, math.ceil((target - math.log(25) + math.log(1 - abs_q)) / log_q) - 1)
    while math.log(25) + (n + 1) * log_q - math.log(1 - abs_q) >= target:
        n += 1
    bound = math.exp(math.log(25) + (n + 1) * log_q - math.log(1 - abs_q))
    return n, bound


def _eisenstein(ctx, q, weight: int, terms: int):
    coeff = {4: 240, 6: -504}[weight]
    total = ctx.mpf(0)
    qn = ctx.mpf(1)
    for n in range(1, terms + 1):
        qn *= q
        total += ctx.mpf(n) ** (weight - 1) * qn / (1 - qn)
    return 1 + coeff * total


def _eta24(ctx, q, terms: int):
    prod = ctx.mpf(1)
    qn = ctx.mpf(1)
    for _ in range(terms):
        qn *= q
        prod *= 1 - qn
    return prod**24


def _in_fundamental_domain(ctx, tau, slack) -> bool:
    return ctx.im(tau) > 0 and abs(tau) >= 1 - slack and abs(ctx.re(tau)) <= 0.5 + slack


def _reduce_basis(ctx, w1, w2):
    slack = ctx.ldexp(1, -(ctx.prec // 2))
    if ctx.im(w2 / w1) < 0:
        w2 = -w2
    for _ in range(200):
        tau = w2 / w1
        n = int(ctx.nint(ctx.re(tau)))
        if abs(ctx.re(tau)) > 0.5 + slack and n:
            w2 -= n * w1
            continue
        if abs(tau) < 1 - slack:
            w1, w2 = w2, -w1
            continue
        break
    else:
        raise PrecisionExhausted("fundamental-domain reduction did not terminate")
    # Canonical boundary: Re tau in (-1/2, 1/2], left arc mapped to the right
    tau = w2 / w1
    if abs(ctx.re(tau) + 0.5) <= slack:
        w2 += w1
    tau = w2 / w1
    if abs(abs(tau) - 1) <= slack and ctx.re(tau) < -slack:
        w1, w2 = w2, -w1
    return w1, w2


def _cubic_roots(ctx, model: WeierstrassModel):
    inv = model.invariants
    try:
        roots = ctx.polyroots([4, inv.b2, 2 * inv.b4, inv.b6], maxsteps=200, extraprec=ctx.prec)
    except ctx.NoConvergence as e:
        raise PrecisionExhausted(f"cubic roots did not converge: {e}") from e
    return [ctx.mpc(r) for r in roots]


def period_lattice(
    model: WeierstrassModel,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    guard_bits: int = GUARD_BITS,
) -> PeriodData:
    """
    Period lattice of the Neron differential dx/(2y + a1 x + a3).

    Args:
        model: Non-singular model
        precision_bits: Bits the results must be good to
        guard_bits: Extra bits carried internally

    Returns:
        PeriodData with tau in the fundamental domain

    Raises:
        PrecisionExhausted: AGM or the q-series self-check failed
    """
    ctx = make_context(precision_bits + guard_bits)
    inv = model.invariants
    roots = _cubic_roots(ctx, model)

    if inv.discriminant > 0:
        e1, e2, e3 = sorted((ctx.re(r) for r in roots), reverse=True)
        w1 = ctx.pi / ctx.agm(ctx.sqrt(e1 - e3), ctx.sqrt(e1 - e2))
        w2 = ctx.mpc(0, 1) * ctx.pi / ctx.agm(ctx.sqrt(e1 - e3), ctx.sqrt(e2 - e3))
        ordered = (e1, e2, e3)
    else:
        real_root = min(roots, key=lambda r: abs(ctx.im(r)))
        e1 = ctx.re(real_root)
        others = [r for r in roots if r is not real_root]
        beta = ctx.sqrt(3 * e1 * e1 + inv.b2 * e1 / 2 + ctx.mpf(inv.b4) / 2)
        alpha = 3 * e1 + ctx.mpf(inv.b2) / 4
        root_beta = 2 * ctx.sqrt(beta)
        w1 = 2 * ctx.pi / ctx.agm(root_beta, ctx.sqrt(2 * beta + alpha))
        w2 = -w1 / 2 + ctx.mpc(0, 1) * ctx.pi / ctx.agm(root_beta, ctx.sqrt(2 * beta - alpha))
        ordered = (ctx.mpc(e1), *others)

    if not (ctx.isfinite(w1) and ctx.isfinite(w2)) or w1 == 0:
        raise PrecisionExhausted("AGM failed to produce finite periods")

    w1, w2 = _reduce_basis(ctx, ctx.mpc(w1), ctx.mpc(w2))
    tau = w2 / w1
    q = ctx.exp(2 * ctx.pi * ctx.mpc(0, 1) * tau)
    periods = PeriodData(
        omega1=w1,
        omega2=w2,
        tau=tau,
        q=q,
        precision_bits=precision_bits,
        roots=tuple(ordered),
        b2=inv.b2,
        ctx=ctx,
    )
    _check_lattice(model, periods)
    return periods


def _check_lattice(model: WeierstrassModel, periods: PeriodData) -> None:
    ctx, q, w1 = periods.ctx, periods.q, periods.omega1
    inv = model.invariants
    terms, _ = truncation_terms(float(abs(q)), ctx.prec)
    # n^5 coefficients outgrow the eta tail estimate
    e4 = _eisenstein(ctx, q, 4, terms + 8)
    e6 = _eisenstein(ctx, q, 6, terms + 8)
    scale = 2 * ctx.pi / w1
    g2 = scale**4 * e4 / 12
    g3 = scale**6 * e6 / 216
    tol = periods.tolerance
    checks = {
        "g2": (g2, ctx.mpf(inv.c4) / 12),
        "g3": (g3, ctx.mpf(inv.c6) / 216),
        "j": (e4**3 / (q * _eta24(ctx, q, terms)), _to_ctx(ctx, inv.j)),
    }
    for name, (computed, expected) in checks.items():
        if abs(computed - expected) > tol * max(1, abs(expected)):
            raise PrecisionExhausted(
                f"{name} from q-series disagrees with algebraic value at "
                f"{periods.precision_bits} bits: {ctx.nstr(computed, 15)} vs {ctx.nstr(expected, 15)}"
            )


# =============================================================================
# q-expansions
# =============================================================================


def eta_product(tau, precision_bits: int = DEFAULT_PRECISION_BITS):
    """prod_{n>=1} (1 - q^n)^24 with q = exp(2 pi i tau), truncated by truncation_terms."""
    ctx = make_context(precision_bits + GUARD_BITS)
    tau = _to_ctx(ctx, tau)
    q = ctx.exp(2 * ctx.pi * ctx.mpc(0, 1) * tau)
    terms, _ = truncation_terms(float(abs(q)), ctx.prec)
    return _eta24(ctx, q, terms)


def discriminant_tau(tau, precision_bits: int = DEFAULT_PRECISION_BITS):
    """
    Modular discriminant (2 pi)^12 q prod (1 - q^n)^24.

    Args:
        tau: Point of the fundamental domain
        precision_bits: Target precision

    Returns:
        Nonzero mpc
    """
    ctx = make_context(precision_bits + GUARD_BITS)
    tau = _to_ctx(ctx, tau)
    if not _in_fundamental_domain(ctx, tau, ctx.ldexp(1, -(precision_bits // 2))):
        raise PreconditionViolated(f"tau = {ctx.nstr(tau, 10)} is not in the fundamental domain")
    q = ctx.exp(2 * ctx.pi * ctx.mpc(0, 1) * tau)
    terms, _ = truncation_terms(float(abs(q)), ctx.prec)
    return (2 * ctx.pi) ** 12 * q * _eta24(ctx, q, terms)


def j_from_tau(tau, precision_bits: int = DEFAULT_PRECISION_BITS):
    """1728 E4^3 / (E4^3 - E6^2) from the Eisenstein q-series."""
    ctx = make_context(precision_bits + GUARD_BITS)
    tau = _to_ctx(ctx, tau)
    q = ctx.exp(2 * ctx.pi * ctx.mpc(0, 1) * tau)
    terms, _ = truncation_terms(float(abs(q)), ctx.prec)
    e4 = _eisenstein(ctx, q, 4, terms + 8)
    e6 = _eisenstein(ctx, q, 6, terms + 8)
    return 1728 * e4**3 / (e4**3 - e6**2)


def _torus_parameter(periods: PeriodData, z):
    """z / omega1 moved into the centred parallelogram |Re| <= 1/2, |Im| <= Im(tau)/2."""
    ctx = periods.ctx
    t = z / periods.omega1
    t -= ctx.nint(ctx.im(t) / periods.im_tau) * periods.tau
    t -= ctx.nint(ctx.re(t))
    return t


def wp(periods: PeriodData, z):
    """Weierstrass p-function of the lattice at z."""
    ctx, q = periods.ctx, periods.q
    u = ctx.exp(2 * ctx.pi * ctx.mpc(0, 1) * _torus_parameter(periods, z))
    total = ctx.mpf(1) / 12 + u / (1 - u) ** 2
    spread = max(abs(u), 1 / abs(u)) + 2
    qn = q
    while True:
        a, b = qn * u, qn / u
        total += a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
        if abs(qn) * spread < ctx.eps:
            break
        qn *= q
    return (2 * ctx.pi * ctx.mpc(0, 1) / periods.omega1) ** 2 * total


def wp_prime(periods: PeriodData, z):
    """Derivative of the Weierstrass p-function at z."""
    ctx, q = periods.ctx, periods.q
    u = ctx.exp(2 * ctx.pi * ctx.mpc(0, 1) * _torus_parameter(periods, z))
    total = u * (1 + u) / (1 - u) ** 3
    spread = max(abs(u), 1 / abs(u)) + 2
    qn = q
    while True:
        a, b = qn * u, qn / u
        total += a * (1 + a) / (1 - a) ** 3 - b * (1 + b) / (1 - b) ** 3
        if abs(qn) * spread < ctx.eps:
            break
        qn *= q
    return (2 * ctx.pi * ctx.mpc(0, 1) / periods.omega1) ** 3 * total


def elliptic_exp(model: WeierstrassModel, periods: PeriodData, z) -> tuple:
    """(x, y) on the model corresponding to z in C/Lambda."""
    X = wp(periods, z)
    Y = wp_prime(periods, z)
    x = X - periods.ctx.mpf(model.invariants.b2) / 12
    y = (Y - model.a1 * x - model.a3) / 2
    return x, y


# =============================================================================
# Elliptic logarithm
# =============================================================================


@dataclass(frozen=True)
class EllipticLogCoords:
    """z in C/Lambda with z = (alpha + tau * beta) * omega1, alpha, beta in [0, 1)."""

    z: Any
    alpha: Any
    beta: Any

    def centred(self) -> tuple[float, float]:
        """Coordinates moved to (-1/2, 1/2]."""
        a, b = float(self.alpha), float(self.beta)
        return (a - 1 if a > 0.5 else a, b - 1 if b > 0.5 else b)


def torus_coordinates(periods: PeriodData, z) -> tuple:
    ctx = periods.ctx
    t = z / periods.omega1
    beta = ctx.im(t) / periods.im_tau
    alpha = ctx.re(t) - beta * ctx.re(periods.tau)
    alpha -= ctx.floor(alpha)
    beta -= ctx.floor(beta)
    snap = periods.tolerance
    if 1 - alpha < snap:
        alpha = ctx.mpf(0)
    if 1 - beta < snap:
        beta = ctx.mpf(0)
    return alpha, beta


def _mismatch(periods: PeriodData, z, X, Y):
    return abs(wp(periods, z) - X) / max(1, abs(X)) + abs(wp_prime(periods, z) - Y) / max(1, abs(Y))


def elliptic_log(model: WeierstrassModel, P: RationalPoint, periods: PeriodData) -> EllipticLogCoords:
    """
    Elliptic logarithm of a real point.

    Carlson's symmetric integral R_F (evaluated by the descending duplication
    iteration) gives z with p(z) = X; the sign and the component are fixed by
    matching p'(z) = Y, points on the bounded real component are first moved to
    the identity component by a 2-torsion translation, and the result is
    polished by Newton steps on p(z) - X.

    Raises:
        PointIsOrigin: P is O
        PrecisionExhausted: the exponential round trip fails
    """
    if P.is_origin:
        raise PointIsOrigin("the elliptic logarithm of O is 0 mod the lattice")
    ctx = periods.ctx
    inv = model.invariants
    x = _to_ctx(ctx, P.x)
    X = x + ctx.mpf(inv.b2) / 12
    y_sum = 2 * P.y + model.a1 * P.x + model.a3
    Y = _to_ctx(ctx, y_sum)
    e = periods.roots
    halves = periods.half_periods()

    if y_sum == 0:
        candidates = list(halves)
    else:
        egg = inv.discriminant > 0 and x < ctx.re(e[0])
        if egg:
            e1, e2, e3 = e
            shifted = e3 + (e3 - e1) * (e3 - e2) / (x - e3)
            z0 = ctx.elliprf(shifted - e1, shifted - e2, shifted - e3)
            candidates = [s * z0 + h for s in (1, -1) for h in halves]
        else:
            z0 = ctx.elliprf(x - e[0], x - e[1], x - e[2])
            candidates = [z0, -z0]

    z = min(candidates, key=lambda c: _mismatch(periods, c, X, Y))
    if y_sum != 0:
        for _ in range(12):
            step = (wp(periods, z) - X) / wp_prime(periods, z)
            z -= step
            if abs(step) < ctx.eps * max(1, abs(z)):
                break

    round_trip = ctx.ldexp(1, -(periods.precision_bits - 8))
    if abs(wp(periods, z) - X) > round_trip * max(1, abs(X)):
        raise PrecisionExhausted(f"exponential round trip failed for {P}")
    alpha, beta = torus_coordinates(periods, z)
    return EllipticLogCoords(z=z, alpha=alpha, beta=beta)


# =============================================================================
# Archimedean local height
# =============================================================================


def _bernoulli2(t):
    return t * t - t + Fraction(1, 6) if isinstance(t, Fraction) else t * t - t + 1.0 / 6


def local_height_from_torus(periods: PeriodData, alpha, beta):
    """
    lambda_infinity at the torus point alpha + tau * beta.

    -1/2 B2(beta) log|q| - log|1 - u| - sum log|(1 - q^n u)(1 - q^n / u)|,
    evaluated after moving beta into [0, 1/2] by evenness.
    """
    ctx = periods.ctx
    alpha = _to_ctx(ctx, alpha)
    beta = _to_ctx(ctx, beta)
    alpha -= ctx.floor(alpha)
    beta -= ctx.floor(beta)
    if beta > 0.5:
        alpha, beta = (-alpha) - ctx.floor(-alpha), 1 - beta
    if alpha == 0 and beta == 0:
        raise PointIsOrigin("local height is infinite at the origin")
    q = periods.q
    u = ctx.exp(2 * ctx.pi * ctx.mpc(0, 1) * (alpha + beta * periods.tau))
    log_abs_q = -2 * ctx.pi * periods.im_tau
    total = -(beta * beta - beta + ctx.mpf(1) / 6) * log_abs_q / 2 - ctx.log(abs(1 - u))
    qn = q
    while True:
        total -= ctx.log(abs((1 - qn * u) * (1 - qn / u)))
        if abs(qn / u) < ctx.eps:
            break
        qn *= q
    return total


def torus_local_heights(periods: PeriodData, alphas, betas) -> np.ndarray:
    """Vectorised float64 lambda_infinity over arrays of torus coordinates."""
    alphas = np.mod(np.asarray(alphas, dtype=np.float64), 1.0)
    betas = np.mod(np.asarray(betas, dtype=np.float64), 1.0)
    flip = betas > 0.5
    alphas = np.where(flip, np.mod(-alphas, 1.0), alphas)
    betas = np.where(flip, 1.0 - betas, betas)
    tau = complex(periods.tau)
    q = complex(periods.q)
    u = np.exp(2j * np.pi * (alphas + betas * tau))
    log_abs_q = -2 * np.pi * tau.imag
    total = -(betas**2 - betas + 1.0 / 6) * log_abs_q / 2 - np.log(np.abs(1 - u))
    qn = q
    while True:
        total -= np.log(np.abs((1 - qn * u) * (1 - qn / u)))
        if abs(qn) / max(np.min(np.abs(u)), 1e-300) < 1e-17:
            break
        qn *= q
    return total


def arch_local_height(model: WeierstrassModel, P: RationalPoint, periods: PeriodData):
    """
    Archimedean canonical local height lambda_infinity(P).

    Normalised with the Delta^(1/12) factor so that it is independent of the
    model and the finite local heights carry the (1/12) N_v log p terms.

    Raises:
        PointIsOrigin: P is O
    """
    if P.is_origin:
        raise PointIsOrigin("local height is undefined at O")
    coords = elliptic_log(model, P, periods)
    return local_height_from_torus(periods, coords.alpha, coords.beta)


def quasi_parallelogram_defect(
    model: WeierstrassModel, periods: PeriodData, P: RationalPoint, Q: RationalPoint
):
    """
    lambda(P+Q) + lambda(P-Q) - 2 lambda(P) - 2 lambda(Q) + log|x(P) - x(Q)|.

    Constant in (P, Q), equal to log|Delta| / 6 for the model.
    """
    if P.x == Q.x:
        raise PreconditionViolated("quasi-parallelogram needs x(P) != x(Q)")
    lam = lambda R: arch_local_height(model, R, periods)  # noqa: E731
    ctx = periods.ctx
    total = lam(group_add(model, P, Q)) + lam(group_sub(model, P, Q)) - 2 * lam(P) - 2 * lam(Q)
    return total + ctx.log(abs(_to_ctx(ctx, P.x - Q.x)))


# =============================================================================
# Archimedean inequalities
# =============================================================================


class HSCheck(NamedTuple):
    applicable: bool
    local_height: float
    bound: float
    holds: bool


def hs_check(periods: PeriodData, j, alpha, beta, epsilon=Fraction(1, 2)) -> HSCheck:
    """
    Small torus coordinates force a large local height.

    With centred coordinates max(|alpha|, |beta|) <= eps/23, the height is at
    least (1 - eps)/12 * log^(1)|j|. Outside that square the check is vacuous.
    """
    a = float(alpha) % 1.0
    b = float(beta) % 1.0
    a = a - 1 if a > 0.5 else a
    b = b - 1 if b > 0.5 else b
    epsilon = Fraction(epsilon)
    applicable = max(abs(a), abs(b)) <= float(epsilon / 23)
    bound = float(1 - epsilon) / 12 * log1_abs(j)
    if not applicable or (a == 0 and b == 0):
        return HSCheck(applicable and (a, b) != (0, 0), math.inf, bound, True)
    lam = float(local_height_from_torus(periods, alpha, beta))
    return HSCheck(True, lam, bound, lam >= bound)


class ElkiesCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def elkies_bound_check(
    model: WeierstrassModel, points: list[RationalPoint], periods: PeriodData
) -> ElkiesCheck:
    """
    Sum of local heights over differences of N distinct points.

    lhs = sum_{i != j} lambda(P_i - P_j)
    rhs = -(N log N)/2 - (N/12) log^(1)|j| - 16N/5

    An empty configuration holds trivially with lhs = rhs = 0.

    Raises:
        DuplicatePoints: two points coincide
        PointIsOrigin: a point is O
    """
    if len(set(points)) != len(points):
        raise DuplicatePoints("configuration contains repeated points")
    if any(P.is_origin for P in points):
        raise PointIsOrigin("configuration contains O")
    n = len(points)
    if n == 0:
        return ElkiesCheck(0.0, 0.0, True)
    coords = [elliptic_log(model, P, periods) for P in points]
    lhs = periods.ctx.mpf(0)
    for i in range(n):
        for k in range(i + 1, n):
            lam = local_height_from_torus(
                periods, coords[i].alpha - coords[k].alpha, coords[i].beta - coords[k].beta
            )
            lhs += 2 * lam
    rhs = -(n * math.log(n)) / 2 - n / 12 * log1_abs(model.j_invariant) - 16 * n / 5
    return ElkiesCheck(float(lhs), rhs, float(lhs) >= rhs)


def bp_check(j_abs, tau) -> bool:
    """log^(1)|j| + 6 >= 2 pi Im(tau)."""
    im_tau = tau.imag if isinstance(tau, complex) else float(mpmath.im(tau))
    return log1_abs(j_abs) + 6 >= 2 * math.pi * im_tau


# =============================================================================
# Faltings height
# =============================================================================


def recomputed_faltings_constant() -> float:
    """-log(2 pi) + (0.104927 + 6 log(2/sqrt 3)) / 12, the bound the q-product floor supports."""
    return -math.log(2 * math.pi) + (-ETA_PRODUCT_LOG_FLOOR + 6 * math.log(2 / math.sqrt(3))) / 12


class FaltingsReport(BaseModel):
    """Faltings height with both versions of its discriminant bound."""

    model_config = ConfigDict(frozen=True)

    h_F: float = Field(..., description="Faltings height")
    im_tau: float
    log_disc: float = Field(..., description="log|Delta_min|")
    bound_base: float = Field(..., description="(log|Delta_min| + 2 pi Im tau) / 12")
    stated_constant: float = STATED_FALTINGS_CONSTANT
    recomputed_constant: float
    stated_holds: bool
    recomputed_holds: bool
    discriminant_normalization: str = "(2 pi)^12 q prod (1 - q^n)^24"
    precision_bits: int


def faltings_height(model: WeierstrassModel, periods: PeriodData):
    """
    h_F = (log|Delta_min| - log|Delta(tau)| - 6 log Im tau) / 12.

    Raises:
        NotMinimalModel: model is not globally minimal
    """
    if not is_globally_minimal(model):
        raise NotMinimalModel(f"{model} is not globally minimal")
    ctx = periods.ctx
    disc_tau = discriminant_tau(periods.tau, periods.precision_bits)
    log_disc = ctx.log(abs(model.discriminant))
    return (log_disc - ctx.log(abs(_to_ctx(ctx, disc_tau))) - 6 * ctx.log(periods.im_tau)) / 12


def faltings_bound_check(model: WeierstrassModel, periods: PeriodData) -> FaltingsReport:
    h_F = float(faltings_height(model, periods))
    im_tau = float(periods.im_tau)
    log_disc = math.log(abs(model.discriminant))
    base = (log_disc + 2 * math.pi * im_tau) / 12
    recomputed = recomputed_faltings_constant()
    report = FaltingsReport(
        h_F=h_F,
        im_tau=im_tau,
        log_disc=log_disc,
        bound_base=base,
        recomputed_constant=recomputed,
        stated_holds=h_F <= base + STATED_FALTINGS_CONSTANT,
        recomputed_holds=h_F <= base + recomputed,
        precision_bits=periods.precision_bits,
    )
    if not report.stated_holds:
        logger.warning(
            "Faltings bound with constant %.4f fails for %s (h_F=%.6f > %.6f); "
            "recomputed constant %.6f %s",
            STATED_FALTINGS_CONSTANT,
            model,
            h_F,
            base + STATED_FALTINGS_CONSTANT,
            recomputed,
            "holds" if report.recomputed_holds else "fails",
        )
    return report
