"""
Exact arithmetic of Weierstrass models over Q.

Invariants, the chord-tangent group law, Tate's algorithm prime by prime, the
global minimal model and the lcm N_E of the multiplicative exponents.

Everything here is exact (int / Fraction); nothing touches floating point.

Usage:
    from lang_heights.curve_core import WeierstrassModel, RationalPoint, tate_reduce

    E = WeierstrassModel(0, 0, 1, -1, 0)
    P = RationalPoint.affine(0, 0)
    print(scalar_mul(E, 2, P))          # (1, 0)
    print(tate_reduce(E, 37))           # I1, split multiplicative
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import Poly, factorint, isprime, multiplicity, pollard_pm1, pollard_rho, symbols
from sympy.ntheory import is_quad_residue

from .errors import (
    PointNotOnCurve,
    PreconditionViolated,
    SingularModel,
    UnfactorableDiscriminant,
)

logger = logging.getLogger(__name__)

# Valuation reported for 0
INFINITE_VALUATION = 10**9

TRIAL_DIVISION_LIMIT = 10**6

_T = symbols("T")

ReductionKind = Literal["good", "multiplicative_split", "multiplicative_nonsplit", "additive"]


# =============================================================================
# Models and points
# =============================================================================


@dataclass(frozen=True)
class Invariants:
    """b- and c-invariants, discriminant and j of a model."""

    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    discriminant: int
    j: Fraction


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            value = getattr(self, name)
            if isinstance(value, Fraction) and value.denominator == 1:
                object.__setattr__(self, name, int(value))
            elif not isinstance(value, int) or isinstance(value, bool):
                raise PreconditionViolated(
                    f"coefficient {name}={value!r} is not an integer; use from_rational()"
                )
        if self.invariants.discriminant == 0:
            raise SingularModel(self.coefficients)

    @classmethod
    def from_rational(cls, coefficients) -> "WeierstrassModel":
        """
        Admit a model with rational coefficients by clearing denominators.

        The substitution (x, y) -> (x/k^2, y/k^3) multiplies a_i by k^i; k is the
        lcm of the denominators, which is always enough.
        """
        values = [Fraction(c) for c in coefficients]
        if len(values) != 5:
            raise PreconditionViolated("a Weierstrass model needs five coefficients")
        k = math.lcm(*(v.denominator for v in values))
        weights = (1, 2, 3, 4, 6)
        scaled = [v * k**w for v, w in zip(values, weights, strict=True)]
        return cls(*(int(v) for v in scaled))

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def invariants(self) -> Invariants:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        j = Fraction(c4**3, disc) if disc else Fraction(0)
        return Invariants(b2, b4, b6, b8, c4, c6, disc, j)

    @property
    def discriminant(self) -> int:
        return self.invariants.discriminant

    @property
    def j_invariant(self) -> Fraction:
        return self.invariants.j

    def equation_defect(self, x: Fraction, y: Fraction) -> Fraction:
        """LHS minus RHS of the model equation at (x, y)."""
        a1, a2, a3, a4, a6 = self.coefficients
        return y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)

    def contains(self, P: "RationalPoint") -> bool:
        return P.is_origin or self.equation_defect(P.x, P.y) == 0

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.coefficients) + "]"


@dataclass(frozen=True)
class RationalPoint:
    """The origin O (x = y = None) or an affine point with rational coordinates."""

    x: Fraction | None = None
    y: Fraction | None = None

    @classmethod
    def origin(cls) -> "RationalPoint":
        return cls()

    @classmethod
    def affine(cls, x, y) -> "RationalPoint":
        return cls(Fraction(x), Fraction(y))

    @property
    def is_origin(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        return "O" if self.is_origin else f"({self.x}, {self.y})"


ORIGIN = RationalPoint.origin()


def invariants(model: WeierstrassModel) -> Invariants:
    """
    Return the invariants of a model.

    Raises:
        SingularModel: discriminant is zero (normally caught at construction)
    """
    inv = model.invariants
    if inv.discriminant == 0:
        raise SingularModel(model.coefficients)
    return inv


# =============================================================================
# Group law
# =============================================================================


def require_on_curve(model: WeierstrassModel, *points: RationalPoint) -> None:
    for P in points:
        if not model.contains(P):
            raise PointNotOnCurve(P.x, P.y, model.coefficients)


def negate(model: WeierstrassModel, P: RationalPoint) -> RationalPoint:
    if P.is_origin:
        return P
    return RationalPoint(P.x, -P.y - model.a1 * P.x - model.a3)


def _add(model: WeierstrassModel, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    if P.is_origin:
        return Q
    if Q.is_origin:
        return P
    a1, a2, a3, a4, a6 = model.coefficients
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return ORIGIN
        denom = 2 * y1 + a1 * x1 + a3
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / denom
        nu = (-(x1**3) + a4 * x1 + 2 * a6 - a3 * y1) / denom
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return RationalPoint(x3, y3)


def group_add(model: WeierstrassModel, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    """
    Chord-tangent addition.

    Raises:
        PointNotOnCurve: P or Q is not on the model
    """
    require_on_curve(model, P, Q)
    return _add(model, P, Q)


def group_sub(model: WeierstrassModel, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    require_on_curve(model, P, Q)
    return _add(model, P, negate(model, Q))


def scalar_mul(model: WeierstrassModel, n: int, P: RationalPoint) -> RationalPoint:
    """
    [n]P by double-and-add.

    Raises:
        PointNotOnCurve: P is not on the model
    """
    require_on_curve(model, P)
    if n < 0:
        return negate(model, scalar_mul(model, -n, P))
    result = ORIGIN
    addend = P
    while n:
        if n & 1:
            result = _add(model, result, addend)
        n >>= 1
        if n:
            addend = _add(model, addend, addend)
    return result


# =============================================================================
# Coordinate changes
# =============================================================================


@dataclass(frozen=True)
class ModelTransform:
    """x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction = Fraction(1)
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def map_point(self, P: RationalPoint) -> RationalPoint:
        """Carry a point from the old model to the new one."""
        if P.is_origin:
            return P
        u, r, s, t = self.u, self.r, self.s, self.t
        x = (P.x - r) / u**2
        y = (P.y - s * (P.x - r) - t) / u**3
        return RationalPoint(x, y)

    def compose(self, other: "ModelTransform") -> "ModelTransform":
        """Apply self, then other."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return ModelTransform(
            u=u1 * u2,
            r=r1 + u1 * u1 * r2,
            s=s1 + u1 * s2,
            t=t1 + u1 * u1 * s1 * r2 + u1**3 * t2,
        )


def transformed_coefficients(model: WeierstrassModel, transform: ModelTransform) -> tuple[Fraction, ...]:
    a1, a2, a3, a4, a6 = (Fraction(a) for a in model.coefficients)
    u, r, s, t = transform.u, transform.r, transform.s, transform.t
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
    return (n1 / u, n2 / u**2, n3 / u**3, n4 / u**4, n6 / u**6)


def change_coordinates(model: WeierstrassModel, u=1, r=0, s=0, t=0) -> WeierstrassModel:
    """
    Apply an admissible change of coordinates.

    Raises:
        PreconditionViolated: the result is not integral
    """
    transform = ModelTransform(Fraction(u), Fraction(r), Fraction(s), Fraction(t))
    coeffs = transformed_coefficients(model, transform)
    if any(c.denominator != 1 for c in coeffs):
        raise PreconditionViolated(f"transform {transform} does not give an integral model")
    return WeierstrassModel(*(int(c) for c in coeffs))


def _rst(a: list[int], r: int = 0, s: int = 0, t: int = 0) -> list[int]:
    """Integral (r, s, t) transform with u = 1 on a raw coefficient list."""
    a1, a2, a3, a4, a6 = a
    return [
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    ]


# =============================================================================
# Factorisation and valuations
# =============================================================================


@lru_cache(maxsize=4096)
def factor_integer(n: int) -> tuple[tuple[int, int], ...]:
    """
    Factor |n| completely: trial division to 10^6, then primality test and
    Pollard rho / p-1 on what is left.

    Returns:
        Sorted ((p, e), ...) pairs

    Raises:
        UnfactorableDiscriminant: a composite cofactor resisted splitting
    """
    n = abs(n)
    if n == 0:
        raise PreconditionViolated("cannot factor 0")
    counts: Counter[int] = Counter()
    pending = list(factorint(n, limit=TRIAL_DIVISION_LIMIT).items())
    while pending:
        f, e = pending.pop()
        if f == 1:
            continue
        if isprime(f):
            counts[f] += e
            continue
        divisor = pollard_rho(f, retries=20) or pollard_pm1(f, retries=20)
        if not divisor or divisor in (1, f):
            raise UnfactorableDiscriminant(f"could not split composite cofactor {f}")
        pending.append((divisor, e))
        pending.append((f // divisor, e))
    return tuple(sorted(counts.items()))


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factor_integer(n)]


def valuation(value, p: int) -> int:
    """p-adic valuation of an int or Fraction; INFINITE_VALUATION for 0."""
    value = Fraction(value)
    if value == 0:
        return INFINITE_VALUATION
    v_num = multiplicity(p, abs(value.numerator)) if value.numerator % p == 0 else 0
    v_den = multiplicity(p, value.denominator) if value.denominator % p == 0 else 0
    return v_num - v_den


# =============================================================================
# Tate's algorithm
# =============================================================================


class LocalReductionData(BaseModel):
    """Per-prime output of Tate's algorithm."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., description="Prime")
    reduction_kind: ReductionKind
    N_v: int = Field(..., ge=0, description="ord_p of the locally minimal discriminant")
    local_minimal: bool = Field(..., description="Input model already minimal at p")
    kodaira_symbol: str
    conductor_exponent: int = Field(..., ge=0)
    tamagawa: int = Field(..., ge=1)
    scalings: int = Field(0, ge=0, description="Number of u=p divisions applied")
    c4_valuation: int = Field(..., description="ord_p(c4) of the locally minimal model")

    @model_validator(mode="after")
    def _consistent(self) -> "LocalReductionData":
        if (self.reduction_kind == "good") != (self.N_v == 0):
            raise ValueError("good reduction must coincide with N_v = 0")
        if self.reduction_kind.startswith("multiplicative") and self.c4_valuation != 0:
            raise ValueError("multiplicative reduction requires p not dividing c4")
        return self

    @property
    def is_multiplicative(self) -> bool:
        return self.reduction_kind.startswith("multiplicative")

    @property
    def is_split(self) -> bool:
        return self.reduction_kind == "multiplicative_split"


def _has_root_mod_p(a: int, b: int, c: int, p: int) -> bool:
    """Does a X^2 + b X + c have a root in F_p?"""
    a, b, c = a % p, b % p, c % p
    if a == 0:
        return b != 0 or c == 0
    if p == 2:
        return any((a * x * x + b * x + c) % 2 == 0 for x in range(2))
    return is_quad_residue((b * b - 4 * a * c) % p, p)


def _cubic_root_count(b: int, c: int, d: int, p: int) -> int:
    """Number of distinct roots of X^3 + b X^2 + c X + d in F_p."""
    if p < 50:
        return sum((x**3 + b * x * x + c * x + d) % p == 0 for x in range(p))
    poly = Poly(_T**3 + b * _T**2 + c * _T + d, _T, modulus=p)
    _, factors = poly.factor_list()
    return sum(1 for f, _ in factors if f.degree() == 1)


def _exact_div(a: int, b: int) -> int:
    q, rem = divmod(a, b)
    if rem:
        raise PreconditionViolated(f"{a} is not divisible by {b}")
    return q


def _tate(coeffs: list[int], p: int) -> tuple[LocalReductionData, list[int]]:
    """Tate's algorithm at p; returns the data and the locally minimal coefficients."""
    a = list(coeffs)
    scalings = 0

    def pval(x: int) -> int:
        return valuation(x, p)

    def pdiv(x: int) -> bool:
        return x % p == 0

    def pinv(x: int) -> int:
        return pow(x, -1, p)

    half = pinv(2) if p != 2 else None

    while True:
        inv = WeierstrassModel(*a).invariants
        b2, b4, b6, b8, c4, c6 = inv.b2, inv.b4, inv.b6, inv.b8, inv.c4, inv.c6
        vD = pval(inv.discriminant)

        def finish(kind, symbol, fp, cp):
            data = LocalReductionData(
                p=p,
                reduction_kind=kind,
                N_v=vD,
                local_minimal=scalings == 0,
                kodaira_symbol=symbol,
                conductor_exponent=fp,
                tamagawa=cp,
                scalings=scalings,
                c4_valuation=min(pval(c4), 64),
            )
            return data, a

        if vD == 0:
            return finish("good", "I0", 0, 1)

        # Move the singular point to (0, 0): p | a3, a4, a6
        a1, a2, a3, a4, a6 = a
        if p == 2:
            if pdiv(b2):
                r = a4 % 2
                t = (((r + a2) * r + a4) * r + a6) % 2
            else:
                r = a3 % 2
                t = (a4 + r * r) % 2
        elif p == 3:
            r = (-b6) % 3 if pdiv(b2) else (-pinv(b2) * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            if pdiv(c4):
                r = (-pinv(12) * b2) % p
            else:
                r = (-pinv(12 * c4) * (c6 + b2 * c4)) % p
            t = (-half * (a1 * r + a3)) % p
        a = _rst(a, r=r, t=t)
        a1, a2, a3, a4, a6 = a
        # b6 and b8 are not invariant under the translation
        moved = WeierstrassModel(*a).invariants
        b6, b8 = moved.b6, moved.b8

        if not pdiv(c4):
            if _has_root_mod_p(1, a1, -a2, p):
                return finish("multiplicative_split", f"I{vD}", 1, vD)
            cp = 2 if vD % 2 == 0 else 1
            return finish("multiplicative_nonsplit", f"I{vD}", 1, cp)

        if pval(a6) < 2:
            return finish("additive", "II", vD, 1)
        if pval(b8) < 3:
            return finish("additive", "III", vD - 1, 2)
        if pval(b6) < 3:
            cp = 3 if _has_root_mod_p(1, _exact_div(a3, p), -_exact_div(a6, p * p), p) else 1
            return finish("additive", "IV", vD - 2, cp)

        # Now p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s = a2 % 2
            t = 2 * (_exact_div(a6, 4) % 2)
        elif p == 3:
            s, t = a1, a3
        else:
            s = -a1 * half
            t = -a3 * half
        a = _rst(a, s=s, t=t)
        a1, a2, a3, a4, a6 = a

        b = _exact_div(a2, p)
        c = _exact_div(a4, p * p)
        d = _exact_div(a6, p**3)
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if not pdiv(w):
            cp = 1 + _cubic_root_count(b, c, d, p)
            return finish("additive", "I0*", vD - 4, cp)

        if not pdiv(x):
            # One double root: type I_m*
            if p == 2:
                r = c % 2
            elif p == 3:
                r = (c * pinv(b)) % 3
            else:
                r = ((b * c - 9 * d) * pinv(2 * x)) % p
            a = _rst(a, r=p * r)
            a1, a2, a3, a4, a6 = a
            ix, iy = 3, 3
            mx = my = p * p
            while True:
                a2t = _exact_div(a2, p)
                a3t = _exact_div(a3, my)
                a4t = _exact_div(a4, p * mx)
                a6t = _exact_div(a6, mx * my)
                if not pdiv(a3t * a3t + 4 * a6t):
                    cp = 4 if _has_root_mod_p(1, a3t, -a6t, p) else 2
                    break
                t = my * (a6t % 2) if p == 2 else my * ((-a3t * half) % p)
                a = _rst(a, t=t)
                a1, a2, a3, a4, a6 = a
                my *= p
                iy += 1
                a2t = _exact_div(a2, p)
                a3t = _exact_div(a3, my)
                a4t = _exact_div(a4, p * mx)
                a6t = _exact_div(a6, mx * my)
                if not pdiv(a4t * a4t - 4 * a6t * a2t):
                    cp = 4 if _has_root_mod_p(a2t, a4t, a6t, p) else 2
                    break
                if p == 2:
                    r = mx * ((a6t * pinv(a2t)) % 2)
                else:
                    r = mx * ((-a4t * pinv(2 * a2t)) % p)
                a = _rst(a, r=r)
                a1, a2, a3, a4, a6 = a
                mx *= p
                ix += 1
            m = ix + iy - 5
            return finish("additive", f"I{m}*", vD - ix - iy + 1, cp)

        # Triple root
        if p == 2:
            r = b % 2
        elif p == 3:
            r = (-d) % 3
        else:
            r = (-b * pinv(3)) % p
        a = _rst(a, r=p * r)
        a1, a2, a3, a4, a6 = a
        x3 = _exact_div(a3, p * p)
        x6 = _exact_div(a6, p**4)
        if not pdiv(x3 * x3 + 4 * x6):
            cp = 3 if _has_root_mod_p(1, x3, -x6, p) else 1
            return finish("additive", "IV*", vD - 6, cp)
        t = x6 % 2 if p == 2 else (x3 * half) % p
        a = _rst(a, t=-p * p * t)
        a1, a2, a3, a4, a6 = a
        if pval(a4) < 4:
            return finish("additive", "III*", vD - 7, 2)
        if pval(a6) < 6:
            return finish("additive", "II*", vD - 8, 1)

        # Not minimal at p: divide out by u = p and restart
        logger.debug("model %s not minimal at %d, dividing out", a, p)
        a = [
            _exact_div(a1, p),
            _exact_div(a2, p**2),
            _exact_div(a3, p**3),
            _exact_div(a4, p**4),
            _exact_div(a6, p**6),
        ]
        scalings += 1


def tate_reduce(model: WeierstrassModel, p: int) -> LocalReductionData:
    """
    Classify the reduction of the model at p with Tate's algorithm.

    Args:
        model: Any integral model
        p: A prime

    Returns:
        LocalReductionData for the locally minimal model at p
    """
    if not isprime(p):
        raise PreconditionViolated(f"{p} is not prime")
    data, _ = _tate(list(model.coefficients), p)
    return data


def local_minimal_coefficients(model: WeierstrassModel, p: int) -> tuple[int, ...]:
    """Coefficients of a model minimal at p, with the singular point moved to (0, 0)."""
    _, coeffs = _tate(list(model.coefficients), p)
    return tuple(coeffs)


def reduction_table(model: WeierstrassModel) -> list[LocalReductionData]:
    """Tate's algorithm at every prime dividing the discriminant, ordered by prime."""
    return [tate_reduce(model, p) for p in prime_divisors(model.discriminant)]


# =============================================================================
# Global minimal model
# =============================================================================


@dataclass(frozen=True)
class MinimalModel:
    """A globally minimal model, its discriminant and the map from the input model."""

    model: WeierstrassModel
    discriminant: int
    transform: ModelTransform

    def __iter__(self):
        # Allows `model, delta_min = global_minimal_model(E)`
        return iter((self.model, self.discriminant))


def _reduced_from_c_invariants(c4: int, c6: int) -> list[int]:
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4 = _exact_div(b2 * b2 - c4, 24)
    b6 = _exact_div(-(b2**3) + 36 * b2 * b4 - c6, 216)
    a1 = b2 % 2
    a3 = b6 % 2
    return [
        a1,
        _exact_div(b2 - a1, 4),
        a3,
        _exact_div(b4 - a1 * a3, 2),
        _exact_div(b6 - a3, 4),
    ]


def _transform_between(model: WeierstrassModel, target: WeierstrassModel, u: int) -> ModelTransform:
    a1, a2, a3 = (Fraction(v) for v in model.coefficients[:3])
    for sign in (1, -1):
        U = Fraction(sign * u)
        s = (U * target.a1 - a1) / 2
        r = (U * U * target.a2 - a2 + s * a1 + s * s) / 3
        t = (U**3 * target.a3 - a3 - r * a1) / 2
        transform = ModelTransform(U, r, s, t)
        if transformed_coefficients(model, transform) == tuple(Fraction(c) for c in target.coefficients):
            return transform
    raise PreconditionViolated(f"no isomorphism found between {model} and {target}")


def global_minimal_model(model: WeierstrassModel) -> MinimalModel:
    """
    Globally minimal, reduced model over Q.

    Each prime with p^12 | Delta is run through Tate's algorithm; the number of
    u = p divisions it needs gives u = prod p^k, and the reduced model is rebuilt
    from c4/u^4, c6/u^6.

    Returns:
        MinimalModel (unpacks as (model, delta_min))
    """
    inv = model.invariants
    u = 1
    for p, e in factor_integer(inv.discriminant):
        if e >= 12:
            u *= p ** tate_reduce(model, p).scalings
    c4 = _exact_div(inv.c4, u**4)
    c6 = _exact_div(inv.c6, u**6)
    minimal = WeierstrassModel(*_reduced_from_c_invariants(c4, c6))
    transform = _transform_between(model, minimal, u)
    delta_min = _exact_div(inv.discriminant, u**12)
    if minimal.discriminant != delta_min:
        raise PreconditionViolated("minimal discriminant mismatch")
    if u != 1:
        logger.info("model %s rescaled by u=%d to minimal model %s", model, u, minimal)
    return MinimalModel(minimal, delta_min, transform)


def is_globally_minimal(model: WeierstrassModel) -> bool:
    return abs(global_minimal_model(model).discriminant) == abs(model.discriminant)


# =============================================================================
# N_E, conductor, semi-stability
# =============================================================================


def compute_NE(reductions: list[LocalReductionData]) -> int:
    """
    lcm of N_v over the multiplicative places; 1 when there are none.

    Additive places are left out; is_semistable() tells whether that happened.
    """
    additive = [r.p for r in reductions if r.reduction_kind == "additive"]
    if additive:
        logger.warning("additive reduction at %s: N_E covers the multiplicative part only", additive)
    exponents = [r.N_v for r in reductions if r.is_multiplicative]
    return math.lcm(*exponents) if exponents else 1


def is_semistable(reductions: list[LocalReductionData]) -> bool:
    return all(r.reduction_kind != "additive" for r in reductions)


def conductor(reductions: list[LocalReductionData]) -> int:
    return math.prod(r.p**r.conductor_exponent for r in reductions)
