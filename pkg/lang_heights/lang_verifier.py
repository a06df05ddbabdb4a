"""
Instance checks of the effective lower bound for canonical heights.

For a point on a curve over Q this module computes the split multiplicative
profile S(P) / S~(P), runs the pigeonhole search for multiples with small torus
coordinates, decides which branch of the reduction argument the curve falls
in, and finally evaluates the torsion and height inequalities with their
explicit constants, reporting margins rather than raising on failure.

Usage:
    from lang_heights.lang_verifier import lang_check

    report = lang_check(E, P)
    print(report.classification.branch, report.verification.holds)
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arch_analytic import PeriodData, elliptic_log, faltings_height, period_lattice
from .config import RunConfig, load_config
from .curve_core import (
    LocalReductionData,
    RationalPoint,
    WeierstrassModel,
    global_minimal_model,
    reduction_table,
    require_on_curve,
    scalar_mul,
)
from .errors import ParameterTooSmall, PreconditionViolated
from .height_engine import MAZUR_BOUND, canonical_height, tate_parameter_order, torsion_order
from .utils import log1_abs

logger = logging.getLogger(__name__)

Branch = Literal[
    "big_j",
    "small_j_small_disc",
    "small_j_big_disc_case_I",
    "small_j_big_disc_case_II",
]

HS_CONSTANT = 23
TORSION_FACTOR = 2412
CASE_TWO_FRACTION = 550
PAIR_THRESHOLD_FRACTION = 5
CASE_ONE_FRACTION = 6
PIGEONHOLE_CHUNK = 1 << 20


# =============================================================================
# Parameters and constants
# =============================================================================


def grid_size(epsilon: Fraction) -> int:
    """ceil(23 / eps): cells per axis of the torus square grid."""
    return math.ceil(Fraction(HS_CONSTANT) / Fraction(epsilon))


def torsion_coefficient(epsilon: Fraction) -> Fraction:
    """2412 ceil(23/eps)^2 / (1 - eps), the coefficient of d log(d/(1-eps)) in the torsion bounds."""
    epsilon = Fraction(epsilon)
    return TORSION_FACTOR * grid_size(epsilon) ** 2 / (1 - epsilon)


def pigeonhole_min_n(d: int, epsilon: Fraction) -> int:
    """ceil(200 (d/(1-eps)) log(d/(1-eps))), at least 1."""
    ratio = d / (1 - float(epsilon))
    return max(1, math.ceil(200 * ratio * math.log(ratio)))


def c0(d: int) -> float:
    """Small-discriminant threshold 10^8 d log(2d)."""
    return 1e8 * d * math.log(2 * d)


def hard_branch_parameters(d: int, epsilon: Fraction, Z: int) -> tuple[int, int]:
    """(n, N) with n = max(pigeonhole floor, 2880(Z+1)) and N = n ceil(23/eps)^2 + 1."""
    n = max(pigeonhole_min_n(d, epsilon), 2880 * (Z + 1))
    return n, n * grid_size(epsilon) ** 2 + 1


class TheoremConstants(BaseModel):
    """B_d, C_d and C_d' in closed form."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1)
    B_d: float
    C_d: float
    C_d_prime: float

    @classmethod
    def for_degree(cls, d: int) -> "TheoremConstants":
        inner = 6094080 + 4.682e15 * d + 883200 * d * math.log(48 * d)
        return cls(
            d=d,
            B_d=1e16 * (d * math.log(2 * d)) ** 1.54,
            C_d=1 / (1e16 * d * d * inner**2),
            C_d_prime=1 / (1e12 * d * d * inner**2.08),
        )


class BranchBounds(BaseModel):
    """What a branch of the reduction argument concludes for a point."""

    model_config = ConfigDict(frozen=True)

    torsion_bound: float
    disc_coefficient: float | None = Field(None, description="hat-h >= coefficient * log|Delta|")
    faltings_coefficient: float | None = Field(None, description="hat-h >= coefficient * h_F")


def branch_bounds(
    branch: Branch,
    d: int = 1,
    epsilon: Fraction = Fraction(1, 2),
    c1: Fraction = Fraction(2),
    n: int | None = None,
    N: int | None = None,
) -> BranchBounds:
    """
    Torsion and height bounds each branch proves.

    Case II only reduces to the transcendence construction, so it carries the
    torsion bound alone.
    """
    eps, C1 = float(epsilon), float(c1)
    K = grid_size(epsilon)
    L = math.log(d / (1 - eps))
    if branch == "big_j":
        return BranchBounds(
            torsion_bound=float(torsion_coefficient(epsilon)) * d * L,
            disc_coefficient=(C1 - 1) * (1 - eps) ** 3 / (1536e4 * d**3 * L**2 * K**4),
            faltings_coefficient=(C1 - 1)
            * (1 - eps) ** 3
            / (1152e4 * d**3 * L**2 * (1 - eps + d * C1) * K**4),
        )
    if branch == "small_j_small_disc":
        C0 = c0(d)
        return BranchBounds(
            torsion_bound=float(torsion_coefficient(epsilon)) * d * L * C0**0.54,
            disc_coefficient=(1 - eps) ** 2 / (4068e4 * C0**1.08 * d**2 * L**2 * K**4),
            faltings_coefficient=(1 - eps) ** 3
            / (339e4 * C0**1.08 * d * L**2 * (1 - eps + d * C1) * K**4),
        )
    if n is None or N is None:
        raise PreconditionViolated("the hard branch needs n and N")
    if branch == "small_j_big_disc_case_I":
        return BranchBounds(
            torsion_bound=12 * N,
            disc_coefficient=n * (n - 1) / (31104 * d * (n + 1) ** 2 * (N + 1) ** 2),
            faltings_coefficient=n * (n - 1) * (1 - eps) / (5184 * (n + 1) ** 2 * (N + 1) ** 2 * (1 + d * C1)),
        )
    return BranchBounds(torsion_bound=12 * N)


# =============================================================================
# Split multiplicative profile
# =============================================================================


def in_S(ord_v: int, N_v: int) -> bool:
    """1/6 <= ord/N <= 5/6, exactly."""
    t = Fraction(ord_v, N_v)
    return Fraction(1, 6) <= t <= Fraction(5, 6)


def in_S_tilde(ord_v: int, N_v: int) -> bool:
    """1/3 <= ord/N <= 2/3, exactly."""
    t = Fraction(ord_v, N_v)
    return Fraction(1, 3) <= t <= Fraction(2, 3)


class SplitProfile(BaseModel):
    """Split multiplicative places of a point, weighted by N_v log p."""

    model_config = ConfigDict(frozen=True)

    place_set_S: dict[int, float]
    place_set_S_tilde: dict[int, float]
    ords: dict[int, int] = Field(..., description="ord_v(P) per split prime")
    N_v: dict[int, int]
    total_weight: float = Field(..., description="Sum of N_v log p over split places")
    discriminant_log: float

    @model_validator(mode="after")
    def _thresholds(self) -> "SplitProfile":
        for p, o in self.ords.items():
            if (p in self.place_set_S) != in_S(o, self.N_v[p]):
                raise ValueError(f"S membership wrong at {p}")
            if (p in self.place_set_S_tilde) != in_S_tilde(o, self.N_v[p]):
                raise ValueError(f"S~ membership wrong at {p}")
        if not self.place_set_S_tilde.keys() <= self.place_set_S.keys():
            raise ValueError("S~(P) must be contained in S(P)")
        return self

    @property
    def weight_S(self) -> float:
        return math.fsum(self.place_set_S.values())

    @property
    def weight_S_tilde(self) -> float:
        return math.fsum(self.place_set_S_tilde.values())


def _split_places(reductions: list[LocalReductionData]) -> list[LocalReductionData]:
    return [r for r in reductions if r.is_split]


def split_mult_profile(
    model: WeierstrassModel,
    P: RationalPoint,
    reductions: list[LocalReductionData] | None = None,
) -> SplitProfile:
    """
    S(P) and S~(P) with weights N_v log p.

    Torsion points are allowed; O sits on the identity component at every place.
    """
    require_on_curve(model, P)
    reductions = reductions if reductions is not None else reduction_table(model)
    ords, Ns, S, S_tilde = {}, {}, {}, {}
    for r in _split_places(reductions):
        o = 0 if P.is_origin else tate_parameter_order(model, P, r.p, r)
        ords[r.p], Ns[r.p] = o, r.N_v
        weight = r.N_v * math.log(r.p)
        if in_S(o, r.N_v):
            S[r.p] = weight
        if in_S_tilde(o, r.N_v):
            S_tilde[r.p] = weight
    return SplitProfile(
        place_set_S=S,
        place_set_S_tilde=S_tilde,
        ords=ords,
        N_v=Ns,
        total_weight=math.fsum(n * math.log(p) for p, n in Ns.items()),
        discriminant_log=math.log(abs(model.discriminant)),
    )


class SDecomposition(BaseModel):
    """S(P) against S~(P) and S~([2]P), place by place."""

    model_config = ConfigDict(frozen=True)

    union_holds: bool
    disjoint_holds: bool
    missing: list[int] = Field(default_factory=list, description="In S(P), in neither S~")
    extra: list[int] = Field(default_factory=list, description="In an S~, not in S(P)")
    overlaps: list[int] = Field(default_factory=list, description="In both S~(P) and S~([2]P)")

    @property
    def holds(self) -> bool:
        return self.union_holds and self.disjoint_holds


def s_decomposition(
    model: WeierstrassModel,
    P: RationalPoint,
    reductions: list[LocalReductionData] | None = None,
) -> SDecomposition:
    """
    Compare S(P) with S~(P) union S~([2]P).

    The union always matches. The two halves overlap exactly when 3 | N_v and
    ord_v(P) is N_v/3 or 2N_v/3; such places are reported, not hidden.
    """
    reductions = reductions if reductions is not None else reduction_table(model)
    here = split_mult_profile(model, P, reductions)
    doubled = split_mult_profile(model, scalar_mul(model, 2, P), reductions)
    S = set(here.place_set_S)
    first, second = set(here.place_set_S_tilde), set(doubled.place_set_S_tilde)
    union = first | second
    result = SDecomposition(
        union_holds=union == S,
        disjoint_holds=not (first & second),
        missing=sorted(S - union),
        extra=sorted(union - S),
        overlaps=sorted(first & second),
    )
    if result.overlaps:
        logger.warning("S~(P) and S~([2]P) overlap at %s for %s on %s", result.overlaps, P, model)
    if not result.union_holds:
        logger.error("S(P) differs from S~(P) | S~([2]P) for %s on %s", P, model)
    return result


def check_S_decomposition(
    model: WeierstrassModel,
    P: RationalPoint,
    reductions: list[LocalReductionData] | None = None,
) -> bool:
    """True iff S(P) is the disjoint union of S~(P) and S~([2]P)."""
    return s_decomposition(model, P, reductions).holds


# =============================================================================
# Pigeonhole
# =============================================================================


@dataclass(frozen=True)
class TorsionDetected:
    order: int


class PigeonholeResult(BaseModel):
    """n multipliers whose points share a torus square of side 1/ceil(23/eps)."""

    model_config = ConfigDict(frozen=True)

    multipliers: list[int] = Field(..., description="m_i - m_0, increasing")
    base: int = Field(..., description="m_0")
    cell: tuple[int, int]
    grid: int
    max_offset: float = Field(..., description="Largest centred torus coordinate among the multiples")


def _check_pigeonhole_params(n: int, N: int, epsilon: Fraction, d: int) -> int:
    K = grid_size(epsilon)
    if N < n * K * K + 1:
        raise ParameterTooSmall(f"N={N} < n ceil(23/eps)^2 + 1 = {n * K * K + 1}")
    floor = pigeonhole_min_n(d, epsilon)
    if n < floor:
        raise ParameterTooSmall(f"n={n} < 200 (d/(1-eps)) log(d/(1-eps)) = {floor}")
    return K


def _cells(alpha: float, beta: float, K: int, start: int, stop: int) -> np.ndarray:
    m = np.arange(start, stop, dtype=np.float64)
    a = np.mod(m * alpha, 1.0)
    b = np.mod(m * beta, 1.0)
    ia = np.minimum((a * K).astype(np.int64), K - 1)
    ib = np.minimum((b * K).astype(np.int64), K - 1)
    return ia * K + ib


def _centred(values: np.ndarray) -> np.ndarray:
    values = np.mod(values, 1.0)
    return np.where(values > 0.5, values - 1.0, values)


def pigeonhole_from_coords(
    alpha: float, beta: float, epsilon: Fraction, n: int, N: int, d: int = 1
) -> PigeonholeResult:
    """
    First torus cell to collect n+1 of the multiples 1..N of (alpha, beta).

    The scan runs in chunks with running cell counts, so the winning cell is
    the one whose (n+1)-th member has the smallest multiplier.
    """
    K = _check_pigeonhole_params(n, N, epsilon, d)
    counts = np.zeros(K * K, dtype=np.int64)
    start = 1
    winner = None
    while start <= N and winner is None:
        stop = min(N + 1, start + PIGEONHOLE_CHUNK)
        cells = _cells(alpha, beta, K, start, stop)
        chunk_counts = np.bincount(cells, minlength=K * K)
        if (counts + chunk_counts).max() >= n + 1:
            order = np.argsort(cells, kind="stable")
            sorted_cells = cells[order]
            best_pos = None
            for cell in np.nonzero(counts + chunk_counts >= n + 1)[0]:
                need = n + 1 - counts[cell]
                first = np.searchsorted(sorted_cells, cell)
                pos = order[first + need - 1]
                if best_pos is None or pos < best_pos:
                    best_pos, winner = pos, int(cell)
            last = start + int(best_pos)
        else:
            counts += chunk_counts
            start = stop
    if winner is None:
        raise ParameterTooSmall("pigeonhole exhausted without a full cell")

    members = np.nonzero(_cells(alpha, beta, K, 1, last + 1) == winner)[0][: n + 1] + 1
    base = int(members[0])
    diffs = members[1:] - base
    offsets = np.maximum(
        np.abs(_centred(diffs * alpha)),
        np.abs(_centred(diffs * beta)),
    )
    max_offset = float(offsets.max()) if len(offsets) else 0.0
    if max_offset > float(epsilon) / HS_CONSTANT + 1e-9:
        raise PreconditionViolated(f"pigeonhole multiples leave the eps/23 square ({max_offset})")
    return PigeonholeResult(
        multipliers=[int(m) for m in diffs],
        base=base,
        cell=(winner // K, winner % K),
        grid=K,
        max_offset=max_offset,
    )


def pigeonhole_multiples(
    model: WeierstrassModel,
    P: RationalPoint,
    epsilon: Fraction,
    n: int,
    N: int,
    periods: PeriodData | None = None,
    d: int = 1,
) -> PigeonholeResult | TorsionDetected:
    """
    Either certify P torsion of order <= N, or return n multipliers in [1, N)
    whose multiples have centred torus coordinates within eps/23.

    Raises:
        ParameterTooSmall: N < n ceil(23/eps)^2 + 1 or n below its floor
    """
    epsilon = Fraction(epsilon)
    _check_pigeonhole_params(n, N, epsilon, d)
    # Torsion over Q has order at most 12
    order = torsion_order(model, P, min(N, MAZUR_BOUND))
    if order is not None:
        return TorsionDetected(order)
    periods = periods or period_lattice(model)
    coords = elliptic_log(model, P, periods)
    return pigeonhole_from_coords(float(coords.alpha), float(coords.beta), epsilon, n, N, d)


# =============================================================================
# Case classification
# =============================================================================


class CaseClassification(BaseModel):
    """Branch of the reduction argument for a point, with every quantity used to decide it."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    branch: Branch
    epsilon: Fraction = Fraction(1, 2)
    C1: Fraction = Fraction(2)
    C0: float
    log_j1: float = Field(..., description="log^(1)|j|")
    log_disc: float = Field(..., description="log|Delta_min|")
    abs_disc: int
    j_threshold: float = Field(..., description="C1/(1-eps) log|Delta_min|")
    Z: int | None = None
    n: int | None = None
    N: int | None = None
    torsion_order: int | None = None
    phi: int | None = Field(None, description="Ordered pairs with delta^S >= log|Delta|/5")
    heavy_sum: float | None = None
    case_one_lhs: float | None = None
    witnesses: list[int] | None = Field(None, description="Z+1 multipliers for case II")
    witness_status: Literal["found", "not_found", "not_applicable"] = "not_applicable"

    @model_validator(mode="after")
    def _branch_predicate(self) -> "CaseClassification":
        big_j = self.log_j1 >= self.j_threshold
        small_disc = self.abs_disc <= self.C0
        if self.branch == "big_j":
            ok = big_j
        elif self.branch == "small_j_small_disc":
            ok = not big_j and small_disc
        else:
            ok = not big_j and not small_disc and self.n is not None
            if ok and self.torsion_order is None:
                case_one = self.case_one_lhs >= self.log_disc / CASE_ONE_FRACTION
                ok = case_one == (self.branch == "small_j_big_disc_case_I")
        if not ok:
            raise ValueError(f"branch {self.branch} fails its own predicate")
        return self


def _split_residues(model: WeierstrassModel, P: RationalPoint, reductions) -> list[tuple[int, int, float]]:
    return [
        (tate_parameter_order(model, P, r.p, r), r.N_v, r.N_v * math.log(r.p))
        for r in _split_places(reductions)
    ]


def _delta_S(residues, ks: np.ndarray) -> np.ndarray:
    """delta^S([k]P) for an array of multipliers k, from ord_v([k]P) = k ord_v(P) mod N_v."""
    total = np.zeros(len(ks))
    for o, N_v, weight in residues:
        r = np.mod(ks * o, N_v)
        total += np.where((6 * r >= N_v) & (6 * r <= 5 * N_v), weight, 0.0)
    return total


def _pair_statistics(residues, multipliers: list[int], log_disc: float) -> tuple[int, float]:
    """phi and the sum of delta^S over heavy ordered pairs of [12 m_i]P - [12 m_j]P."""
    m = np.asarray(multipliers, dtype=np.int64)
    threshold = log_disc / PAIR_THRESHOLD_FRACTION
    phi, heavy = 0, 0.0
    for i in range(len(m) - 1):
        ks = 12 * (m[i + 1 :] - m[i])
        delta = _delta_S(residues, ks)
        mask = delta >= threshold
        # delta^S is even in k, so each unordered pair counts twice
        phi += 2 * int(mask.sum())
        heavy += 2 * float(delta[mask].sum())
    return phi, heavy


def _case_two_witnesses(residues, Z: int, window: int, log_disc: float) -> list[int] | None:
    """
    Z+1 multipliers m with S~([m]P) weights overlapping a pivot by log|Delta|/550.

    Multipliers are grouped by their S~ pattern, so the pivot scan is over
    patterns with multiplicities.
    """
    if not residues:
        return None
    threshold = log_disc / CASE_TWO_FRACTION
    groups: dict[int, list[int]] = {}
    for m in range(1, window + 1):
        mask = 0
        for bit, (o, N_v, _) in enumerate(residues):
            if in_S_tilde((m * o) % N_v, N_v):
                mask |= 1 << bit
        groups.setdefault(mask, []).append(m)

    def weight(mask: int) -> float:
        return math.fsum(w for bit, (_, _, w) in enumerate(residues) if mask >> bit & 1)

    for pivot in sorted(groups, key=lambda k: groups[k][0]):
        if weight(pivot) < threshold:
            continue
        partners = [
            m
            for other, ms in groups.items()
            if weight(pivot & other) >= threshold
            for m in ms
            if m != groups[pivot][0]
        ]
        if len(partners) >= Z:
            return [groups[pivot][0], *sorted(partners)[:Z]]
    return None


def classify_case(
    model: WeierstrassModel,
    P: RationalPoint,
    reductions: list[LocalReductionData] | None = None,
    periods: PeriodData | None = None,
    config: RunConfig | None = None,
) -> CaseClassification:
    """
    Decide the branch of the reduction argument for P.

    big_j when log^(1)|j| >= C1/(1-eps) log|Delta_min|; otherwise
    small_j_small_disc when |Delta_min| <= C0(d); otherwise the hard branch,
    where the pigeonhole runs on [12]P and the Case I/II disjunction is
    evaluated at the 1/6 threshold.

    Raises:
        PreconditionViolated: model is not globally minimal
    """
    config = config or load_config()
    if abs(global_minimal_model(model).discriminant) != abs(model.discriminant):
        raise PreconditionViolated(f"{model} is not globally minimal")
    eps, C1, d = config.epsilon, config.c1, config.d
    disc = model.discriminant
    log_disc = math.log(abs(disc))
    common = {
        "epsilon": eps,
        "C1": C1,
        "C0": c0(d),
        "log_j1": log1_abs(model.j_invariant),
        "log_disc": log_disc,
        "abs_disc": abs(disc),
        "j_threshold": float(C1 / (1 - eps)) * log_disc,
    }
    if common["log_j1"] >= common["j_threshold"]:
        return CaseClassification(branch="big_j", **common)
    if abs(disc) <= common["C0"]:
        return CaseClassification(branch="small_j_small_disc", **common)

    Z = config.case_two_z
    n, N = hard_branch_parameters(d, eps, Z)
    hard = {**common, "Z": Z, "n": n, "N": N}
    order = torsion_order(model, P)
    if order is not None:
        # The disjunction concerns points of infinite order; torsion is bounded by 12N either way
        return CaseClassification(branch="small_j_big_disc_case_I", torsion_order=order, **hard)

    reductions = reductions if reductions is not None else reduction_table(model)
    periods = periods or period_lattice(model, config.precision_bits)
    coords = elliptic_log(model, P, periods)
    alpha12 = float((12 * coords.alpha) % 1)
    beta12 = float((12 * coords.beta) % 1)
    pigeon = pigeonhole_from_coords(alpha12, beta12, eps, n, N, d)
    residues = _split_residues(model, P, reductions)
    phi, heavy = _pair_statistics(residues, pigeon.multipliers, log_disc)
    pairs = n * (n - 1)
    lhs = log_disc - 4 * (pairs - phi) / (5 * pairs) * log_disc - 4 / pairs * heavy
    logger.info("hard branch for %s: n=%d N=%d phi=%d lhs=%.6f", P, n, N, phi, lhs)

    if lhs >= log_disc / CASE_ONE_FRACTION:
        return CaseClassification(
            branch="small_j_big_disc_case_I", phi=phi, heavy_sum=heavy, case_one_lhs=lhs, **hard
        )
    window = min(config.witness_window, 24 * (N - 1))
    witnesses = _case_two_witnesses(residues, Z, window, log_disc)
    if witnesses is None:
        logger.warning("case II for %s on %s: no witnesses among multipliers 1..%d", P, model, window)
    return CaseClassification(
        branch="small_j_big_disc_case_II",
        phi=phi,
        heavy_sum=heavy,
        case_one_lhs=lhs,
        witnesses=witnesses,
        witness_status="found" if witnesses else "not_found",
        **hard,
    )


# =============================================================================
# Verification
# =============================================================================


class VerificationRecord(BaseModel):
    """Torsion or height inequalities of the main bound, evaluated on one point."""

    model_config = ConfigDict(frozen=True)

    d: int
    constants: TheoremConstants
    torsion_order: int | None
    canonical_height: float
    log_disc: float
    h_F: float
    torsion_margin: float | None = Field(None, description="B_d - Ord(P)")
    disc_margin: float | None = Field(None, description="hat-h - C_d log|Delta_min|")
    faltings_margin: float | None = Field(None, description="hat-h - C_d' h_F")
    branch: Branch | None = None
    branch_margins: dict[str, float] = Field(default_factory=dict)

    @property
    def holds(self) -> bool:
        margins = [self.torsion_margin, self.disc_margin, self.faltings_margin]
        margins += list(self.branch_margins.values())
        return all(m >= 0 for m in margins if m is not None)


def _branch_margins(
    classification: CaseClassification,
    order: int | None,
    height: float,
    log_disc: float,
    h_F: float,
    d: int,
) -> dict[str, float]:
    c = classification
    bounds = branch_bounds(c.branch, d, c.epsilon, c.C1, c.n, c.N)
    margins: dict[str, float] = {}
    if order is not None:
        margins["torsion"] = bounds.torsion_bound - order
        return margins
    if bounds.disc_coefficient is not None:
        margins["height_vs_disc"] = height - bounds.disc_coefficient * log_disc
    if bounds.faltings_coefficient is not None:
        margins["height_vs_faltings"] = height - bounds.faltings_coefficient * h_F
    if c.branch != "big_j":
        cap = (1 + float(c.C1) * d / (1 - float(c.epsilon))) * log_disc / (12 * d)
        margins["faltings_upper"] = cap - h_F
    return margins


def verify_main_theorem(
    model: WeierstrassModel,
    P: RationalPoint,
    config: RunConfig | None = None,
    classification: CaseClassification | None = None,
) -> VerificationRecord:
    """
    Evaluate Ord(P) <= B_d, or hat-h(P) >= C_d log|Delta_min| and hat-h(P) >= C_d' h_F.

    The point is moved to the global minimal model. Failures are logged and
    recorded as negative margins, never raised.
    """
    config = config or load_config()
    minimal = global_minimal_model(model)
    P = minimal.transform.map_point(P)
    model = minimal.model
    d = config.d
    constants = TheoremConstants.for_degree(d)
    periods = period_lattice(model, config.precision_bits)
    report = canonical_height(model, P, config.precision_bits, config.doublings, periods)
    h_F = float(faltings_height(model, periods))
    log_disc = math.log(abs(model.discriminant))
    order = report.torsion_order

    fields: dict = {}
    if order is not None:
        fields["torsion_margin"] = constants.B_d - order
    else:
        fields["disc_margin"] = report.canonical_height - constants.C_d * log_disc
        fields["faltings_margin"] = report.canonical_height - constants.C_d_prime * h_F

    if classification is not None:
        fields["branch"] = classification.branch
        fields["branch_margins"] = _branch_margins(
            classification, order, report.canonical_height, log_disc, h_F, d
        )

    record = VerificationRecord(
        d=d,
        constants=constants,
        torsion_order=order,
        canonical_height=report.canonical_height,
        log_disc=log_disc,
        h_F=h_F,
        **fields,
    )
    if not record.holds:
        logger.error("bound violated for %s on %s: %s", P, model, record.model_dump())
    return record


class LangCheckReport(BaseModel):
    """Profile, decomposition, branch and verification of one point."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: WeierstrassModel
    point: RationalPoint
    profile: SplitProfile
    decomposition: SDecomposition
    classification: CaseClassification
    verification: VerificationRecord

    def to_record(self) -> dict:
        v, c = self.verification, self.classification
        return {
            "curve": str(self.model),
            "point": str(self.point),
            "branch": c.branch,
            "S": ",".join(map(str, sorted(self.profile.place_set_S))),
            "S_tilde": ",".join(map(str, sorted(self.profile.place_set_S_tilde))),
            "decomposition_union": self.decomposition.union_holds,
            "decomposition_disjoint": self.decomposition.disjoint_holds,
            "torsion_order": v.torsion_order,
            "canonical_height": v.canonical_height,
            "h_F": v.h_F,
            "torsion_margin": v.torsion_margin,
            "disc_margin": v.disc_margin,
            "faltings_margin": v.faltings_margin,
            "witness_status": c.witness_status,
            "holds": v.holds,
        }


def lang_check(
    model: WeierstrassModel, P: RationalPoint, config: RunConfig | None = None
) -> LangCheckReport:
    """Profile, S-decomposition, classification and verification for one point."""
    config = config or load_config()
    require_on_curve(model, P)
    minimal = global_minimal_model(model)
    P = minimal.transform.map_point(P)
    model = minimal.model
    reductions = reduction_table(model)
    periods = period_lattice(model, config.precision_bits)
    classification = classify_case(model, P, reductions, periods, config)
    return LangCheckReport(
        model=model,
        point=P,
        profile=split_mult_profile(model, P, reductions),
        decomposition=s_decomposition(model, P, reductions),
        classification=classification,
        verification=verify_main_theorem(model, P, config, classification),
    )
