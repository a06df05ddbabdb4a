"""
Corpus ingestion, the batch pipeline, and report emission.

Corpus format, one curve per line, `#` starts a comment:

    a1,a2,a3,a4,a6[;label[;P=xn/xd,yn/yd[;P=...]]]

Usage:
    from lang_heights.reports import parse_corpus, run_pipeline_sync, emit_report

    records = parse_corpus("sample_data/curves.txt", strict=False)
    reports = run_pipeline_sync(records)
    print(emit_report(reports, "json").decode())
"""

import asyncio
import dataclasses
import json
import logging
import math
from fractions import Fraction
from pathlib import Path

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from .arch_analytic import faltings_bound_check, period_lattice
from .config import RunConfig, load_config
from .curve_core import (
    RationalPoint,
    WeierstrassModel,
    compute_NE,
    conductor,
    factor_integer,
    global_minimal_model,
    is_semistable,
    reduction_table,
    require_on_curve,
)
from .errors import LangHeightsError, ParseError, PointNotOnCurve, UnknownFormat
from .height_engine import canonical_height
from .lang_verifier import lang_check
from .lemma_oracles import ne_bound_check
from .slope_budget import budget_terms, choose_parameters

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")

CSV_COLUMNS = [
    "label",
    "line_number",
    "coefficients",
    "precision_bits",
    "discriminant",
    "conductor",
    "N_E",
    "semistable",
    "h_F",
    "point",
    "canonical_height",
    "canonical_height_bsd",
    "oracle_height",
    "discrepancy",
    "torsion_order",
    "branch",
    "witness_status",
    "decomposition_union",
    "decomposition_disjoint",
    "torsion_margin",
    "disc_margin",
    "faltings_margin",
    "holds",
    "slack",
    "zeros_ok",
    "violations",
    "findings",
    "error",
]


# =============================================================================
# Ingestion
# =============================================================================


class CurveRecord(BaseModel):
    """One corpus line: a validated model and points on it."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str | None = None
    line_number: int = 0
    model: WeierstrassModel
    points: list[RationalPoint] = Field(default_factory=list)

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self.model.coefficients


class RecordFailure(BaseModel):
    """A corpus line that could not be ingested."""

    model_config = ConfigDict(frozen=True)

    line_number: int
    label: str | None = None
    error_kind: str
    message: str


def parse_model(text: str) -> WeierstrassModel:
    """
    "a1,a2,a3,a4,a6" to a model.

    Raises:
        ParseError: wrong field count or a non-integer field (line 0)
        SingularModel: discriminant is zero
    """
    fields = [f.strip() for f in text.split(",")]
    if len(fields) != 5:
        raise ParseError(0, f"expected five coefficients, got {len(fields)}")
    try:
        coefficients = [int(f) for f in fields]
    except ValueError as e:
        raise ParseError(0, f"non-integer coefficient in {text!r}") from e
    return WeierstrassModel(*coefficients)


def parse_point(text: str) -> RationalPoint:
    """
    "xn/xd,yn/yd" (or integers) to an affine point.

    Example:
        >>> parse_point("0/1,-1")
        RationalPoint(x=Fraction(0, 1), y=Fraction(-1, 1))
    """
    fields = [f.strip() for f in text.split(",")]
    if len(fields) != 2:
        raise ParseError(0, f"expected x,y in {text!r}")
    try:
        return RationalPoint.affine(Fraction(fields[0]), Fraction(fields[1]))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(0, f"bad rational coordinate in {text!r}") from e


def _parse_line(line: str, line_number: int) -> CurveRecord:
    parts = [p.strip() for p in line.split(";")]
    try:
        model = parse_model(parts[0])
    except ParseError as e:
        raise ParseError(line_number, str(e).split(": ", 1)[-1]) from e

    label = None
    points = []
    for part in parts[1:]:
        if part.startswith("P="):
            try:
                points.append(parse_point(part[2:]))
            except ParseError as e:
                raise ParseError(line_number, str(e).split(": ", 1)[-1]) from e
        elif label is None and not points:
            label = part or None
        else:
            raise ParseError(line_number, f"unexpected field {part!r}")

    for P in points:
        if not model.contains(P):
            raise PointNotOnCurve(P.x, P.y, model.coefficients)
    return CurveRecord(label=label, line_number=line_number, model=model, points=points)


def parse_corpus(path, strict: bool = True) -> list[CurveRecord] | list[CurveRecord | RecordFailure]:
    """
    Read a corpus file.

    Args:
        path: Corpus file
        strict: Raise on the first bad line; otherwise bad lines come back as
            RecordFailure entries in file order

    Raises:
        ParseError: malformed line (strict)
        SingularModel: zero discriminant (strict)
        PointNotOnCurve: point not on its curve (strict)
    """
    path = Path(path)
    if not path.exists():
        raise ParseError(0, f"corpus file not found: {path}")
    entries: list = []
    for line_number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            entries.append(_parse_line(line, line_number))
        except LangHeightsError as e:
            if strict:
                raise
            parts = line.split(";")
            label = parts[1].strip() if len(parts) > 1 and not parts[1].strip().startswith("P=") else None
            logger.warning("line %d skipped: %s", line_number, e)
            entries.append(
                RecordFailure(
                    line_number=line_number,
                    label=label,
                    error_kind=type(e).__name__,
                    message=str(e),
                )
            )
    logger.info("read %d corpus entries from %s", len(entries), path)
    return entries


# =============================================================================
# Reports
# =============================================================================


class Report(BaseModel):
    """Everything computed for one curve; lists under heights/classification/margins align by point."""

    label: str | None = None
    line_number: int = 0
    precision_bits: int
    coefficients: list[int] = Field(default_factory=list)
    minimal_coefficients: list[int] = Field(default_factory=list)
    invariants: dict = Field(default_factory=dict)
    reduction: list[dict] = Field(default_factory=list)
    N_E: int | None = None
    semistable: bool | None = None
    conductor: int | None = None
    faltings: dict = Field(default_factory=dict)
    heights: list[dict] = Field(default_factory=list)
    classification: list[dict] = Field(default_factory=list)
    margins: list[dict] = Field(default_factory=list)
    oracles: dict = Field(default_factory=dict)
    budget: dict = Field(default_factory=dict)
    violations: list[str] = Field(default_factory=list, description="Failed inequalities")
    findings: list[str] = Field(default_factory=list, description="Audit warnings")
    error_kind: str | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def _invariants_record(model: WeierstrassModel) -> dict:
    record = dataclasses.asdict(model.invariants)
    record["j"] = str(record["j"])
    return record


def _point_reports(model: WeierstrassModel, P: RationalPoint, config: RunConfig, periods) -> tuple[dict, dict, dict, list[str], list[str]]:
    violations, findings = [], []
    height = canonical_height(model, P, config.precision_bits, config.doublings, periods)
    heights = height.to_record()
    heights["floors_ok"] = all(t.meets_floor for t in height.terms)
    if not heights["floors_ok"]:
        violations.append(f"{P}: local height below -N_v/24")
    if not height.agrees:
        violations.append(f"{P}: local sum and oracle disagree")

    checked = lang_check(model, P, config)
    classification = checked.classification.model_dump(mode="json")
    classification["decomposition_union"] = checked.decomposition.union_holds
    classification["decomposition_disjoint"] = checked.decomposition.disjoint_holds
    if not checked.decomposition.union_holds:
        violations.append(f"{P}: S is not covered by S~(P) and S~(2P)")
    if not checked.decomposition.disjoint_holds:
        findings.append(f"{P}: S~(P) and S~(2P) overlap")
    if checked.classification.witness_status == "not_found":
        findings.append(f"{P}: no case II witnesses in the scanned window")

    margins = checked.verification.model_dump(mode="json", exclude={"constants"})
    margins["holds"] = checked.verification.holds
    if not checked.verification.holds:
        violations.append(f"{P}: main bound or branch bound violated")
    return heights, classification, margins, violations, findings


def build_report(record: CurveRecord | RecordFailure, config: RunConfig | None = None) -> Report:
    """
    Full per-curve report. Module errors are caught and recorded on the report.
    """
    config = config or load_config()
    if isinstance(record, RecordFailure):
        return Report(
            label=record.label,
            line_number=record.line_number,
            precision_bits=config.precision_bits,
            error_kind=record.error_kind,
            error=record.message,
        )

    report = Report(
        label=record.label,
        line_number=record.line_number,
        precision_bits=config.precision_bits,
        coefficients=list(record.coefficients),
    )
    try:
        require_on_curve(record.model, *record.points)
        minimal = global_minimal_model(record.model)
        model = minimal.model
        reductions = reduction_table(model)
        periods = period_lattice(model, config.precision_bits, config.guard_bits)
        report.minimal_coefficients = list(model.coefficients)
        report.invariants = _invariants_record(model)
        report.reduction = [r.model_dump() for r in reductions]
        report.N_E = compute_NE(reductions)
        report.semistable = is_semistable(reductions)
        report.conductor = conductor(reductions)

        faltings = faltings_bound_check(model, periods)
        report.faltings = faltings.model_dump()
        if not faltings.recomputed_holds:
            report.violations.append("h_F above the recomputed discriminant bound")
        if not faltings.stated_holds:
            report.findings.append("h_F above the bound with the printed constant")

        ne = ne_bound_check(factor_integer(abs(model.discriminant)))
        report.oracles = {"N_E_bound": ne.model_dump()}
        if not ne.holds:
            report.violations.append("N_E above |Delta_min|^0.54")

        log_n_delta = math.log(report.conductor * abs(model.discriminant))
        params = choose_parameters(1, report.N_E, log_n_delta, faltings.h_F, enforce_h0=False)
        budget = budget_terms(params)
        report.budget = {
            "parameters": params.model_dump(),
            **budget.model_dump(exclude={"zeros"}),
            "zeros_ok": budget.zeros_ok,
            "violations": sorted(budget.violations),
        }
        if not budget.zeros_ok:
            report.findings.append("zeros-lemma condition fails for the chosen parameters")
    except LangHeightsError as e:
        logger.error("curve %s (line %d) failed: %s", record.label or record.model, record.line_number, e)
        report.error_kind, report.error = type(e).__name__, str(e)
        return report

    for P in record.points:
        P_min = minimal.transform.map_point(P)
        try:
            heights, classification, margins, violations, findings = _point_reports(model, P_min, config, periods)
        except LangHeightsError as e:
            logger.error("point %s on %s failed: %s", P, model, e)
            failure = {"point": str(P_min), "error": f"{type(e).__name__}: {e}"}
            heights, classification, margins = dict(failure), dict(failure), dict(failure)
            violations, findings = [], [failure["error"]]
        report.heights.append(heights)
        report.classification.append(classification)
        report.margins.append(margins)
        report.violations.extend(violations)
        report.findings.extend(findings)

    if report.violations:
        logger.error("%s: %s", record.label or model, "; ".join(report.violations))
    return report


async def run_pipeline(records, config: RunConfig | None = None) -> list[Report]:
    """
    Build every report on a bounded pool of worker threads.

    Results keep input order; a failing record yields an errored report and
    never suppresses the others.
    """
    config = config or load_config()
    semaphore = asyncio.Semaphore(config.workers)

    async def bounded(record) -> Report:
        async with semaphore:
            return await asyncio.to_thread(build_report, record, config)

    reports = await asyncio.gather(*(bounded(r) for r in records))
    logger.info(
        "pipeline finished: %d reports, %d errored, %d with violations",
        len(reports),
        sum(r.failed for r in reports),
        sum(bool(r.violations) for r in reports),
    )
    return list(reports)


def run_pipeline_sync(records, config: RunConfig | None = None) -> list[Report]:
    """run_pipeline for callers without an event loop."""
    return asyncio.run(run_pipeline(list(records), config))


def pipeline_exit_code(reports: list[Report]) -> int:
    """1 when any report records a violated inequality, else 0. Errored records do not count."""
    return 1 if any(r.violations for r in reports) else 0


# =============================================================================
# Emission
# =============================================================================


def _csv_rows(reports: list[Report]) -> list[dict]:
    rows = []
    for r in reports:
        base = {
            "label": r.label,
            "line_number": r.line_number,
            "coefficients": ",".join(map(str, r.coefficients)),
            "precision_bits": r.precision_bits,
            "discriminant": r.invariants.get("discriminant"),
            "conductor": r.conductor,
            "N_E": r.N_E,
            "semistable": r.semistable,
            "h_F": r.faltings.get("h_F"),
            "slack": r.budget.get("slack"),
            "zeros_ok": r.budget.get("zeros_ok"),
            "violations": " | ".join(r.violations),
            "findings": " | ".join(r.findings),
            "error": r.error,
        }
        if not r.heights:
            rows.append(base)
            continue
        for heights, classification, margins in zip(r.heights, r.classification, r.margins, strict=True):
            row = dict(base)
            row.update({k: heights.get(k) for k in ("point", "canonical_height", "canonical_height_bsd", "oracle_height", "discrepancy", "torsion_order")})
            row.update({k: classification.get(k) for k in ("branch", "witness_status", "decomposition_union", "decomposition_disjoint")})
            row.update({k: margins.get(k) for k in ("torsion_margin", "disc_margin", "faltings_margin", "holds")})
            if "error" in heights:
                row["error"] = heights["error"]
            rows.append(row)
    return rows


def emit_report(reports: list[Report], format: str = "json") -> bytes:
    """
    Serialise reports.

    Args:
        reports: Pipeline output
        format: "json" (one object per curve) or "csv" (one row per curve and point)

    Returns:
        UTF-8 bytes; identical inputs give identical bytes

    Raises:
        UnknownFormat: format not in FORMATS
    """
    if format == "json":
        payload = [r.model_dump(mode="json") for r in reports]
        return (json.dumps(payload, indent=2, default=str) + "\n").encode("utf-8")
    if format == "csv":
        frame = pd.DataFrame(_csv_rows(reports), columns=CSV_COLUMNS)
        return frame.to_csv(index=False, lineterminator="\n").encode("utf-8")
    raise UnknownFormat(f"unknown format {format!r}; choose one of {', '.join(FORMATS)}")
