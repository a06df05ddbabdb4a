"""
Command-line interface for lang_heights.

Each module is drivable on its own through a subcommand; `pipeline` runs the
whole chain over a corpus file.

Usage:
    lang-heights invariants --curve 0,0,1,-1,0
    lang-heights height --curve 0,0,1,-1,0 --point 0,0
    lang-heights lang-check --curve 0,0,1,-1,0 --point 0,0 --format json
    lang-heights slope-budget --d 2 --table constants
    lang-heights pipeline --corpus sample_data/curves.txt --format csv

Exit codes: 0 success, 1 inequality violation found, 2 input error.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction

import pandas as pd
from rich.table import Table

from .arch_analytic import faltings_bound_check, period_lattice
from .config import RunConfig, add_output_args, add_precision_args, load_config
from .curve_core import (
    compute_NE,
    conductor,
    global_minimal_model,
    is_semistable,
    reduction_table,
    require_on_curve,
)
from .errors import INPUT_ERRORS, LangHeightsError
from .height_engine import canonical_height
from .lang_verifier import lang_check
from .lemma_oracles import (
    CombiInstance,
    ProofOfAbsence,
    combi_select,
    fmax_bruteforce,
    fmax_split_values,
    split_values_consistent,
)
from .reports import emit_report, parse_corpus, parse_model, parse_point, pipeline_exit_code, run_pipeline_sync
from .slope_budget import (
    WORST_FALTINGS_RATIO,
    budget_terms,
    choose_parameters,
    constants_table,
    h0_floor,
    minimal_zeros_z,
    t_bound_audit,
)
from .utils import console, get_sample_data_path, print_header, print_section, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2


# =============================================================================
# Output helpers
# =============================================================================


def _emit(rows: list[dict], fmt: str | None, title: str) -> None:
    """Print rows as JSON, CSV, or a rich table."""
    if fmt == "json":
        sys.stdout.write(json.dumps(rows, indent=2, default=str) + "\n")
    elif fmt == "csv":
        sys.stdout.write(pd.DataFrame(rows).to_csv(index=False, lineterminator="\n"))
    else:
        _table(rows, title)


def _table(rows: list[dict], title: str) -> None:
    table = Table(title=title, show_lines=False)
    columns = list(dict.fromkeys(k for row in rows for k in row))
    for column in columns:
        table.add_column(column, overflow="fold")
    for row in rows:
        table.add_row(*(_cell(row.get(c)) for c in columns))
    console.print(table)


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, bool):
        return "[green]yes[/green]" if value else "[red]no[/red]"
    return str(value)


def _curve_and_point(args, need_point: bool):
    if not args.curve:
        raise argparse.ArgumentTypeError("--curve is required")
    model = parse_model(args.curve)
    if not need_point:
        return model, None
    if not args.point:
        raise argparse.ArgumentTypeError("--point is required")
    P = parse_point(args.point)
    require_on_curve(model, P)
    return model, P


# =============================================================================
# Subcommands
# =============================================================================


def cmd_invariants(args, config: RunConfig) -> int:
    model, _ = _curve_and_point(args, need_point=False)
    minimal = global_minimal_model(model)
    inv = model.invariants
    row = {
        "model": str(model),
        "b2": inv.b2,
        "b4": inv.b4,
        "b6": inv.b6,
        "b8": inv.b8,
        "c4": inv.c4,
        "c6": inv.c6,
        "discriminant": inv.discriminant,
        "j": str(inv.j),
        "minimal_model": str(minimal.model),
        "minimal_discriminant": minimal.discriminant,
    }
    _emit([row], args.format, "Invariants")
    return EXIT_OK


def cmd_reduce(args, config: RunConfig) -> int:
    model, _ = _curve_and_point(args, need_point=False)
    reductions = reduction_table(global_minimal_model(model).model)
    rows = [r.model_dump() for r in reductions]
    _emit(rows, args.format, "Reduction")
    if args.format is None:
        console.print(
            f"N_E = {compute_NE(reductions)}   conductor = {conductor(reductions)}   "
            f"semistable = {is_semistable(reductions)}"
        )
    return EXIT_OK


def cmd_height(args, config: RunConfig) -> int:
    model, P = _curve_and_point(args, need_point=True)
    report = canonical_height(model, P, config.precision_bits, config.doublings)
    if args.format:
        _emit([report.to_record()], args.format, "Height")
    else:
        print_header(f"Canonical height of {report.point}")
        _table([{**t.model_dump(), "meets_floor": t.meets_floor} for t in report.terms], "Local heights")
        _table([report.to_record()], "Summary")
    floors_ok = all(t.meets_floor for t in report.terms)
    return EXIT_OK if report.agrees and floors_ok else EXIT_VIOLATION


def cmd_faltings(args, config: RunConfig) -> int:
    model, _ = _curve_and_point(args, need_point=False)
    minimal = global_minimal_model(model).model
    report = faltings_bound_check(minimal, period_lattice(minimal, config.precision_bits, config.guard_bits))
    _emit([report.model_dump()], args.format, "Faltings height")
    return EXIT_OK if report.recomputed_holds else EXIT_VIOLATION


def cmd_lang_check(args, config: RunConfig) -> int:
    model, P = _curve_and_point(args, need_point=True)
    report = lang_check(model, P, config)
    _emit([report.to_record()], args.format, "Lower bound check")
    if args.format is None:
        _table([report.verification.branch_margins or {"-": None}], "Branch margins")
    ok = report.verification.holds and report.decomposition.union_holds
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_slope_budget(args, config: RunConfig) -> int:
    d = config.d
    if args.table == "t-bounds":
        frame = t_bound_audit(range(1, (args.d or 5) + 1), range(1, (args.ne or 10) + 1))
        _emit(frame.to_dict("records"), args.format, "t-bound audit")
        return EXIT_OK
    if args.table == "constants":
        frame = constants_table(d)
        _emit(frame.to_dict("records"), args.format, f"Constants at d={d}")
        return EXIT_OK

    log_delta = args.log_disc if args.log_disc is not None else h0_floor(d)
    h_F = args.h_f if args.h_f is not None else float(WORST_FALTINGS_RATIO) * log_delta
    params = choose_parameters(d, args.ne or 1, log_delta, h_F, enforce_h0=not args.ignore_h0)
    budget = budget_terms(params)
    row = {**params.model_dump(), **budget.model_dump(exclude={"zeros"})}
    row["zeros_ok"] = budget.zeros_ok
    row["minimal_Z"] = minimal_zeros_z(params)
    row["violations"] = ",".join(sorted(budget.violations))
    _emit([row], args.format, "Slope budget")
    return EXIT_OK


def cmd_oracles(args, config: RunConfig) -> int:
    rows = []
    for N in range(1, args.max_range + 1):
        for n in range(1, min(N, args.max_n) + 1):
            instance = fmax_bruteforce(N, n)
            rows.append(
                {
                    "N": N,
                    "n": n,
                    "value": instance.value_bruteforce,
                    "bound": str(instance.bound),
                    "closed_form": None if instance.closedform is None else str(instance.closedform),
                    "splits_consistent": split_values_consistent(fmax_split_values(N, n)),
                }
            )
    _emit(rows, args.format, "Spread maximum")

    combi = CombiInstance.build(
        {"a": 1, "b": 1, "c": 1},
        [{"a", "b"}, {"a", "b"}, {"a", "c"}, {"a", "c"}, {"b", "c"}],
        Fraction(3, 2),
        2,
    )
    selection = combi_select(combi)
    if args.format is None:
        print_section("Combinatorial selection, l=3/2, Z=2, n=5")
        if isinstance(selection, ProofOfAbsence):
            console.print(f"no selection; partner counts {selection.partner_counts}, needed {selection.needed}")
        else:
            console.print(f"selection {selection}")
    return EXIT_OK


def cmd_pipeline(args, config: RunConfig) -> int:
    path = args.corpus or get_sample_data_path("curves.txt")
    records = parse_corpus(path, strict=False)
    reports = run_pipeline_sync(records, config)
    if args.format:
        sys.stdout.buffer.write(emit_report(reports, args.format))
        sys.stdout.flush()
    else:
        rows = []
        for r in reports:
            points = [h.get("point") for h in r.heights]
            rows.append(
                {
                    "line": r.line_number,
                    "label": r.label,
                    "N_E": r.N_E,
                    "points": ", ".join(map(str, points)) or None,
                    "violations": len(r.violations),
                    "findings": len(r.findings),
                    "error": r.error_kind,
                }
            )
        _table(rows, f"Pipeline over {path}")
    return pipeline_exit_code(reports)


# =============================================================================
# Entry point
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lang-heights",
        description="Canonical heights, reduction data, Faltings heights and lower-bound audits",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def subcommand(name: str, handler, summary: str, curve: bool = True, point: bool = False):
        sub = subparsers.add_parser(name, help=summary)
        if curve:
            sub.add_argument("--curve", type=str, help="a1,a2,a3,a4,a6")
        if point:
            sub.add_argument("--point", type=str, help="x,y as integers or fractions n/d")
        add_precision_args(sub)
        add_output_args(sub)
        sub.set_defaults(handler=handler)
        return sub

    subcommand("invariants", cmd_invariants, "b/c-invariants, discriminant, j and the minimal model")
    subcommand("reduce", cmd_reduce, "Tate's algorithm at every bad prime")
    subcommand("height", cmd_height, "Canonical height with its local decomposition", point=True)
    subcommand("faltings", cmd_faltings, "Faltings height and its discriminant bound")
    subcommand("lang-check", cmd_lang_check, "Classify a point and check the lower bound", point=True)

    budget = subcommand("slope-budget", cmd_slope_budget, "Parameter budget and constant audits", curve=False)
    budget.add_argument("--d", type=int, default=None, help="Field degree (default: 1)")
    budget.add_argument("--ne", type=int, default=None, help="N_E, or the largest N_E for t-bounds")
    budget.add_argument("--table", choices=["budget", "t-bounds", "constants"], default="budget")
    budget.add_argument("--log-disc", type=float, default=None, help="log|N Delta| (default: the floor)")
    budget.add_argument("--h-f", type=float, default=None, help="h_F (default: log|N Delta| / 4)")
    budget.add_argument("--ignore-h0", action="store_true", help="Evaluate below the log|N Delta| floor")

    oracles = subcommand("oracles", cmd_oracles, "Exhaustive checks of the combinatorial lemmas", curve=False)
    oracles.add_argument("--max-n", type=int, default=6)
    oracles.add_argument("--max-range", type=int, default=12)

    pipeline = subcommand("pipeline", cmd_pipeline, "Run everything over a corpus", curve=False)
    pipeline.add_argument("--corpus", type=str, default=None, help="Corpus file (default: sample_data/curves.txt)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(
            precision_bits=args.precision_bits,
            epsilon=args.epsilon,
            c1=args.c1,
            d=getattr(args, "d", None),
            log_level=args.log_level,
        )
        setup_logging(config.log_level, config.log_file)
        return args.handler(args, config)
    except argparse.ArgumentTypeError as e:
        console.print(f"[red]error:[/red] {e}")
        return EXIT_INPUT_ERROR
    except INPUT_ERRORS as e:
        console.print(f"[red]{type(e).__name__}:[/red] {e}")
        return EXIT_INPUT_ERROR
    except LangHeightsError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
