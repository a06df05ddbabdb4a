"""Tests for corpus ingestion, the batch pipeline and report emission."""

import json
from fractions import Fraction

import pytest

from lang_heights.curve_core import RationalPoint
from lang_heights.errors import ParseError, PointNotOnCurve, SingularModel, UnknownFormat
from lang_heights.reports import (
    CSV_COLUMNS,
    CurveRecord,
    RecordFailure,
    build_report,
    emit_report,
    parse_corpus,
    parse_model,
    parse_point,
    pipeline_exit_code,
    run_pipeline,
    run_pipeline_sync,
)

from .conftest import HEIGHT_37A1


def write_corpus(tmp_path, *lines: str):
    path = tmp_path / "corpus.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


# =============================================================================
# Ingestion
# =============================================================================


def test_parse_model():
    assert parse_model(" 0, 0, 1, -1, 0 ").coefficients == (0, 0, 1, -1, 0)
    with pytest.raises(ParseError):
        parse_model("0,0,1,-1")
    with pytest.raises(ParseError):
        parse_model("0,0,1,x,0")
    with pytest.raises(SingularModel):
        parse_model("1,0,0,0,0")


def test_parse_point():
    assert parse_point("1/4,-5/8") == RationalPoint.affine(Fraction(1, 4), Fraction(-5, 8))
    assert parse_point("0,-1") == RationalPoint.affine(0, -1)
    with pytest.raises(ParseError):
        parse_point("1/0,2")


def test_sample_corpus_parses(corpus_path):
    records = parse_corpus(corpus_path)
    assert len(records) == 21
    assert all(isinstance(r, CurveRecord) for r in records)
    first = records[0]
    assert first.label == "37a1"
    assert first.points[1] == RationalPoint.affine(Fraction(1, 4), Fraction(-5, 8))


def test_strict_parse_reports_line_number(tmp_path):
    path = write_corpus(tmp_path, "# header", "0,0,1,-1,0;37a1", "0,0,1;broken")
    with pytest.raises(ParseError) as info:
        parse_corpus(path)
    assert info.value.line_number == 3
    assert str(info.value).startswith("line 3:")


def test_strict_parse_checks_points(tmp_path):
    path = write_corpus(tmp_path, "0,0,1,-1,0;37a1;P=1,1")
    with pytest.raises(PointNotOnCurve):
        parse_corpus(path)


def test_lenient_parse_keeps_going(tmp_path):
    path = write_corpus(tmp_path, "1,0,0,0,0;nodal", "", "0,0,1,-1,0;37a1;P=0,0", "0,0,1,-1,0;37a1;junk;more")
    entries = parse_corpus(path, strict=False)
    assert [type(e) for e in entries] == [RecordFailure, CurveRecord, RecordFailure]
    assert entries[0].error_kind == "SingularModel"
    assert entries[0].label == "nodal"
    assert entries[2].line_number == 4


def test_missing_corpus(tmp_path):
    with pytest.raises(ParseError):
        parse_corpus(tmp_path / "absent.txt")


# =============================================================================
# Pipeline
# =============================================================================


def test_build_report_for_generator(tmp_path, config):
    (record,) = parse_corpus(write_corpus(tmp_path, "0,0,1,-1,0;37a1;P=0,0"))
    report = build_report(record, config)
    assert not report.failed
    assert report.N_E == 1
    assert report.conductor == 37
    assert report.semistable is True
    assert report.heights[0]["canonical_height"] == pytest.approx(HEIGHT_37A1, abs=1e-9)
    assert report.classification[0]["branch"] == "small_j_small_disc"
    assert report.margins[0]["holds"] is True
    assert report.violations == []
    assert "zeros-lemma condition fails for the chosen parameters" in report.findings


def test_build_report_for_failure(config):
    failure = RecordFailure(line_number=7, label="x", error_kind="ParseError", message="line 7: bad")
    report = build_report(failure, config)
    assert report.failed
    assert report.error_kind == "ParseError"
    assert report.heights == []


async def test_run_pipeline_keeps_input_order(tmp_path, config):
    path = write_corpus(
        tmp_path,
        "0,-1,1,-10,-20;11a1;P=5,5",
        "1,0,0,0,0;nodal",
        "0,0,1,-1,0;37a1;P=0,0",
    )
    reports = await run_pipeline(parse_corpus(path, strict=False), config)
    assert [r.line_number for r in reports] == [1, 2, 3]
    assert reports[0].heights[0]["torsion_order"] == 5
    assert reports[1].failed and reports[1].error_kind == "SingularModel"
    assert not reports[2].failed
    assert pipeline_exit_code(reports) == 0


def test_empty_corpus(tmp_path, config):
    path = write_corpus(tmp_path, "# nothing here")
    records = parse_corpus(path)
    assert records == []
    reports = run_pipeline_sync(records, config)
    assert reports == []
    assert pipeline_exit_code(reports) == 0
    assert emit_report(reports, "json") == b"[]\n"
    assert emit_report(reports, "csv").decode().strip() == ",".join(CSV_COLUMNS)


# =============================================================================
# Emission
# =============================================================================


@pytest.fixture
def small_reports(tmp_path, config):
    path = write_corpus(tmp_path, "0,0,1,-1,0;37a1;P=0,0;P=1,0", "0,0,0,0,1;36a1")
    return run_pipeline_sync(parse_corpus(path), config)


def test_json_is_deterministic(small_reports, tmp_path, config):
    first = emit_report(small_reports, "json")
    path = write_corpus(tmp_path, "0,0,1,-1,0;37a1;P=0,0;P=1,0", "0,0,0,0,1;36a1")
    again = emit_report(run_pipeline_sync(parse_corpus(path), config), "json")
    assert first == again
    payload = json.loads(first)
    assert [p["label"] for p in payload] == ["37a1", "36a1"]


def test_csv_has_one_row_per_point(small_reports):
    lines = emit_report(small_reports, "csv").decode().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 2 + 1


def test_unknown_format(small_reports):
    with pytest.raises(UnknownFormat):
        emit_report(small_reports, "xml")
