"""Tests for the acceptance sweep."""

from lang_heights.testing import AuditResult, run_audit
from lang_heights.reports import parse_corpus
from lang_heights.testing.audit import check_constants, check_elkies, check_zeros_lemma


def test_corpus_free_checks_pass():
    results = run_audit(use_corpus=False, verbose=False)
    by_status = {r.name: r.status for r in results}
    assert by_status["quadraticity"] == "SKIP"
    assert by_status["spread maximum"] == "PASS"
    assert by_status["combinatorial selection"] == "PASS"
    assert by_status["zeros lemma integers"] == "PASS"
    assert not any(status == "FAIL" for status in by_status.values())


def test_findings_are_reported_in_detail():
    passed, detail = check_constants(max_d=2)
    assert passed
    assert "10207584 exactly: True" in detail
    assert "12N constant term" in detail
    passed, detail = check_zeros_lemma()
    assert passed and "16388000" in detail


def test_sweep_over_small_corpus(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("0,0,1,-1,0;37a1;P=0,0\n0,-1,1,-10,-20;11a1;P=5,5\n0,1,1,-2,0;389a1;P=-1,1;P=0,0\n")
    results = run_audit(corpus, max_multiple=3, verbose=False)
    assert all(isinstance(r, AuditResult) for r in results)
    failed = [(r.name, r.detail) for r in results if r.status == "FAIL"]
    assert failed == []


def test_elkies_sweep_runs_every_configuration_per_curve(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("0,0,1,-1,0;37a1;P=0,0\n0,1,1,-2,0;389a1;P=-1,1\n0,-1,1,-10,-20;11a1;P=5,5\n")
    passed, detail = check_elkies(parse_corpus(corpus), configurations=4)
    assert passed
    # 11a1 only has a torsion point
    assert detail == "0 failures in 8 configurations over 2 curves"
