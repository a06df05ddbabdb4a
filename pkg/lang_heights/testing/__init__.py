"""
Acceptance sweep for lang_heights.

Provides:
- run_audit: every acceptance check over a corpus
- AuditResult: outcome of one check
"""

from .audit import AuditResult, run_audit

__all__ = ["run_audit", "AuditResult"]
