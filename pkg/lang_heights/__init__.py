"""
lang_heights: canonical heights and effective lower-bound audits for elliptic curves over Q.

This package provides:
- curve_core: Weierstrass models, exact group law, Tate's algorithm, minimal models
- arch_analytic: period lattice, q-series, elliptic logarithm, Faltings height
- height_engine: local heights and the canonical height with its oracle
- lang_verifier: split multiplicative profiles, the case split, bound verification
- slope_budget: parameter budget of the transcendence construction and constant audits
- lemma_oracles: exhaustive checks of the combinatorial lemmas
- reports, cli: corpus pipeline and command line
"""

from .config import RunConfig, load_config
from .curve_core import RationalPoint, WeierstrassModel, global_minimal_model, reduction_table
from .errors import LangHeightsError
from .height_engine import HeightReport, canonical_height
from .lang_verifier import lang_check

__version__ = "1.0.0"

__all__ = [
    # Configuration
    "RunConfig",
    "load_config",
    # Curves
    "WeierstrassModel",
    "RationalPoint",
    "global_minimal_model",
    "reduction_table",
    # Heights
    "HeightReport",
    "canonical_height",
    "lang_check",
    # Errors
    "LangHeightsError",
]
