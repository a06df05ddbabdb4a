"""Shared curves, points and configuration for the test suite."""

import pytest

from lang_heights.config import load_config
from lang_heights.curve_core import RationalPoint, WeierstrassModel
from lang_heights.utils import get_sample_data_path

# Cremona labels; coefficients are [a1, a2, a3, a4, a6]
CURVE_37A1 = (0, 0, 1, -1, 0)
CURVE_11A1 = (0, -1, 1, -10, -20)
CURVE_389A1 = (0, 1, 1, -2, 0)

# y^2 + y = x^3 - x, generator (0, 0): the canonical height under the
# one-half normalisation, and twice that as the BSD regulator
HEIGHT_37A1 = 0.0255557041
REGULATOR_37A1 = 0.0511114082


@pytest.fixture
def e37() -> WeierstrassModel:
    return WeierstrassModel(*CURVE_37A1)


@pytest.fixture
def p37() -> RationalPoint:
    return RationalPoint.affine(0, 0)


@pytest.fixture
def e11() -> WeierstrassModel:
    return WeierstrassModel(*CURVE_11A1)


@pytest.fixture
def t11() -> RationalPoint:
    """5-torsion point on 11a1."""
    return RationalPoint.affine(5, 5)


@pytest.fixture
def e389() -> WeierstrassModel:
    return WeierstrassModel(*CURVE_389A1)


@pytest.fixture
def congruent() -> WeierstrassModel:
    """y^2 = x^3 - x, additive at 2."""
    return WeierstrassModel(0, 0, 0, -1, 0)


@pytest.fixture
def cubic_twist() -> WeierstrassModel:
    """y^2 = x^3 + 1."""
    return WeierstrassModel(0, 0, 0, 0, 1)


@pytest.fixture
def hard_curve() -> WeierstrassModel:
    """Small j, discriminant beyond C0(1): lands in the hard branch."""
    return WeierstrassModel(0, 0, 0, -1000, 1)


@pytest.fixture
def config():
    return load_config(precision_bits=128, log_level="WARNING")


@pytest.fixture
def corpus_path():
    return get_sample_data_path("curves.txt")
