"""Tests for layered configuration."""

from fractions import Fraction

import pytest

from lang_heights.config import DEFAULT_CONFIG, load_config
from lang_heights.errors import ConfigError


def test_defaults(monkeypatch):
    for key in DEFAULT_CONFIG:
        monkeypatch.delenv("LANG_HEIGHTS_" + key.upper(), raising=False)
    config = load_config()
    assert config.precision_bits == 128
    assert config.epsilon == Fraction(1, 2)
    assert config.c1 == 2
    assert config.working_bits == 128 + 32


def test_overrides_ignore_none():
    config = load_config(precision_bits=256, epsilon=None)
    assert config.precision_bits == 256
    assert config.epsilon == Fraction(1, 2)


def test_environment_layer(monkeypatch):
    monkeypatch.setenv("LANG_HEIGHTS_PRECISION_BITS", "192")
    monkeypatch.setenv("LANG_HEIGHTS_EPSILON", "1/3")
    config = load_config()
    assert config.precision_bits == 192
    assert config.epsilon == Fraction(1, 3)
    assert load_config(precision_bits=64).precision_bits == 64


def test_log_level_normalised():
    assert load_config(log_level="debug").log_level == "DEBUG"


@pytest.mark.parametrize(
    "overrides",
    [
        {"epsilon": "3/2"},
        {"epsilon": "abc"},
        {"c1": "1"},
        {"precision_bits": 16},
        {"log_level": "LOUD"},
        {"workers": 0},
    ],
)
def test_invalid_values(overrides):
    with pytest.raises(ConfigError):
        load_config(**overrides)
