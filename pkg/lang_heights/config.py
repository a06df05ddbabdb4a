"""
Run configuration for lang_heights.

Settings come from three layers, highest priority first:
    1. command-line flags (passed to load_config as overrides)
    2. environment variables prefixed LANG_HEIGHTS_ (a .env file is honoured)
    3. DEFAULT_CONFIG

Usage:
    from lang_heights.config import load_config, add_precision_args

    parser = argparse.ArgumentParser()
    add_precision_args(parser)
    args = parser.parse_args()
    config = load_config(precision_bits=args.precision_bits)
"""

import os
from fractions import Fraction
from typing import Any

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError

load_dotenv()

ENV_PREFIX = "LANG_HEIGHTS_"

DEFAULT_CONFIG: dict[str, Any] = {
    "precision_bits": 128,
    "guard_bits": 32,
    "workers": 4,
    "doublings": 8,
    "epsilon": Fraction(1, 2),
    "c1": Fraction(2),
    "d": 1,
    "case_two_z": 1,
    "witness_window": 4096,
    "log_level": "INFO",
    "log_file": None,
}


class RunConfig(BaseModel):
    """Validated settings shared by every subcommand and the pipeline."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    precision_bits: int = Field(128, ge=53, le=4096, description="Working precision in bits")
    guard_bits: int = Field(32, ge=0, le=512, description="Extra bits carried by transcendental evaluations")
    workers: int = Field(4, ge=1, le=256, description="Bounded worker pool size for the pipeline")
    doublings: int = Field(8, ge=0, le=12, description="Doublings used by the naive-height oracle")
    epsilon: Fraction = Field(Fraction(1, 2), description="Torus-square parameter, 0 < eps < 1")
    c1: Fraction = Field(Fraction(2), description="Big-j threshold constant, C1 > 1")
    d: int = Field(1, ge=1, description="Field degree used in constant formulas")
    case_two_z: int = Field(1, ge=1, description="Z used when classifying the hard branch")
    witness_window: int = Field(4096, ge=1, description="Multipliers scanned for Case II witnesses")
    log_level: str = Field("INFO", description="Console log level")
    log_file: str | None = Field(None, description="Optional log file path")

    @field_validator("epsilon", "c1", mode="before")
    @classmethod
    def _to_fraction(cls, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {value!r}") from e

    @field_validator("epsilon")
    @classmethod
    def _epsilon_range(cls, value: Fraction) -> Fraction:
        if not 0 < value < 1:
            raise ValueError("epsilon must lie strictly between 0 and 1")
        return value

    @field_validator("c1")
    @classmethod
    def _c1_range(cls, value: Fraction) -> Fraction:
        if value <= 1:
            raise ValueError("C1 must exceed 1")
        return value

    @field_validator("log_level")
    @classmethod
    def _level_name(cls, value: str) -> str:
        level = value.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return level

    @property
    def working_bits(self) -> int:
        """Precision actually used for transcendental evaluations."""
        return self.precision_bits + self.guard_bits


def env_overrides() -> dict[str, Any]:
    """
    Collect LANG_HEIGHTS_* environment variables.

    Returns:
        Mapping of config keys to raw string values
    """
    found = {}
    for key in DEFAULT_CONFIG:
        raw = os.getenv(ENV_PREFIX + key.upper())
        if raw is not None and raw.strip() != "":
            found[key] = raw.strip()
    return found


def load_config(**overrides: Any) -> RunConfig:
    """
    Build the effective configuration.

    Args:
        **overrides: Values from command-line flags; None means "not given"

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: A value fails validation

    Example:
        >>> load_config(precision_bits=256).precision_bits
        256
    """
    merged = dict(DEFAULT_CONFIG)
    merged.update(env_overrides())
    merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def add_precision_args(parser) -> None:
    """
    Add precision and proof-parameter arguments to an argparse parser.

    Args:
        parser: argparse.ArgumentParser instance
    """
    parser.add_argument(
        "--precision-bits",
        type=int,
        default=None,
        help=f"Working precision in bits (default: {DEFAULT_CONFIG['precision_bits']}, "
        f"env {ENV_PREFIX}PRECISION_BITS)",
    )
    parser.add_argument(
        "--epsilon",
        type=str,
        default=None,
        help="Advanced: torus-square parameter (default: 1/2)",
    )
    parser.add_argument(
        "--c1",
        type=str,
        default=None,
        help="Advanced: big-j threshold constant (default: 2)",
    )


def add_output_args(parser) -> None:
    """
    Add output-format and logging arguments to an argparse parser.

    Args:
        parser: argparse.ArgumentParser instance
    """
    parser.add_argument(
        "--format",
        type=str,
        choices=["json", "csv"],
        default=None,
        help="Machine-readable output format (default: rich table)",
    )
    parser.add_argument(
        "--log-level",
        type=str,
        default=None,
        help="Console log level (default: INFO)",
    )
