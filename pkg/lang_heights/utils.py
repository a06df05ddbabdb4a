"""
Common helpers for lang_heights.

Paths to bundled data, logging setup, terminal headers, and the small numeric
helpers shared across modules.
"""

import logging
import math
from fractions import Fraction
from pathlib import Path

from rich.console import Console
from rich.rule import Rule

console = Console()


def get_project_root() -> Path:
    """Get the project root directory."""
    return Path(__file__).parent.parent


def get_sample_data_path(filename: str = "curves.txt") -> Path:
    """
    Get the path to a sample data file.

    Args:
        filename: Name of the file in sample_data/

    Returns:
        Path to the sample data file
    """
    return get_project_root() / "sample_data" / filename


def setup_logging(level: str = "INFO", log_file: str | None = None) -> logging.Logger:
    """
    Configure the package logger.

    Args:
        level: Console log level name
        log_file: Optional path; the file receives DEBUG and above

    Returns:
        The configured "lang_heights" logger
    """
    logger = logging.getLogger("lang_heights")
    logger.setLevel(logging.DEBUG)
    logger.propagate = False
    logger.handlers.clear()

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level.upper())
    console_handler.setFormatter(
        logging.Formatter("[%(asctime)s] %(levelname)s: %(message)s", datefmt="%H:%M:%S")
    )
    logger.addHandler(console_handler)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(
            logging.Formatter(
                "%(asctime)s | %(name)s | %(levelname)s | %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S",
            )
        )
        logger.addHandler(file_handler)

    return logger


def print_header(title: str) -> None:
    """Print a formatted header for command output."""
    console.print()
    console.print(Rule(f"[bold]{title}"))


def print_section(title: str) -> None:
    """Print a formatted section separator."""
    console.print(Rule(title, style="dim"))


def log1(x: float) -> float:
    """max{1, log x}, with log 0 read as minus infinity."""
    if x <= 0:
        return 1.0
    return max(1.0, math.log(x))


def log1_abs(value) -> float:
    """log^(1)|value| for ints, Fractions, floats and mpmath numbers."""
    if isinstance(value, int | Fraction):
        return 1.0 if value == 0 else max(1.0, log_abs_fraction(Fraction(value)))
    return log1(float(abs(value)))


def log_abs_fraction(value: Fraction) -> float:
    """log|value| for a nonzero rational without float overflow."""
    value = abs(value)
    # math.log accepts arbitrarily large ints
    return math.log(value.numerator) - math.log(value.denominator)


def height_of_rational(value: Fraction) -> float:
    """Logarithmic height log max(|num|, |den|) of a rational."""
    if value == 0:
        return 0.0
    return math.log(max(abs(value.numerator), value.denominator))
