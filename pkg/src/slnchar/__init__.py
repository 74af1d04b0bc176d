"""Exact computations around the characters of SL_n(Z), n >= 3."""
from importlib import resources
from pathlib import Path

from .exactmat import IntMatrix, ResidueMatrix, SLMatrix, elementary, s_matrix

__all__ = ["IntMatrix", "ResidueMatrix", "SLMatrix", "elementary", "s_matrix", "fixture_path"]


def fixture_path(name: str) -> Path:
    """Path of a candidate file shipped with the package."""
    return Path(str(resources.files(__name__) / "fixtures" / name))
