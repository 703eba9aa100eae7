"""Example programs shipped with the analyzer (`.aex` sources)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

NAMES = ("snoc", "subsetSum", "ballBins3", "subSum1", "log", "loop")


def path(name: str) -> Path:
    return Path(str(resources.files(__package__).joinpath(f"{name}.aex")))


def source(name: str) -> str:
    return path(name).read_text(encoding="utf-8")
