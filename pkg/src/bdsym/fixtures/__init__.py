"""Function, bijection and pair files for the worked examples."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..core import BijectionTable, TruthTable, parse_bijection, parse_function
from ..morphisms import MorphismPair, parse_pair


def path(name: str) -> Path:
    return Path(str(resources.files(__name__).joinpath(name)))


def names() -> list[str]:
    return sorted(p.name for p in resources.files(__name__).iterdir() if p.name.endswith((".fn", ".bij", ".pair", ".sched")))


def function(name: str) -> TruthTable:
    return parse_function(path(name).read_text())


def bijection(name: str) -> BijectionTable:
    return parse_bijection(path(name).read_text())


def pair(name: str, kind: str = "iso") -> MorphismPair:
    return parse_pair(path(name).read_text(), kind)
