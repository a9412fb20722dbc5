"""Bundled game files."""

from __future__ import annotations

from importlib import resources

from ..game import GameGraph, load_game

SUFFIX = ".game"


def names() -> list:
    return sorted(p.name[: -len(SUFFIX)] for p in resources.files(__name__).iterdir() if p.name.endswith(SUFFIX))


def text(name: str) -> str:
    if name.endswith(SUFFIX):
        name = name[: -len(SUFFIX)]
    path = resources.files(__name__) / f"{name}{SUFFIX}"
    if not path.is_file():
        raise KeyError(f"no bundled scenario {name!r}; available: {', '.join(names())}")
    return path.read_text()


def load(name: str) -> GameGraph:
    return load_game(text(name))
