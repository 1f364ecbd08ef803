"""Bundled example automata.

``D1`` to ``D4`` are small reset-form automata with hand-checkable
behaviour, ``P2`` is the prime family for the primes 2 and 3 and ``C3`` is
a classical automaton with a popping silent 3-cycle.
"""

from __future__ import annotations

from importlib import resources

from .model import Automaton, decode

NAMES = ("D1", "D2", "D3", "D4", "P2", "C3")
START = {"P2": "cnt", "C3": "c"}


def fixture_path(name: str):
    suffix = ".classical" if name == "C3" else ".doca"
    return resources.files("doca") / "data" / f"{name}{suffix}"


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(name)
    return fixture_path(name).read_text(encoding="utf-8")


def load(name: str) -> Automaton:
    return decode(fixture_text(name))
