"""Transition-system semantics of a reset-form doca.

States of the extended system are four small value types.  ``Plain`` and
``ModTuple`` are stable, ``ResetCfg`` and ``FixRes`` are unstable and have a
single silent move each.  ``step`` and ``run`` always return stable states;
the silent move of an unstable target is applied on the way.

A ``ModTuple`` is the special-mode view of a configuration: the counter is
assumed positive and only its residues modulo the reset periods are kept
(aligned with ``A.reset_states``).  Zero rules never fire from it, and
entering a reset state leaves special mode for good.

The engine works on hashable keys instead of the dataclasses: ``(p, m)``
with an ``int`` for a plain configuration and ``(p, residues)`` with a
tuple for a Mod state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import lcm
from typing import NamedTuple, Optional, Sequence, Union

from .model import MAX_COUNTER, CounterOverflow, Doca


@dataclass(frozen=True)
class Plain:
    p: str
    m: int

    def __str__(self):
        return f"{self.p}({self.m})"


@dataclass(frozen=True)
class ResetCfg:
    s: str
    m: int

    def __str__(self):
        return f"{self.s}({self.m})"


@dataclass(frozen=True)
class ModTuple:
    p: str
    residues: tuple[int, ...] = ()

    def __str__(self):
        return f"Mod[{self.p},({','.join(map(str, self.residues))})]"


@dataclass(frozen=True)
class FixRes:
    s: str
    c: int

    def __str__(self):
        return f"{self.s}[{self.c}]"


Stable = Union[Plain, ModTuple]
ExtState = Union[Plain, ResetCfg, ModTuple, FixRes]


class StepOutcome(NamedTuple):
    target: Stable
    kind: str  # "simple" or "combined"


class InvalidState(ValueError):
    code = "invalid-state"


# -- keys ---------------------------------------------------------------------


def key_of(state: Stable):
    if type(state) is Plain:
        return (state.p, state.m)
    return (state.p, tuple(state.residues))


def state_of(key) -> Stable:
    p, x = key
    if type(x) is int:
        return Plain(p, x)
    return ModTuple(p, x)


def advance(A: Doca, key, a: str):
    """Successor key of a stable key under ``a`` plus a reset flag, or None."""
    p, x = key
    if type(x) is int:
        hit = A._delta.get((p, a, 1 if x else 0))
        if hit is None:
            return None
        q, j = hit
        m = x + j
        if m > MAX_COUNTER:
            raise CounterOverflow(f"counter overflow at {p}({x})")
        i = A._res_index.get(q)
        if i is None:
            return (q, m), False
        return (A.goto[q][m % A._periods[i]], 0), True
    hit = A._delta.get((p, a, 1))
    if hit is None:
        return None
    q, j = hit
    i = A._res_index.get(q)
    if i is None:
        return (q, tuple((c + j) % n for c, n in zip(x, A._periods))), False
    return (A.goto[q][(x[i] + j) % A._periods[i]], 0), True


# -- public operations ----------------------------------------------------------


def _check(A: Doca, state: ExtState) -> None:
    if isinstance(state, (Plain, ModTuple)):
        ok = A.is_stable(state.p)
    else:
        ok = A.is_reset(state.s)
    if isinstance(state, (Plain, ResetCfg)):
        ok = ok and isinstance(state.m, int) and state.m >= 0
    elif isinstance(state, ModTuple):
        ok = ok and len(state.residues) == len(A.reset_states) and all(
            0 <= c < n for c, n in zip(state.residues, A._periods))
    elif isinstance(state, FixRes):
        ok = ok and 0 <= state.c < A.per[state.s]
    else:
        ok = False
    if not ok:
        raise InvalidState(f"{state!r} is not a state of this automaton")


def normalize(A: Doca, state: ExtState) -> Stable:
    """Apply the silent move of an unstable state; stable states pass through."""
    _check(A, state)
    if isinstance(state, ResetCfg):
        return Plain(A.goto[state.s][state.m % A.per[state.s]], 0)
    if isinstance(state, FixRes):
        return Plain(A.goto[state.s][state.c], 0)
    return state


def step(A: Doca, s: Stable, a: str) -> Optional[StepOutcome]:
    _check(A, s)
    if isinstance(s, (ResetCfg, FixRes)):
        raise InvalidState(f"{s} is unstable")
    if a not in A.alphabet:
        raise InvalidState(f"letter {a!r} not in the alphabet")
    out = advance(A, key_of(s), a)
    if out is None:
        return None
    key, combined = out
    return StepOutcome(state_of(key), "combined" if combined else "simple")


def run(A: Doca, s: Stable, w: Union[str, Sequence[str]]) -> Optional[Stable]:
    """Left fold of :func:`step`; None once a letter is disabled."""
    s = normalize(A, s)
    for a in A.word(w):
        out = step(A, s, a)
        if out is None:
            return None
        s = out.target
    return s


def enabled(A: Doca, s: ExtState) -> set[str]:
    s = normalize(A, s)
    key = key_of(s)
    return {a for a in A.alphabet if advance(A, key, a) is not None}


def mod_of(A: Doca, cfg: Union[Plain, ResetCfg]) -> Union[ModTuple, FixRes]:
    """Special-mode image: residues of the counter modulo every period."""
    if isinstance(cfg, Plain):
        return ModTuple(cfg.p, tuple(cfg.m % n for n in A._periods))
    if isinstance(cfg, ResetCfg):
        return FixRes(cfg.s, cfg.m % A.per[cfg.s])
    raise InvalidState(f"{cfg!r} is not a configuration")


def delta_lcm(A: Doca) -> int:
    """Least common multiple of all periods (1 without reset states)."""
    return reduce(lcm, A._periods, 1)
