"""Bounded eqlevel engine over the product of the extended system.

``eqlevel`` explores letter-synchronised pairs of stable states breadth
first.  Pairs are visited in the order of the lexicographically least
shortest word reaching them, so the first difference met is the
lexicographically least shortest witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .model import Doca
from .semantics import ModTuple, Plain, Stable, advance, key_of, mod_of, normalize

DEFAULT_STATE_CAP = 10**7


@dataclass(frozen=True, order=True)
class AtLeast:
    """An eqlevel known only to be at least ``bound``."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


Level = Union[int, AtLeast]


class StateCapExceeded(MemoryError):
    code = "bound-exceeded-memory"


def is_finite(level: Level) -> bool:
    return not isinstance(level, AtLeast)


@dataclass(frozen=True)
class EqResult:
    eqlevel: Level
    witness: Optional[tuple[str, ...]]
    bound: int
    # the whole reachable product was explored: the pair is truly equivalent
    exhausted: bool = False

    @property
    def finite(self) -> bool:
        return is_finite(self.eqlevel)


@dataclass(frozen=True)
class EqVerdict:
    equivalent: bool
    result: EqResult

    @property
    def bound(self) -> int:
        return self.result.bound

    @property
    def label(self) -> str:
        if not self.equivalent:
            return "inequivalent"
        return "equivalent" if self.result.exhausted else "equivalent-up-to-bound"


def default_bound(A: Doca) -> int:
    return max(64, 4 * A.k**3)


def eqlevel(A: Doca, s: Stable, t: Stable, bound: int, *,
            state_cap: int = DEFAULT_STATE_CAP) -> EqResult:
    """Exact eqlevel of ``(s, t)`` if it is below ``bound``, else ``AtLeast(bound)``.

    Unstable arguments are replaced by their silent successor first.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    start = (key_of(normalize(A, s)), key_of(normalize(A, t)))
    parent: dict = {start: None}
    layer = [start]
    letters = A.alphabet
    for depth in range(bound):
        nxt = []
        for pair in layer:
            left, right = pair
            for a in letters:
                x = advance(A, left, a)
                y = advance(A, right, a)
                if x is None or y is None:
                    if x is not y:
                        return EqResult(depth, _trace(parent, pair) + (a,), bound)
                    continue
                child = (x[0], y[0])
                if child not in parent:
                    parent[child] = (pair, a)
                    nxt.append(child)
        if len(parent) > state_cap:
            raise StateCapExceeded(f"more than {state_cap} product states within bound {bound}")
        if not nxt:
            return EqResult(AtLeast(bound), None, bound, exhausted=True)
        layer = nxt
    return EqResult(AtLeast(bound), None, bound)


def _trace(parent: dict, pair) -> tuple[str, ...]:
    word = []
    link = parent[pair]
    while link is not None:
        pair, a = link
        word.append(a)
        link = parent[pair]
    return tuple(reversed(word))


def check_equivalence(A: Doca, p: str, q: str, bound: Optional[int] = None, *,
                      state_cap: int = DEFAULT_STATE_CAP) -> EqVerdict:
    """Decide ``p(0) ~ q(0)`` relative to ``bound``.

    An inequivalent verdict is certified by its witness; an equivalent one
    only says that no witness of length <= bound exists, unless the
    reachable product was exhausted.
    """
    for name in (p, q):
        if not A.is_stable(name):
            raise ValueError(f"{name!r} is not a stable state")
    if bound is None:
        bound = default_bound(A)
    res = eqlevel(A, Plain(p, 0), Plain(q, 0), bound, state_cap=state_cap)
    return EqVerdict(not res.finite, res)


def independence_level(A: Doca, p: str, m: int, bound: int, **kw) -> Level:
    cfg = Plain(p, m)
    return eqlevel(A, cfg, mod_of(A, cfg), bound, **kw).eqlevel


@dataclass(frozen=True)
class EqlevelTuple:
    b: Level
    l: Level
    r: Level
    o: Level
    dL: Level
    dR: Level

    def cycles(self) -> list[tuple[Level, ...]]:
        """The four triangles and the rectangle whose minima repeat."""
        return [(self.b, self.l, self.dR), (self.dR, self.r, self.o),
                (self.b, self.dL, self.r), (self.l, self.dL, self.o),
                (self.b, self.l, self.r, self.o)]


def min_attained_twice(levels) -> bool:
    """True when the least finite value occurs at least twice (or none is finite).

    ``AtLeast(B)`` entries count as larger than every finite entry, which is
    sound because finite answers are always below the bound.
    """
    finite = [x for x in levels if is_finite(x)]
    if not finite:
        return True
    lo = min(finite)
    return finite.count(lo) >= 2


def eqlevel_tuple(A: Doca, s: Plain, t: Union[Plain, ModTuple], bound: int, **kw) -> EqlevelTuple:
    if not isinstance(s, Plain):
        raise TypeError("left state must be a plain configuration")

    def E(x, y):
        return eqlevel(A, x, y, bound, **kw).eqlevel

    ms = mod_of(A, s)
    if isinstance(t, ModTuple):
        b = E(s, t)
        o = E(ms, t)
        return EqlevelTuple(b=b, l=E(s, ms), r=AtLeast(bound), o=o, dL=b, dR=o)
    mt = mod_of(A, t)
    return EqlevelTuple(b=E(s, t), l=E(s, ms), r=E(t, mt), o=E(ms, mt), dL=E(s, mt), dR=E(t, ms))


def zero_eqlevels(A: Doca, bound: int, **kw) -> dict[tuple[str, str], int]:
    """Finite eqlevels of all pairs of distinct stable zero configurations."""
    out = {}
    states = A.stable_states
    for i, p in enumerate(states):
        for q in states[i + 1:]:
            level = eqlevel(A, Plain(p, 0), Plain(q, 0), bound, **kw).eqlevel
            if is_finite(level):
                out[(p, q)] = level
    return out
