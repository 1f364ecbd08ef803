"""Brute-force ground truth for differential testing.

Everything here enumerates words and re-interprets the rule tables from
scratch.  Nothing is imported from the semantics or the engine, so a bug
there cannot hide itself here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .equivalence import AtLeast  # plain value type, no engine logic
from .model import EPS, ClassicalDoca, Doca

MAX_DEPTH = 14


class DepthTooLarge(ValueError):
    code = "depth-too-large"


def _guard(depth: int) -> None:
    if depth > MAX_DEPTH:
        raise DepthTooLarge(f"depth {depth} exceeds {MAX_DEPTH}")


@dataclass(frozen=True)
class TraceSet:
    depth: int
    words: frozenset

    def __contains__(self, w) -> bool:
        return tuple(w) in self.words

    def __len__(self):
        return len(self.words)


class _Interp:
    """Own reading of the reset-form rules; states are tagged tuples."""

    def __init__(self, A: Doca):
        self.A = A
        self.table = {(r.src, r.letter, r.sign): (r.dst, r.effect) for r in A.rules}
        self.resets = list(A.reset_states)

    def lift(self, state) -> tuple:
        name = type(state).__name__
        if name == "Plain":
            return ("P", state.p, state.m)
        if name == "ResetCfg":
            return ("R", state.s, state.m)
        if name == "ModTuple":
            return ("M", state.p, tuple(state.residues))
        if name == "FixRes":
            return ("F", state.s, state.c)
        raise TypeError(f"not a state: {state!r}")

    def settle(self, st: tuple) -> tuple:
        tag, name, x = st
        if tag == "R":
            return ("P", self.A.goto[name][x % self.A.per[name]], 0)
        if tag == "F":
            return ("P", self.A.goto[name][x], 0)
        return st

    def move(self, st: tuple, a: str) -> Optional[tuple]:
        tag, p, x = st
        if tag == "P":
            hit = self.table.get((p, a, 0 if x == 0 else 1))
            if hit is None:
                return None
            q, j = hit
            if q in self.A.per:
                return self.settle(("R", q, x + j))
            return ("P", q, x + j)
        hit = self.table.get((p, a, 1))
        if hit is None:
            return None
        q, j = hit
        if q in self.A.per:
            c = x[self.resets.index(q)]
            return self.settle(("F", q, (c + j) % self.A.per[q]))
        return ("M", q, tuple((c + j) % self.A.per[s] for c, s in zip(x, self.resets)))


def oracle_traces(A: Doca, s, depth: int) -> TraceSet:
    """Every word of length <= depth enabled in ``s``."""
    _guard(depth)
    it = _Interp(A)
    words = set()

    def walk(w, st):
        words.add(w)
        if len(w) == depth:
            return
        for a in A.alphabet:
            nxt = it.move(st, a)
            if nxt is not None:
                walk(w + (a,), nxt)

    walk((), it.settle(it.lift(s)))
    return TraceSet(depth, frozenset(words))


def oracle_eqlevel(A: Doca, s, t, depth: int):
    """Length of the shortest word in the symmetric difference, minus one.

    The truncated trace sets are prefix closed, so a shortest difference
    always extends a word enabled on both sides; the enumeration therefore
    only grows the common words, level by level.
    """
    _guard(depth)
    it = _Interp(A)
    common = [(it.settle(it.lift(s)), it.settle(it.lift(t)))]
    for length in range(1, depth + 1):
        grown = []
        for x, y in common:
            for a in A.alphabet:
                nx, ny = it.move(x, a), it.move(y, a)
                if (nx is None) != (ny is None):
                    return length - 1
                if nx is not None:
                    grown.append((nx, ny))
        common = grown
    return AtLeast(depth)


def accepting_language(A: Doca, start, accepting: Iterable[str], depth: int) -> frozenset:
    """Words of length <= depth leading ``start`` to an accepting stable state."""
    _guard(depth)
    it = _Interp(A)
    acc = set(accepting)
    out = set()

    def walk(w, st):
        if st[0] == "P" and st[1] in acc:
            out.add(w)
        if len(w) == depth:
            return
        for a in A.alphabet:
            nxt = it.move(st, a)
            if nxt is not None:
                walk(w + (a,), nxt)

    walk((), it.settle(it.lift(start)))
    return frozenset(out)


# -- classical automata ---------------------------------------------------------


class _Classical:
    def __init__(self, C: ClassicalDoca):
        self.C = C
        self.table = {(r.src, r.letter, r.sign): (r.dst, r.effect) for r in C.rules}
        self.acc = set(C.accepting)

    def close(self, p: str, n: int):
        """Follow silent rules from ``p(n)``.

        Returns ``(config or None, accepted)``; None means the silent run
        never stops.  ``accepted`` tells whether an accepting state was on it.
        """
        accepted = p in self.acc
        seen = set()
        last: dict[str, tuple[int, int]] = {}
        last_zero = -1
        i = 0
        while True:
            if n == 0:
                last_zero = i
            if (p, n) in seen:
                return None, accepted
            seen.add((p, n))
            if p in last:
                i0, n0 = last[p]
                # positive since the previous visit and no lower: repeats forever
                if n0 > 0 and n >= n0 and last_zero < i0:
                    return None, accepted
            last[p] = (i, n)
            hit = self.table.get((p, EPS, 0 if n == 0 else 1))
            if hit is None:
                return (p, n), accepted
            p, n = hit[0], n + hit[1]
            accepted = accepted or p in self.acc
            i += 1

    def start(self):
        return self.close(self.C.initial, 0)

    def feed(self, cfg, a: str):
        if cfg is None:
            return None, False
        p, n = cfg
        hit = self.table.get((p, a, 0 if n == 0 else 1))
        if hit is None:
            return None, False
        return self.close(hit[0], n + hit[1])


def accepts(C: ClassicalDoca, w: Union[str, Sequence[str]]) -> bool:
    sim = _Classical(C)
    cfg, acc = sim.start()
    for a in C.word(w):
        cfg, acc = sim.feed(cfg, a)
        if cfg is None and not acc:
            return False
    return acc


def language(C: ClassicalDoca, depth: int, alphabet: Optional[Sequence[str]] = None) -> frozenset:
    """Accepted words of length <= depth."""
    _guard(depth)
    sim = _Classical(C)
    letters = tuple(alphabet or C.alphabet)
    out = set()

    def walk(w, cfg, acc):
        if acc:
            out.add(w)
        if cfg is None or len(w) == depth:
            return
        for a in letters:
            walk(w + (a,), *sim.feed(cfg, a))

    walk((), *sim.start())
    return frozenset(out)


def language_difference(C1: ClassicalDoca, C2: ClassicalDoca, depth: int):
    """Shortest word (lexicographically least) accepted by exactly one side, or None."""
    _guard(depth)
    s1, s2 = _Classical(C1), _Classical(C2)
    letters = tuple(C1.alphabet) + tuple(a for a in C2.alphabet if a not in C1.alphabet)
    (c1, a1), (c2, a2) = s1.start(), s2.start()
    level = [((), c1, a1, c2, a2)]
    for length in range(depth + 1):
        for w, c1, a1, c2, a2 in level:
            if a1 != a2:
                return w
        if length == depth:
            break
        nxt = []
        for w, c1, a1, c2, a2 in level:
            if c1 is None and c2 is None:
                continue
            for a in letters:
                n1, b1 = s1.feed(c1, a) if a in C1.alphabet else (None, False)
                n2, b2 = s2.feed(c2, a) if a in C2.alphabet else (None, False)
                nxt.append((w + (a,), n1, b1, n2, b2))
        level = nxt
    return None
