"""Shortest positive paths, control-state cycles and affine IL forms.

A positive path uses positive rules only, never enters a reset state and
keeps the counter above zero before every step (the last configuration may
sit at zero).  Shortest such paths between far apart counter values have
the shape ``pre . cycle^reps . post`` with short phases and a short cycle;
:func:`shortest_positive_path` searches exactly that space, so its cost does
not grow with the counter values.
"""

from __future__ import annotations

import bisect
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Optional

from .equivalence import independence_level, is_finite
from .model import Doca


@dataclass(frozen=True)
class PathDecomposition:
    pre: tuple[str, ...]
    cycle: tuple[str, ...]
    reps: int
    post: tuple[str, ...]
    cycle_effect: int = 0
    pivot: Optional[str] = None  # control state the cycle starts and ends in

    @property
    def length(self) -> int:
        return len(self.pre) + self.reps * len(self.cycle) + len(self.post)

    @property
    def word(self) -> tuple[str, ...]:
        return self.pre + self.cycle * self.reps + self.post


@dataclass(frozen=True)
class Cycle:
    start: str
    word: tuple[str, ...]
    effect: int
    best: bool = False

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def ratio(self) -> Fraction:
        return Fraction(abs(self.effect), len(self.word))


@dataclass(frozen=True)
class AffineILForm:
    """``IL(p(m)) = rho*m + sigma + e`` for ``m >= valid_from`` with ``m % modulus == residue``."""

    rho: Fraction
    sigma: Fraction
    anchor: str
    e: int
    valid_from: int
    modulus: int = 1
    residue: int = 0

    def applies(self, m: int) -> bool:
        return m >= self.valid_from and m % self.modulus == self.residue

    def value(self, m: int) -> Fraction:
        return self.rho * m + self.sigma + self.e


class NoAnchor(ValueError):
    code = "no-anchor"


def _positive_edges(A: Doca):
    """``x -> [(letter, y, j)]`` over positive rules into stable states, in alphabet order."""
    edges: dict[str, list[tuple[str, str, int]]] = {x: [] for x in A.stable_states}
    for x in A.stable_states:
        for a in A.alphabet:
            hit = A.rule(x, a, 1)
            if hit is not None and A.is_stable(hit[0]):
                edges[x].append((a, hit[0], hit[1]))
    return edges


def _effect(A: Doca, src: str, word) -> int:
    total, x = 0, src
    for a in word:
        x, j = A.rule(x, a, 1)
        total += j
    return total


def _bfs_window(A, edges, p, m, q, n, lo, hi):
    """Plain BFS over configurations with counters kept in ``[lo, hi]``."""
    start, goal = (p, m), (q, n)
    parent = {start: None}
    queue = deque([start])
    while queue:
        cfg = queue.popleft()
        x, c = cfg
        for a, y, j in edges[x]:
            nxt = (y, c + j)
            if nxt in parent:
                continue
            if nxt == goal:
                parent[nxt] = (cfg, a)
                return _unwind(parent, nxt)
            if lo <= c + j <= hi and c + j >= 1:
                parent[nxt] = (cfg, a)
                queue.append(nxt)
    return None


def _unwind(parent, node):
    word = []
    link = parent[node]
    while link is not None:
        node, a = link
        word.append(a)
        link = parent[node]
    return tuple(reversed(word))


def _cycle_table(A: Doca, edges):
    """Best cycle per ``(pivot, length, effect)``.

    Best means the largest minimum over the counter offsets strictly inside
    the cycle, i.e. the smallest dip below the starting value.
    """
    K = A.k
    table: dict[str, dict[tuple[int, int], tuple[float, tuple[str, ...]]]] = {}
    for x in A.stable_states:
        found: dict[tuple[int, int], tuple[float, tuple[str, ...]]] = {}
        layer = {(x, 0): (float("inf"), ())}
        for length in range(1, K + 1):
            nxt: dict = {}
            for (cur, eff), (mp, word) in layer.items():
                inner = mp if length == 1 else min(mp, eff)
                for a, y, j in edges[cur]:
                    key = (y, eff + j)
                    if key not in nxt or inner > nxt[key][0]:
                        nxt[key] = (inner, word + (a,))
            for (cur, eff), (mp, word) in nxt.items():
                if cur == x and eff != 0:
                    old = found.get((length, eff))
                    if old is None or mp > old[0]:
                        found[(length, eff)] = (mp, word)
            layer = nxt
        table[x] = found
    return table


def shortest_positive_path(A: Doca, p: str, m: int, q: str, n: int, *,
                           _tables=None) -> Optional[PathDecomposition]:
    """A shortest positive path from ``p(m)`` to ``q(n)`` as a decomposition, or None."""
    for name in (p, q):
        if not A.is_stable(name):
            raise ValueError(f"{name!r} is not a stable state")
    if p == q and m == n:
        return PathDecomposition((), (), 0, ())
    if m <= 0:
        return None
    edges, cycles = _tables or (_positive_edges(A), None)
    K2 = A.k * A.k
    if abs(m - n) < K2:
        lo = max(1, min(m, n) - K2)
        word = _bfs_window(A, edges, p, m, q, n, lo, max(m, n) + K2)
        if word is None:
            return None
        return PathDecomposition(word, (), 0, ())
    return _phased(A, edges, cycles or _cycle_table(A, edges), p, m, q, n, K2)


def _phased(A, edges, cycles, p, m, q, n, K2):
    # pre-phase: forward from p(m), at most K2 steps
    pre = {(p, m): None}
    dist_pre = {(p, m): 0}
    frontier = [(p, m)]
    for depth in range(1, K2 + 1):
        nxt = []
        for cfg in frontier:
            x, c = cfg
            if c < 1:
                continue
            for a, y, j in edges[x]:
                node = (y, c + j)
                if node not in pre:
                    pre[node] = (cfg, a)
                    dist_pre[node] = depth
                    nxt.append(node)
        frontier = nxt

    # post-phase: backward to q(n), at most K2 steps
    back: dict[str, list[tuple[str, str, int]]] = {y: [] for y in A.stable_states}
    for x, out in edges.items():
        for a, y, j in out:
            back[y].append((a, x, j))
    post = {(q, n): None}
    dist_post = {(q, n): 0}
    frontier = [(q, n)]
    for depth in range(1, K2 + 1):
        nxt = []
        for cfg in frontier:
            y, c = cfg
            for a, x, j in back[y]:
                node = (x, c - j)
                if c - j >= 1 and node not in post:
                    post[node] = (cfg, a)
                    dist_post[node] = depth
                    nxt.append(node)
        frontier = nxt

    by_pivot_pre: dict[str, dict[int, int]] = {}
    for (x, c), d in dist_pre.items():
        by_pivot_pre.setdefault(x, {})[c] = d
    by_pivot_post: dict[str, dict[int, int]] = {}
    for (x, c), d in dist_post.items():
        by_pivot_post.setdefault(x, {})[c] = d

    best = None  # (total, phases, pivot, cx, cy, cycle word, effect, reps)

    def offer(total, phases, *rest):
        nonlocal best
        if best is None or (total, phases) < best[:2]:
            best = (total, phases, *rest)

    for x in A.stable_states:
        P = by_pivot_pre.get(x)
        Q = by_pivot_post.get(x)
        if not P or not Q:
            continue
        for c, dq in sorted(Q.items()):
            dp = P.get(c)
            if dp is not None:
                offer(dp + dq, dp + dq, x, c, c, (), 0, 0)
        for (length, d), (mp, word) in sorted(cycles[x].items()):
            D = abs(d)
            if d < 0:
                # cx = cy + i*D with i >= 1; the dip of the last round must stay positive
                groups: dict[int, list[tuple[int, int]]] = {}
                for cx, dp in P.items():
                    if cx >= 1:
                        groups.setdefault(cx % D, []).append((cx, dp))
                suffix = {}
                for r, items in groups.items():
                    items.sort()
                    run, acc = None, []
                    for cx, dp in reversed(items):
                        cand = (dp * D + length * cx, dp, cx)
                        if run is None or cand < run:
                            run = cand
                        acc.append(run)
                    acc.reverse()
                    suffix[r] = ([cx for cx, _ in items], acc)
                for cy, dq in sorted(Q.items()):
                    if cy + D + mp < 1:
                        continue
                    entry = suffix.get(cy % D)
                    if entry is None:
                        continue
                    xs, acc = entry
                    i = bisect.bisect_left(xs, cy + D)
                    if i == len(xs):
                        continue
                    _, dp, cx = acc[i]
                    reps = (cx - cy) // D
                    offer(dp + dq + length * reps, dp + dq, x, cx, cy, word, d, reps)
            else:
                groups = {}
                for cx, dp in P.items():
                    if cx >= 1 and cx + mp >= 1:
                        groups.setdefault(cx % D, []).append((cx, dp))
                prefix = {}
                for r, items in groups.items():
                    items.sort()
                    run, acc = None, []
                    for cx, dp in items:
                        cand = (dp * D - length * cx, dp, cx)
                        if run is None or cand < run:
                            run = cand
                        acc.append(run)
                    prefix[r] = ([cx for cx, _ in items], acc)
                for cy, dq in sorted(Q.items()):
                    entry = prefix.get(cy % D)
                    if entry is None:
                        continue
                    xs, acc = entry
                    i = bisect.bisect_right(xs, cy - D)
                    if i == 0:
                        continue
                    _, dp, cx = acc[i - 1]
                    reps = (cy - cx) // D
                    offer(dp + dq + length * reps, dp + dq, x, cx, cy, word, d, reps)

    if best is None:
        return None
    _, _, x, cx, cy, word, d, reps = best
    pre_word = _unwind(pre, (x, cx))
    post_word = []
    link = post[(x, cy)]
    while link is not None:
        node, a = link
        post_word.append(a)
        link = post[node]
    return PathDecomposition(pre_word, word, reps, tuple(post_word), d, x)


def best_cycles(A: Doca) -> list[Cycle]:
    """Simple control-state cycles of length <= k over positive rules.

    Each cycle is listed once, rooted at its earliest state.  For each sign
    the cycles with the largest ``|effect| / length`` carry ``best=True``.
    """
    edges = _positive_edges(A)
    order = {s: i for i, s in enumerate(A.stable_states)}
    K = A.k
    found: list[tuple[str, tuple[str, ...], int]] = []

    def dfs(root, cur, word, eff, visited):
        for a, y, j in edges[cur]:
            if y == root:
                found.append((root, word + (a,), eff + j))
            elif y not in visited and order[y] > order[root] and len(word) + 1 < K:
                dfs(root, y, word + (a,), eff + j, visited | {y})

    for s in A.stable_states:
        dfs(s, s, (), 0, {s})
    top: dict[int, Fraction] = {}
    for _, word, eff in found:
        if eff:
            sign = 1 if eff > 0 else -1
            r = Fraction(abs(eff), len(word))
            top[sign] = max(top.get(sign, r), r)
    out = []
    for root, word, eff in found:
        sign = (eff > 0) - (eff < 0)
        flag = bool(eff) and Fraction(abs(eff), len(word)) == top[sign]
        out.append(Cycle(root, word, eff, flag))
    return out


def form_from_decomposition(A: Doca, p: str, m: int, dec: PathDecomposition, anchor: str,
                            e: int, valid_from: int) -> AffineILForm:
    if dec.reps == 0:
        return AffineILForm(Fraction(0), Fraction(dec.length), anchor, e, m, modulus=10**18, residue=m)
    D = abs(dec.cycle_effect)
    pre_eff = _effect(A, p, dec.pre)
    post_src = dec.pivot
    post_eff = _effect(A, post_src, dec.post)
    ell = len(dec.cycle)
    rho = Fraction(ell, D)
    sigma = len(dec.pre) + len(dec.post) + Fraction(ell * (pre_eff + post_eff), D)
    return AffineILForm(rho, sigma, anchor, e, valid_from, modulus=D, residue=m % D)


def il_affine_form(A: Doca, p: str, bound: int) -> list[AffineILForm]:
    """Affine descriptions of ``IL(p(m))`` for large ``m``, one per anchor and residue class.

    Forms whose anchor has an infinite IL at ``bound`` are dropped.  The
    minimum over the forms that apply to ``m`` gives ``IL(p(m))``.
    """
    if not A.is_stable(p):
        raise ValueError(f"{p!r} is not a stable state")
    K = A.k
    valid_from = K * K + K
    edges = _positive_edges(A)
    tables = (edges, _cycle_table(A, edges))
    effects = {abs(d) for table in tables[1].values() for (_, d) in table if d < 0}
    span = reduce(lcm, effects, 1)
    forms: dict = {}
    reachable = False
    e_cache: dict[str, object] = {}
    for q in A.stable_states:
        for m in range(valid_from, valid_from + span):
            dec = shortest_positive_path(A, p, m, q, 0, _tables=tables)
            if dec is None:
                continue
            reachable = True
            if q not in e_cache:
                e_cache[q] = independence_level(A, q, 0, bound)
            e = e_cache[q]
            if not is_finite(e):
                continue
            f = form_from_decomposition(A, p, m, dec, q, e, valid_from)
            forms.setdefault((f.modulus, f.residue, f.rho, f.sigma, q), f)
    if not reachable:
        raise NoAnchor(f"{p}(m) has no positive path to a zero configuration for large m")
    return sorted(forms.values(), key=lambda f: (f.modulus, f.residue, f.rho, f.sigma, f.anchor))


def evaluate_forms(forms, m: int):
    """Pointwise minimum of the applicable forms at ``m`` (None when none applies)."""
    vals = [f.value(m) for f in forms if f.applies(m)]
    return min(vals) if vals else None
