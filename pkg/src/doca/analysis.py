"""Regularity check by pumping-pattern search.

``p(m)`` is non-regular exactly when it can reach some ``q1(n)`` from which
a positive path first climbs by ``k`` (to ``q2(n+k)``) and then descends to
a zero configuration ``q'(0)`` whose independence level is finite.  The
search below is complete only up to its counter caps, hence the hedged
``regular-up-to-caps`` verdict.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .equivalence import independence_level, is_finite
from .model import Doca
from .paths import _positive_edges, shortest_positive_path
from .semantics import Plain, advance, run

REGULAR = "regular-up-to-caps"
NON_REGULAR = "non-regular"


@dataclass(frozen=True)
class Certificate:
    u: tuple[str, ...]
    q1: str
    n: int
    v: tuple[str, ...]
    w: tuple[str, ...]
    q_end: str


@dataclass(frozen=True)
class RegularityVerdict:
    verdict: str
    certificate: Optional[Certificate] = None
    caps: dict = field(default_factory=dict)

    @property
    def regular(self) -> bool:
        return self.verdict == REGULAR


def default_cap(A: Doca, m: int) -> int:
    return m + 4 * A.k**2 + A.k


def _descending_set(A: Doca, zeros, window: int) -> set:
    """Configurations ``(x, c)`` with ``1 <= c <= window`` that reach some zero in ``zeros`` positively."""
    back: dict[str, list[tuple[str, int]]] = {y: [] for y in A.stable_states}
    for x, out in _positive_edges(A).items():
        for _, y, j in out:
            back[y].append((x, j))
    seen = {(q, 0) for q in zeros}
    queue = deque(seen)
    while queue:
        y, c = queue.popleft()
        for x, j in back[y]:
            node = (x, c - j)
            if 1 <= c - j <= window and node not in seen:
                seen.add(node)
                queue.append(node)
    return seen


def is_regular(A: Doca, p: str, m: int, bound: int, cap: Optional[int] = None) -> RegularityVerdict:
    if not A.is_stable(p):
        raise ValueError(f"{p!r} is not a stable state")
    K = A.k
    if cap is None:
        cap = default_cap(A, m)
    window = cap + K + K * K
    caps = {"counter": cap, "window": window, "bound": bound}
    zeros = [q for q in A.stable_states if is_finite(independence_level(A, q, 0, bound))]
    if not zeros:
        return RegularityVerdict(REGULAR, None, caps)
    down = _descending_set(A, zeros, window)

    start = (p, m)
    parent = {start: None}
    queue = deque([start])
    while queue:
        cfg = queue.popleft()
        q1, n = cfg
        if n >= 1:
            cert = _pattern_at(A, q1, n, zeros, down)
            if cert is not None:
                u = _unwind(parent, cfg)
                return RegularityVerdict(NON_REGULAR, Certificate(u, q1, n, *cert), caps)
        for a in A.alphabet:
            nxt = advance(A, cfg, a)
            if nxt is None:
                continue
            key = nxt[0]
            if key[1] <= cap and key not in parent:
                parent[key] = (cfg, a)
                queue.append(key)
    return RegularityVerdict(REGULAR, None, caps)


def _pattern_at(A, q1, n, zeros, down):
    K = A.k
    for q2 in A.stable_states:
        if (q2, n + K) not in down:
            continue
        v = shortest_positive_path(A, q1, n, q2, n + K)
        if v is None:
            continue
        best = None
        for q_end in zeros:
            w = shortest_positive_path(A, q2, n + K, q_end, 0)
            if w is not None and (best is None or w.length < best[0].length):
                best = (w, q_end)
        if best is not None:
            return v.word, best[0].word, best[1]
    return None


def _unwind(parent, node):
    word = []
    link = parent[node]
    while link is not None:
        node, a = link
        word.append(a)
        link = parent[node]
    return tuple(reversed(word))


def replay_certificate(A: Doca, p: str, m: int, cert: Certificate, bound: int) -> bool:
    """Re-simulate a certificate and check every claim it makes."""
    if run(A, Plain(p, m), cert.u) != Plain(cert.q1, cert.n):
        return False
    x, c = cert.q1, cert.n
    for i, a in enumerate(cert.v + cert.w):
        if c < 1:
            return False
        hit = A.rule(x, a, 1)
        if hit is None or not A.is_stable(hit[0]):
            return False
        x, c = hit[0], c + hit[1]
        if i == len(cert.v) - 1 and c != cert.n + A.k:
            return False
    if (x, c) != (cert.q_end, 0):
        return False
    return is_finite(independence_level(A, cert.q_end, 0, bound))
