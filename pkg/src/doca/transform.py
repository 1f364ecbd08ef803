"""From classical doca language equivalence to reset-form trace equivalence.

Pipeline: disjoint union, counter shrinking plus silent-rule elimination
(fused into one pass), then the acceptance letter and sink completion.

Conventions for silent runs:

* A word is accepted when some state on the silent run after its last
  letter is accepting (including the state the letter lands in).
* A silent run that never stops reads no further letters.  It ends in a
  rule-less ``dead__t`` state, which is accepting when the run passed an
  accepting state.

Generated names carry the reserved ``__t`` marker (``__r`` for reset
states).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import EPS, ClassicalDoca, Doca, Rule

log = logging.getLogger(__name__)

CONVENTIONS = (
    "acceptance-during-eps: accepted if any state of the final silent run is accepting",
    "divergence: a non-terminating silent run enables no letter",
)


class TransformError(ValueError):
    code = "transform-error"


class UnshrunkInput(TransformError):
    code = "unshrunk-input"


class LetterClash(UserWarning):
    code = "letter-clash"


@dataclass(frozen=True)
class StateMap:
    forward: dict = field(default_factory=dict)
    start: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AcceptingDoca:
    doca: Doca
    accepting: frozenset


# -- counter shrinking ----------------------------------------------------------


def shrink_counter(C: ClassicalDoca, factor: Optional[int] = None):
    """Represent ``p(m)`` by ``p__t<m mod K>(m div K)`` with ``K = |Q|`` (or ``factor``)."""
    K = factor or C.k
    name = {(p, i): f"{p}__t{i}" for p in C.states for i in range(K)}
    rules = []
    for p in C.states:
        for i in range(K):
            for sign in (0, 1):
                # a shrunk counter of zero with i > 0 still means a positive original
                orig = 1 if i > 0 or sign == 1 else 0
                for a in (EPS,) + C.alphabet:
                    hit = C.rule(p, a, orig)
                    if hit is None:
                        continue
                    q, j = hit
                    rules.append(Rule(name[p, i], a, sign, name[q, (i + j) % K], (i + j) // K))
    states = tuple(name[p, i] for p in C.states for i in range(K))
    accepting = tuple(name[p, i] for p in C.accepting for i in range(K))
    out = ClassicalDoca(states, C.alphabet, tuple(rules), name[C.initial, 0], accepting)
    return out, StateMap(dict(name), {C.initial: name[C.initial, 0]})


# -- silent-rule elimination ------------------------------------------------------


def _close(C: ClassicalDoca, acc, p: str, n: int):
    """Run silent rules from ``p(n)``: ``((r, n') or None, accepted flag)``."""
    flag = p in acc
    seen = set()
    visit: dict[str, int] = {}
    since_zero: set = set()
    while True:
        if (p, n) in seen:
            return None, flag
        seen.add((p, n))
        if n == 0:
            since_zero = set()
        else:
            if p in since_zero and n >= visit[p]:
                # same positive loop again, no lower: it repeats forever
                return None, flag
            visit[p] = n
            since_zero.add(p)
        hit = C.rule(p, EPS, 1 if n else 0)
        if hit is None:
            return (p, n), flag
        p, n = hit[0], n + hit[1]
        flag = flag or p in acc


def _positive_run(C: ClassicalDoca, acc, q: str):
    """Shape of the positive silent path from ``q`` under a large counter."""
    order: dict[str, int] = {}
    effects = []
    cur, eff, flag = q, 0, q in acc
    while cur not in order:
        order[cur] = len(effects)
        effects.append(eff)
        hit = C.rule(cur, EPS, 1)
        if hit is None:
            return ("term", cur, eff, flag)
        cur, eff = hit[0], eff + hit[1]
        flag = flag or cur in acc
    d = eff - effects[order[cur]]
    if d >= 0:
        return ("div", flag)
    return ("pop", -d)


def eliminate_epsilon(C: ClassicalDoca, starts: Optional[Iterable[str]] = None):
    """Reset-form doca with an accepting set, accepting the same language from each start.

    Counters are shrunk by ``F = |Q| + 1`` on the way (``F = 1`` without
    silent rules): ``p(n)`` after a silent run becomes ``p__t<n mod F>`` with
    counter ``n div F``, so every contracted silent run changes the shrunk
    counter by at most one.  A popping silent cycle of effect ``-d`` becomes
    reset states of period ``d``.
    """
    for r in C.rules:
        if r.effect not in (-1, 0, 1):
            raise UnshrunkInput(f"effect {r.effect} in rule {r}")
    starts = tuple(starts) if starts is not None else (C.initial,)
    acc = frozenset(C.accepting)
    has_eps = any(r.letter == EPS for r in C.rules)
    F = C.k + 1 if has_eps else 1

    def name(key):
        if key[0] == "dead":
            return "dead__t_acc" if key[1] else "dead__t"
        _, r, i, f = key
        return f"{r}__t{i}" + ("_acc" if f and r not in acc else "")

    def settle(res, flag):
        """Key for a finished silent run; the counter must already fit below ``F``."""
        if res is None:
            return ("dead", flag)
        r, n = res
        if n >= F:
            raise TransformError(f"silent run ended above the shrink factor at {r}({n})")
        return ("st", r, n, flag or r in acc)

    keys: dict = {}
    queue: list = []

    def visit(key):
        if key not in keys:
            keys[key] = name(key)
            queue.append(key)
        return keys[key]

    start_names = {s: visit(settle(*_close(C, acc, s, 0))) for s in starts}
    rules: list[Rule] = []
    per: dict[str, int] = {}
    goto: dict[str, tuple[str, ...]] = {}
    shapes: dict[str, tuple] = {}

    while queue:
        key = queue.pop(0)
        if key[0] == "dead":
            continue
        _, p, i, _ = key
        src = keys[key]
        for a in C.alphabet:
            # output counter zero: the original counter is exactly i
            hit = C.rule(p, a, 1 if i else 0)
            if hit is not None:
                q, j = hit
                res, flag = _close(C, acc, q, i + j)
                if res is None:
                    rules.append(Rule(src, a, 0, visit(("dead", flag)), 0))
                else:
                    r, n = res
                    rules.append(Rule(src, a, 0, visit(("st", r, n % F, flag or r in acc)), n // F))
            # output counter positive: the original counter is c*F + i with c >= 1
            hit = C.rule(p, a, 1)
            if hit is None:
                continue
            q, j = hit
            o = i + j
            if q not in shapes:
                shapes[q] = _positive_run(C, acc, q)
            shape = shapes[q]
            if shape[0] == "term":
                _, r, pe, flag = shape
                e = o + pe
                rules.append(Rule(src, a, 1, visit(("st", r, e % F, flag or r in acc)), e // F))
            elif shape[0] == "div":
                rules.append(Rule(src, a, 1, visit(("dead", shape[1])), 0))
            else:
                d = shape[1]
                res_name = f"{q}__r{'m1' if o < 0 else o}"
                if res_name not in per:
                    per[res_name] = d
                    # c and c + d lead to the same run, so one representative per residue
                    goto[res_name] = tuple(visit(settle(*_close(C, acc, q, (x + d) * F + o)))
                                           for x in range(d))
                rules.append(Rule(src, a, 1, res_name, 0))

    stable = list(keys.values())
    need = max(per.values(), default=0)
    stable += [f"pad__t{i}" for i in range(max(0, need - len(stable)))]
    accepting = frozenset(nm for key, nm in keys.items() if key[-1])
    D = Doca(tuple(stable), tuple(per), C.alphabet, tuple(rules), per, goto)
    forward = {key[1:3] + (key[3],): nm for key, nm in keys.items() if key[0] == "st"}
    return AcceptingDoca(D, accepting), StateMap(forward, start_names)


# -- acceptance letter and sink -----------------------------------------------------


def _fresh(base: str, taken) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    new = f"{base}_{i}"
    log.warning("letter-clash: %s renamed to %s", base, new)
    return new


def language_to_trace(AD: AcceptingDoca, acc_letter: str = "acc__t", sink: str = "sink__t") -> Doca:
    """Totalise letters into a sink and add an acceptance-letter loop at accepting states.

    The acceptance letter is always the last letter of the result.
    """
    D = AD.doca
    for q in AD.accepting:
        if not D.is_stable(q):
            raise TransformError(f"accepting state {q} is not stable")
    acc = _fresh(acc_letter, set(D.alphabet))
    sink = _fresh(sink, set(D.stable_states) | set(D.reset_states))
    rules = list(D.rules)
    for q in D.stable_states:
        for a in D.alphabet:
            for c in (0, 1):
                if D.rule(q, a, c) is None:
                    rules.append(Rule(q, a, c, sink, 0))
    rules += [Rule(sink, a, c, sink, 0) for a in D.alphabet for c in (0, 1)]
    for q in D.stable_states:
        if q in AD.accepting:
            rules += [Rule(q, acc, c, q, 0) for c in (0, 1)]
    return Doca(D.stable_states + (sink,), D.reset_states, D.alphabet + (acc,), tuple(rules),
                D.per, D.goto)


def acceptance_letter(D: Doca) -> str:
    return D.alphabet[-1]


def strip_acceptance(D: Doca, w) -> tuple[str, ...]:
    acc = acceptance_letter(D)
    return tuple(a for a in w if a != acc)


# -- instances ----------------------------------------------------------------------


def classical_union(C1: ClassicalDoca, C2: ClassicalDoca, prefixes=("L_", "R_")):
    """Side-by-side renaming; returns the union and the two renamed initial states."""
    parts = []
    for C, pre in zip((C1, C2), prefixes):
        rules = [Rule(pre + r.src, r.letter, r.sign, pre + r.dst, r.effect) for r in C.rules]
        parts.append(([pre + s for s in C.states], rules, [pre + s for s in C.accepting], pre + C.initial))
    alphabet = C1.alphabet + tuple(a for a in C2.alphabet if a not in C1.alphabet)
    (s1, r1, f1, i1), (s2, r2, f2, i2) = parts
    U = ClassicalDoca(tuple(s1 + s2), alphabet, tuple(r1 + r2), i1, tuple(f1 + f2))
    return U, i1, i2


def build_instance(C1: ClassicalDoca, C2: ClassicalDoca):
    """``(D, p, q)`` with ``p(0) ~ q(0)`` in ``D`` iff ``L(C1) = L(C2)``."""
    U, i1, i2 = classical_union(C1, C2)
    AD, smap = eliminate_epsilon(U, starts=(i1, i2))
    D = language_to_trace(AD)
    return D, smap.start[i1], smap.start[i2]
