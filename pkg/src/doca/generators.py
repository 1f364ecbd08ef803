"""Fixture and corpus construction."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import EPS, ClassicalDoca, Doca, Rule


def primes(n: int) -> list[int]:
    out: list[int] = []
    c = 2
    while len(out) < n:
        if all(c % p for p in out):
            out.append(c)
        c += 1
    return out


def gen_prime_family(n: int) -> tuple[Doca, str]:
    """Doca whose traces ``a^m b_i t`` are enabled iff ``p_i`` divides ``m``.

    ``cnt`` counts the a's; ``b_i`` enters the reset state ``mod<p_i>``,
    which sends residue 0 to ``acc`` (where ``t`` loops) and the rest to
    ``dead``.  Rule-less ``pad`` states make room for the largest period.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ps = primes(n)
    pads = [f"pad{i}" for i in range(max(0, ps[-1] - 3))]
    stable = ("cnt", "acc", "dead", *pads)
    resets = tuple(f"mod{p}" for p in ps)
    letters = ("a", *(f"b{i}" for i in range(1, n + 1)), "t")
    rules = [Rule("cnt", "a", 0, "cnt", 1), Rule("cnt", "a", 1, "cnt", 1),
             Rule("acc", "t", 0, "acc", 0)]
    for i, s in enumerate(resets, 1):
        rules += [Rule("cnt", f"b{i}", c, s, 0) for c in (0, 1)]
    per = {s: p for s, p in zip(resets, ps)}
    goto = {s: ("acc",) + ("dead",) * (p - 1) for s, p in zip(resets, ps)}
    return Doca(stable, resets, letters, tuple(rules), per, goto), "cnt"


def gen_prime_classical(ps) -> ClassicalDoca:
    """Classical doca accepting ``a^m b_i`` iff ``ps[i-1]`` divides ``m``.

    ``b_i`` enters a popping silent cycle of length ``ps[i-1]``; the cycle
    state in which the counter hits zero decides acceptance.
    """
    letters = ("a", *(f"b{i}" for i in range(1, len(ps) + 1)))
    states = ["c", "acc", "dead"]
    rules = [Rule("c", "a", 0, "c", 1), Rule("c", "a", 1, "c", 1)]
    for i, p in enumerate(ps, 1):
        ring = [f"m{i}_{r}" for r in range(p)]
        states += ring
        rules += [Rule("c", f"b{i}", c, ring[0], 0) for c in (0, 1)]
        for r, s in enumerate(ring):
            rules.append(Rule(s, EPS, 1, ring[(r + 1) % p], -1))
            rules.append(Rule(s, EPS, 0, "acc" if r == 0 else "dead", 0))
    return ClassicalDoca(tuple(states), letters, tuple(rules), "c", ("acc",))


@dataclass(frozen=True)
class GenSpec:
    k: int = 4
    alphabet_size: int = 2
    rule_density: float = 0.6
    reset_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.alphabet_size < 1:
            raise ValueError("k and alphabet_size must be positive")
        if not 0 < self.rule_density <= 1 or not 0 <= self.reset_fraction < 1:
            raise ValueError("rule_density must be in (0,1], reset_fraction in [0,1)")


def gen_random(spec: GenSpec) -> Doca:
    """Seeded random reset-form doca; always valid."""
    rng = random.Random(spec.seed)
    n_reset = min(int(spec.k * spec.reset_fraction), spec.k - 1)
    stable = tuple(f"p{i}" for i in range(spec.k - n_reset))
    resets = tuple(f"s{i}" for i in range(n_reset))
    letters = tuple("abcdefghijklmnopqrstuvwxyz"[i] if i < 26 else f"x{i}"
                    for i in range(spec.alphabet_size))
    targets = stable + resets
    rules = []
    for p in stable:
        for a in letters:
            for c in (0, 1):
                if rng.random() < spec.rule_density:
                    j = rng.choice((0, 1) if c == 0 else (-1, 0, 1))
                    rules.append(Rule(p, a, c, rng.choice(targets), j))
    per, goto = {}, {}
    for s in resets:
        per[s] = rng.randint(1, len(stable))
        goto[s] = tuple(rng.choice(stable) for _ in range(per[s]))
    return Doca(stable, resets, letters, tuple(rules), per, goto)


def gen_random_classical(k: int = 3, alphabet_size: int = 2, rule_density: float = 0.7,
                         eps_fraction: float = 0.3, accept_fraction: float = 0.4,
                         seed: int = 0) -> ClassicalDoca:
    """Seeded random classical doca; silent rules honour the exclusivity condition."""
    rng = random.Random(seed)
    states = tuple(f"q{i}" for i in range(k))
    letters = tuple("abcdefghijklmnopqrstuvwxyz"[i] for i in range(alphabet_size))
    rules = []
    for p in states:
        for c in (0, 1):
            effects = (0, 1) if c == 0 else (-1, 0, 1)
            if rng.random() < eps_fraction:
                rules.append(Rule(p, EPS, c, rng.choice(states), rng.choice(effects)))
                continue
            for a in letters:
                if rng.random() < rule_density:
                    rules.append(Rule(p, a, c, rng.choice(states), rng.choice(effects)))
    accepting = tuple(q for q in states if rng.random() < accept_fraction)
    return ClassicalDoca(states, letters, tuple(rules), states[0], accepting)
