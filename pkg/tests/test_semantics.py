import random

import pytest

from doca.generators import GenSpec, gen_random
from doca.model import MAX_COUNTER, CounterOverflow, Doca, Rule
from doca.oracle import oracle_traces
from doca.semantics import (
    FixRes,
    InvalidState,
    ModTuple,
    Plain,
    ResetCfg,
    delta_lcm,
    enabled,
    mod_of,
    normalize,
    run,
    step,
)


def periods_doca(periods):
    """Rule-less stable states plus one reset state per period."""
    stable = tuple(f"p{i}" for i in range(max(periods)))
    resets = tuple(f"s{i}" for i in range(len(periods)))
    per = dict(zip(resets, periods))
    goto = {s: ("p0",) * n for s, n in per.items()}
    return Doca(stable, resets, ("a",), (), per, goto)


def test_simple_step(fx):
    assert step(fx("D1"), Plain("p", 0), "a") == (Plain("p", 1), "simple")


def test_combined_step(fx):
    out = step(fx("D3"), Plain("p", 5), "b")
    assert out.target == Plain("q", 0) and out.kind == "combined"
    assert step(fx("D3"), Plain("p", 4), "b").target == Plain("p", 0)


def test_mod_never_uses_zero_rules(fx):
    assert step(fx("D4"), ModTuple("p", ()), "b") is None
    assert step(fx("D4"), ModTuple("p", ()), "a") == (ModTuple("p", ()), "simple")


def test_mod_into_reset(fx):
    D3 = fx("D3")
    # residue 1 for s, effect 0: FixRes s[1] then goto q
    assert step(D3, ModTuple("p", (1,)), "b") == (Plain("q", 0), "combined")
    assert step(D3, ModTuple("p", (1,)), "a").target == ModTuple("p", (0,))


def test_run(fx):
    D1 = fx("D1")
    assert run(D1, Plain("p", 0), "aab") == Plain("q", 1)
    assert run(D1, Plain("p", 0), "b") is None
    for name in ("D1", "D2", "D3", "D4", "P2"):
        A = fx(name)
        for s in A.stable_states:
            assert run(A, Plain(s, 3), "") == Plain(s, 3)


def test_enabled(fx):
    assert enabled(fx("D2"), Plain("r", 0)) == set()
    assert enabled(fx("D4"), Plain("p", 3)) == {"a"}
    assert enabled(fx("D4"), ModTuple("p", ())) == {"a"}
    assert enabled(fx("D4"), Plain("p", 0)) == {"b"}


def test_mod_of():
    A = periods_doca((7, 4, 6, 8))
    assert mod_of(A, Plain("p0", 10)) == ModTuple("p0", (3, 2, 4, 2))
    assert delta_lcm(A) == 168


def test_mod_of_fixtures(fx):
    assert mod_of(fx("D4"), Plain("p", 17)) == ModTuple("p", ())
    assert mod_of(fx("D3"), ResetCfg("s", 5)) == FixRes("s", 1)


def test_delta_lcm(fx):
    assert delta_lcm(fx("D4")) == 1
    assert delta_lcm(periods_doca((5,))) == 5
    assert delta_lcm(fx("P2")) == 6


def test_invalid_states(fx):
    D3 = fx("D3")
    for bad in (Plain("zz", 0), Plain("p", -1), ModTuple("p", ()), ModTuple("p", (2,)),
                FixRes("s", 2), ResetCfg("p", 0)):
        with pytest.raises(InvalidState) as err:
            step(D3, bad, "a") if not isinstance(bad, (FixRes, ResetCfg)) else normalize(D3, bad)
        assert err.value.code == "invalid-state"
    with pytest.raises(InvalidState):
        step(D3, Plain("p", 0), "z")
    with pytest.raises(InvalidState):
        step(D3, ResetCfg("s", 1), "a")


def test_normalize(fx):
    D3 = fx("D3")
    assert normalize(D3, ResetCfg("s", 7)) == Plain("q", 0)
    assert normalize(D3, FixRes("s", 0)) == Plain("p", 0)
    assert normalize(D3, Plain("p", 2)) == Plain("p", 2)


def test_overflow():
    A = Doca(("p",), (), ("a",), (Rule("p", "a", 1, "p", 1),))
    with pytest.raises(CounterOverflow):
        step(A, Plain("p", MAX_COUNTER), "a")


def random_corpus(n, seed=0):
    rng = random.Random(seed)
    for i in range(n):
        yield gen_random(GenSpec(k=rng.randint(2, 6), alphabet_size=rng.randint(1, 3),
                                 rule_density=rng.uniform(0.4, 1.0), reset_fraction=rng.choice([0, 0.25, 0.5]),
                                 seed=seed * 10_000 + i)), rng


def test_unstable_states_trace_like_their_successor():
    for A, rng in random_corpus(40, seed=1):
        for s in A.reset_states:
            m = rng.randint(0, 20)
            u = ResetCfg(s, m)
            assert oracle_traces(A, u, 6) == oracle_traces(A, normalize(A, u), 6)
            # reset collapse: s(m) and its Mod image behave alike
            assert oracle_traces(A, u, 6) == oracle_traces(A, mod_of(A, u), 6)


def test_counter_moves_by_at_most_one():
    for A, rng in random_corpus(40, seed=2):
        s = Plain(rng.choice(A.stable_states), rng.randint(0, 5))
        for _ in range(30):
            a = rng.choice(A.alphabet)
            out = step(A, s, a)
            if out is None:
                break
            if out.kind == "simple":
                assert abs(out.target.m - s.m) <= 1
            else:
                assert out.target.m == 0
            assert out.target.m >= 0
            s = out.target


def residues_after(A, s, w):
    end = run(A, s, w)
    return None if end is None or not isinstance(end, ModTuple) else end


def test_residue_commutation():
    for A, rng in random_corpus(60, seed=3):
        if not A.reset_states:
            continue
        p = rng.choice(A.stable_states)
        c = tuple(rng.randrange(n) for n in A._periods)
        d = tuple(rng.randrange(n) for n in A._periods)
        w = tuple(rng.choice(A.alphabet) for _ in range(rng.randint(0, 10)))
        e1, e2 = run(A, ModTuple(p, c), w), run(A, ModTuple(p, d), w)
        if isinstance(e1, ModTuple) and isinstance(e2, ModTuple):
            assert e1.p == e2.p
            for x1, x2, y1, y2, n in zip(e1.residues, e2.residues, c, d, A._periods):
                assert (x2 - x1) % n == (y2 - y1) % n
