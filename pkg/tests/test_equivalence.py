import pytest

from doca.equivalence import (
    AtLeast,
    EqlevelTuple,
    StateCapExceeded,
    check_equivalence,
    default_bound,
    eqlevel,
    eqlevel_tuple,
    independence_level,
    min_attained_twice,
    zero_eqlevels,
)
from doca.generators import GenSpec, gen_random
from doca.model import Doca, Rule, disjoint_union
from doca.oracle import oracle_eqlevel
from doca.semantics import ModTuple, Plain, ResetCfg, mod_of, run


def test_d2(fx):
    res = eqlevel(fx("D2"), Plain("p", 0), Plain("q", 0), 10)
    assert (res.eqlevel, res.witness) == (1, ("a", "a"))
    v = check_equivalence(fx("D2"), "p", "q")
    assert not v.equivalent and v.label == "inequivalent" and v.result.eqlevel == 1


def test_reflexive(fx):
    for name in ("D1", "D3", "P2"):
        A = fx(name)
        s = Plain(A.stable_states[0], 2)
        res = eqlevel(A, s, s, 30)
        assert res.eqlevel == AtLeast(30) and res.witness is None


def test_d3_after_normalisation(fx):
    D3 = fx("D3")
    res = eqlevel(D3, Plain("p", 0), Plain("q", 0), 5)
    assert (res.eqlevel, res.witness) == (0, ("a",))
    # unstable arguments are normalised first: s(3) moves to q(0)
    assert eqlevel(D3, ResetCfg("s", 3), Plain("q", 0), 5).eqlevel == AtLeast(5)


def test_isomorphic_copies(fx):
    U = disjoint_union(fx("D1"), fx("D1"))
    for B in (5, 20, 64):
        v = check_equivalence(U, "L_p", "R_p", B)
        assert v.equivalent and v.bound == B and v.label == "equivalent-up-to-bound"


def test_exhausted_product():
    # finite product: the verdict is exact
    A = Doca(("p", "q"), (), ("a",), (Rule("p", "a", 0, "q", 0), Rule("q", "a", 0, "p", 0)))
    v = check_equivalence(A, "p", "q", 10)
    assert v.equivalent and v.result.exhausted and v.label == "equivalent"


def test_flipped_goto(fx):
    P2 = fx("P2")
    goto = dict(P2.goto)
    goto["mod2"] = ("dead", "dead")
    flipped = Doca(P2.stable_states, P2.reset_states, P2.alphabet, P2.rules, P2.per, goto)
    U = disjoint_union(P2, flipped)
    v = check_equivalence(U, "L_cnt", "R_cnt")
    assert not v.equivalent and len(v.result.witness) <= 5
    assert oracle_eqlevel(U, Plain("L_cnt", 0), Plain("R_cnt", 0), 6) == v.result.eqlevel


def test_independence_level(fx):
    D4 = fx("D4")
    assert independence_level(D4, "p", 3, 50) == 3
    assert independence_level(D4, "p", 0, 50) == 0
    res = eqlevel(D4, Plain("p", 3), mod_of(D4, Plain("p", 3)), 50)
    # both aaaa and aaab are shortest; the lexicographically least one is returned
    assert res.witness == ("a", "a", "a", "a")
    assert run(D4, Plain("p", 3), "aaab") is not None and run(D4, ModTuple("p", ()), "aaab") is None


def test_il_never_zero():
    A = Doca(("p",), (), ("a",), (Rule("p", "a", 0, "p", 1), Rule("p", "a", 1, "p", 1)))
    assert independence_level(A, "p", 3, 40) == AtLeast(40)


def test_tuple_degenerate(fx):
    D1 = fx("D1")
    s = Plain("q", 3)
    t = mod_of(D1, s)
    tup = eqlevel_tuple(D1, s, t, 40)
    assert tup.b == tup.l == tup.dL == 3
    assert tup.r == AtLeast(40) and tup.o == tup.dR == AtLeast(40)


def test_tuple_d4(fx):
    tup = eqlevel_tuple(fx("D4"), Plain("p", 2), Plain("p", 2), 40)
    assert tup == EqlevelTuple(AtLeast(40), 2, 2, AtLeast(40), 2, 2)
    assert all(min_attained_twice(c) for c in tup.cycles())


def test_tuple_needs_plain_left(fx):
    with pytest.raises(TypeError):
        eqlevel_tuple(fx("D4"), ModTuple("p", ()), Plain("p", 0), 5)


def test_zero_eqlevels(fx):
    assert zero_eqlevels(fx("D2"), 20) == {("p", "q"): 1, ("p", "r"): 0, ("q", "r"): 0}
    assert zero_eqlevels(fx("D4"), 20) == {}
    assert zero_eqlevels(fx("D1"), 20) == {("p", "q"): 0}


def test_min_attained_twice():
    assert min_attained_twice((1, 1, 3))
    assert not min_attained_twice((1, 2, 3))
    assert not min_attained_twice((1, AtLeast(9), AtLeast(9)))
    assert min_attained_twice((AtLeast(9), AtLeast(9)))


def test_default_bound(fx):
    assert default_bound(fx("D1")) == 64
    assert default_bound(fx("P2")) == 4 * 125


def test_state_cap(fx):
    with pytest.raises(StateCapExceeded) as err:
        eqlevel(fx("D1"), Plain("p", 0), Plain("p", 0), 500, state_cap=50)
    assert err.value.code == "bound-exceeded-memory"


def test_bad_bound(fx):
    with pytest.raises(ValueError):
        eqlevel(fx("D1"), Plain("p", 0), Plain("q", 0), 0)


def corpus(n, seed):
    for i in range(n):
        yield gen_random(GenSpec(k=2 + i % 5, alphabet_size=1 + i % 3, rule_density=0.7,
                                 reset_fraction=(i % 3) / 4, seed=seed + i))


def test_symmetry_and_monotonicity():
    for A in corpus(60, 100):
        for p in A.stable_states:
            for q in A.stable_states:
                s, t = Plain(p, 1), Plain(q, 2)
                small, big = eqlevel(A, s, t, 8), eqlevel(A, s, t, 40)
                assert eqlevel(A, t, s, 8).eqlevel == small.eqlevel
                if small.finite:
                    assert big.eqlevel == small.eqlevel and big.witness == small.witness
                elif big.finite:
                    assert big.eqlevel >= 8


def test_witness_drop_along_witness():
    for A in corpus(60, 200):
        p, q = A.stable_states[0], A.stable_states[-1]
        res = eqlevel(A, Plain(p, 0), Plain(q, 0), 30)
        if not res.finite:
            continue
        sides = [run(A, Plain(p, 0), res.witness), run(A, Plain(q, 0), res.witness)]
        assert sides.count(None) == 1
        for j in range(len(res.witness)):
            x = run(A, Plain(p, 0), res.witness[:j])
            y = run(A, Plain(q, 0), res.witness[:j])
            assert eqlevel(A, x, y, 30).eqlevel == res.eqlevel - j
