import pytest

from doca.equivalence import AtLeast
from doca.generators import gen_random_classical
from doca.model import ClassicalDoca, Doca, Rule
from doca.oracle import (
    MAX_DEPTH,
    DepthTooLarge,
    accepts,
    language,
    language_difference,
    oracle_eqlevel,
    oracle_traces,
)
from doca.semantics import ModTuple, Plain


def test_d1_traces(fx):
    ts = oracle_traces(fx("D1"), Plain("p", 0), 3)
    assert ("a", "a", "b") in ts and ("a", "b", "b") not in ts
    assert len(ts) == 6


def test_ruleless_state():
    A = Doca(("p",), (), ("a", "b"), ())
    assert oracle_traces(A, Plain("p", 4), 5).words == {()}


def test_mod_traces(fx):
    assert oracle_traces(fx("D4"), ModTuple("p", ()), 2).words == {(), ("a",), ("a", "a")}


def test_prefix_closed(fx):
    for name in ("D1", "D2", "D3", "P2"):
        A = fx(name)
        for s in A.stable_states:
            words = oracle_traces(A, Plain(s, 1), 5).words
            assert all(w[:-1] in words for w in words if w)


def test_eqlevels(fx):
    assert oracle_eqlevel(fx("D2"), Plain("p", 0), Plain("q", 0), 4) == 1
    assert oracle_eqlevel(fx("D3"), Plain("p", 0), Plain("q", 0), 2) == 0
    assert oracle_eqlevel(fx("D1"), Plain("p", 2), Plain("p", 2), 7) == AtLeast(7)


def test_depth_guard(fx):
    with pytest.raises(DepthTooLarge) as err:
        oracle_traces(fx("D1"), Plain("p", 0), MAX_DEPTH + 1)
    assert err.value.code == "depth-too-large"
    with pytest.raises(DepthTooLarge):
        oracle_eqlevel(fx("D1"), Plain("p", 0), Plain("q", 0), 15)


def test_classical_acceptance(fx):
    C = fx("C3")
    assert accepts(C, "b") and accepts(C, "aaab") and accepts(C, "aaabt")
    assert not accepts(C, "ab") and not accepts(C, "aab") and not accepts(C, "")
    # q2 reads t but is not accepting
    assert not accepts(C, "abt")


def test_acceptance_along_silent_run():
    # q0 -eps-> q1 (accepting) -eps-> q2: accepted although the run ends in q2
    C = ClassicalDoca(("q0", "q1", "q2"), ("a",),
                      (Rule("q0", "eps", 0, "q1", 0), Rule("q1", "eps", 0, "q2", 0)), "q0", ("q1",))
    assert language(C, 3) == {()}


def test_divergent_silent_run():
    # q0 climbs forever through q1; q1 is accepting, so the empty word is accepted and nothing else
    C = ClassicalDoca(("q0", "q1"), ("a",),
                      (Rule("q0", "eps", 0, "q1", 1), Rule("q0", "eps", 1, "q1", 1),
                       Rule("q1", "eps", 1, "q0", 0)), "q0", ("q1",))
    assert language(C, 4) == {()}


def test_zero_bounce_terminates():
    # counter alternates 0,1,0,1 in a cycle through zero: diverges, never accepts
    C = ClassicalDoca(("q0", "q1"), ("a",),
                      (Rule("q0", "eps", 0, "q1", 1), Rule("q1", "eps", 1, "q0", -1)), "q0", ())
    assert language(C, 4) == set()


def test_language_difference():
    C = gen_random_classical(seed=5)
    assert language_difference(C, C, 8) is None
    one = ClassicalDoca(("s", "t"), ("a",), (Rule("s", "a", 0, "t", 0),), "s", ("t",))
    two = ClassicalDoca(("s", "t", "u"), ("a",), (Rule("s", "a", 0, "t", 0), Rule("t", "a", 0, "u", 0)),
                        "s", ("u",))
    assert language_difference(one, two, 5) == ("a",)
