import math
import random
from fractions import Fraction

import pytest

from qualomega.core import Buchi, CoBuchi, Parity, ProbWordAutomaton
from qualomega.corpus import random_binary, random_lasso, random_semisimple, random_tree, rng_for
from qualomega.errors import AlphabetMismatch, NotBinaryBranching, NotParity, ValidationError
from qualomega.markov import almost_sure, objective_value, sample_acceptance
from qualomega.trees import (
    RegularRun,
    RegularTree,
    TreeAutomaton,
    acceptance_chain,
    collapsed_chain,
    constant_tree,
    contract_silent,
    ensure_run,
    ensure_tree,
    enumerate_regular_runs,
    find_rejecting_run,
    qaslang_member,
    qualitative_run_check,
    qulang_member,
    random_regular_run,
    validate_run,
    validate_tree,
    validate_tree_automaton,
    word_to_tree_copy,
    word_to_tree_switch,
    word_to_universal_tree,
)
from qualomega.words import LassoWord, member_as, value

F = Fraction
H = F(1, 2)
A_OMEGA = LassoWord((), ("a",))


def swap_pair(prio=None):
    delta = {("q0", "a"): {"q0": H, "q1": H}, ("q1", "a"): {"q0": H, "q1": H}}
    return ProbWordAutomaton(("q0", "q1"), ("a",), delta, "q0", Parity(prio or {"q0": 0, "q1": 0}))


def test_tree_validation():
    t = RegularTree(("x", "y"), "x", {"x": "a"}, {"x": "x"}, {"x": "x"})
    assert any("y" in i for i in validate_tree(t))
    assert validate_tree(constant_tree(A_OMEGA), ("a",)) == []
    assert validate_tree(constant_tree(A_OMEGA), ("b",))
    with pytest.raises(ValidationError):
        ensure_tree(t)


def test_constant_tree_shape():
    t = constant_tree(LassoWord(("b",), ("a", "c")))
    assert [t.label[c] for c in t.classes] == ["b", "a", "c"]
    for c in t.classes:
        assert t.child0[c] == t.child1[c]


def test_copy_construction():
    a = random_semisimple(rng_for(2), 3, 2, "parity")
    ta = word_to_tree_copy(a)
    assert validate_tree_automaton(ta) == []
    for (q, l), row in a.delta.items():
        assert ta.row(q, l) == {(p, p): x for p, x in row.items()}


def test_switch_construction():
    a = random_binary(rng_for(4), 3, 2, "parity")
    ts = word_to_tree_switch(a)
    assert validate_tree_automaton(ts) == []
    for q in a.states:
        for l in a.alphabet:
            row = ts.row(q, l)
            assert len(row) == 2 and set(row.values()) == {H}
            assert {(y, x) for x, y in row} == set(row)
    sure = ProbWordAutomaton(("q",), ("a",), {("q", "a"): {"q": 1}}, "q", Parity({"q": 0}))
    with pytest.raises(NotBinaryBranching):
        word_to_tree_switch(sure)


def test_universal_tree_construction():
    a = swap_pair()
    u = word_to_universal_tree(a)
    assert len(u.transitions) == 2 * len(a.states)
    for q, l, x, y in u.transitions:
        assert (q, l, y, x) in u.transitions
    with pytest.raises(NotParity):
        word_to_universal_tree(ProbWordAutomaton(a.states, a.alphabet, a.delta, a.initial, Buchi({"q0"})))


def test_acceptance_chain_trivial():
    a = ProbWordAutomaton(("q",), ("a",), {("q", "a"): {"q": 1}}, "q", Parity({"q": 0}))
    chain, obj = acceptance_chain(word_to_tree_copy(a), constant_tree(A_OMEGA))
    assert len(chain.states) == 2
    assert almost_sure(chain, obj)


def test_acceptance_chain_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        acceptance_chain(word_to_tree_copy(swap_pair()), constant_tree(LassoWord((), ("b",))))


@pytest.mark.parametrize("seed", range(15))
def test_acceptance_chain_structure(seed):
    rng = rng_for(seed)
    a = random_binary(rng, rng.randint(2, 4), 2, "parity")
    t = random_tree(rng, a.alphabet, 4)
    for ta in (word_to_tree_copy(a), word_to_tree_switch(a)):
        chain, _ = acceptance_chain(ta, t)
        n_q, n_c = len(a.states), len(t.classes)
        assert len(chain.states) <= n_q * n_c + n_q**3 * n_c
        for s in chain.states:
            assert sum(chain.successors(s).values()) == 1
            if len(s) == 4:
                q, q0, q1, c = s
                assert set(chain.successors(s)) <= {(q0, t.child0[c]), (q1, t.child1[c])}


@pytest.mark.parametrize("seed", range(20))
def test_constant_tree_matches_word_membership(seed):
    rng = rng_for(50 + seed)
    a = random_semisimple(rng, rng.randint(1, 4), 2, ("rabin", "parity", "buchi")[seed % 3])
    w = random_lasso(rng, a.alphabet, 5)
    assert qaslang_member(word_to_tree_copy(a), constant_tree(w)) == member_as(a, w)


@pytest.mark.parametrize("seed", range(20))
def test_copy_switch_and_collapse_agree(seed):
    rng = rng_for(70 + seed)
    a = random_binary(rng, rng.randint(2, 4), 2, "parity")
    t = random_tree(rng, a.alphabet, 4)
    copy, switch = word_to_tree_copy(a), word_to_tree_switch(a)
    verdict = qaslang_member(switch, t)
    assert qaslang_member(copy, t) == verdict
    chain, obj = acceptance_chain(switch, t)
    assert almost_sure(contract_silent(chain, obj), obj) == verdict
    assert almost_sure(collapsed_chain(a, t), obj) == verdict


def test_contracted_chain_is_quarter_chain():
    a = random_binary(rng_for(9), 3, 1, "parity")
    t = random_tree(rng_for(10), a.alphabet, 3)
    chain, obj = acceptance_chain(word_to_tree_switch(a), t)
    small = contract_silent(chain, obj)
    big = collapsed_chain(a, t)
    assert set(small.states) == set(big.states)
    for s in big.states:
        assert small.successors(s) == big.successors(s)


@pytest.mark.parametrize("seed", range(5))
def test_qaslang_monte_carlo(seed):
    rng = rng_for(400 + seed)
    a = random_binary(rng, 3, 2, "parity")
    t = random_tree(rng, a.alphabet, 3)
    chain, obj = acceptance_chain(word_to_tree_switch(a), t)
    n = 20_000
    hits = sample_acceptance(chain, obj, n, 300, seed)
    p = objective_value(chain, obj)
    if p in (0, 1):
        assert hits == n * p
    else:
        assert abs(hits / n - float(p)) <= 3 * math.sqrt(float(p * (1 - p)) / n)


# -- runs --------------------------------------------------------------------


def _single_state_tree_automaton(prio):
    return TreeAutomaton(("q",), ("a",), {("q", "a", "q", "q")}, "q", Parity({"q": prio}))


def test_constant_accepting_run():
    a = _single_state_tree_automaton(0)
    t = constant_tree(A_OMEGA)
    runs = list(enumerate_regular_runs(a, t, 8))
    assert len(runs) == 1
    check = qualitative_run_check(runs[0])
    assert check.measure == 1 and check.accepting


def test_half_rejecting_run():
    a = TreeAutomaton(
        ("g", "b"), ("a",), {("g", "a", "b", "g"), ("b", "a", "b", "b"), ("g", "a", "g", "g")}, "g", Parity({"g": 0, "b": 1})
    )
    t = constant_tree(A_OMEGA)
    r = RegularRun(
        a,
        t,
        ("r0", "r1", "r2"),
        "r0",
        {"r0": "g", "r1": "b", "r2": "g"},
        {"r0": "p0", "r1": "p0", "r2": "p0"},
        {"r0": "r1", "r1": "r1", "r2": "r2"},
        {"r0": "r2", "r1": "r1", "r2": "r2"},
    )
    ensure_run(r)
    check = qualitative_run_check(r)
    # the 0-cone below the root is rejecting, the 1-cone accepting
    assert check.measure == H and not check.accepting


def test_run_validation_rejects_illegal_transition():
    a = _single_state_tree_automaton(0)
    t = constant_tree(A_OMEGA)
    r = RegularRun(a, t, ("r0",), "r0", {"r0": "q"}, {"r0": "p1"}, {"r0": "r0"}, {"r0": "r0"})
    assert validate_run(r)


def test_deterministic_automaton_has_one_run():
    a = TreeAutomaton(
        ("x", "y"), ("a",), {("x", "a", "y", "x"), ("y", "a", "x", "y")}, "x", Parity({"x": 0, "y": 2})
    )
    assert len(list(enumerate_regular_runs(a, constant_tree(A_OMEGA), 10))) == 1


def test_run_count_grows_with_bound():
    u = word_to_universal_tree(swap_pair())
    t = constant_tree(A_OMEGA)
    counts = [sum(1 for _ in enumerate_regular_runs(u, t, b)) for b in (1, 2, 3, 4)]
    assert counts == sorted(counts) and counts[-1] > counts[0]
    # every run's child swap is again a run, listed under its canonical form
    for r in enumerate_regular_runs(u, t, 3):
        swapped = RegularRun(u, t, r.classes, r.root, r.state, r.node, r.child1, r.child0)
        assert validate_run(swapped) == []


def test_enumeration_is_deterministic_and_distinct():
    u = word_to_universal_tree(random_binary(rng_for(12), 3, 1, "parity"))
    t = constant_tree(A_OMEGA)
    first = list(enumerate_regular_runs(u, t, 4))
    second = list(enumerate_regular_runs(u, t, 4))
    assert first == second
    keys = {(r.classes, tuple(sorted(r.state.items())), tuple(sorted(r.child0.items())), tuple(sorted(r.child1.items()))) for r in first}
    assert len(keys) == len(first)
    for r in first:
        assert validate_run(r) == []
        assert len(r.classes) <= 4


@pytest.mark.parametrize("seed", range(30))
def test_exact_search_agrees_with_enumeration(seed):
    rng = rng_for(600 + seed)
    kind = ("parity", "buchi", "cobuchi")[seed % 3]
    a = random_binary(rng, rng.randint(2, 3), rng.randint(1, 2), "parity")
    u = word_to_universal_tree(a)
    acc = {"parity": u.acc, "buchi": Buchi({a.states[0]}), "cobuchi": CoBuchi({a.states[-1]})}[kind]
    u = TreeAutomaton(u.states, u.alphabet, u.transitions, u.initial, acc)
    t = random_tree(rng, a.alphabet, 2)
    witness = find_rejecting_run(u, t)
    if witness is not None:
        assert validate_run(witness) == []
        assert not qualitative_run_check(witness).accepting
    enumerated_reject = any(not qualitative_run_check(r).accepting for r in enumerate_regular_runs(u, t, 4))
    if enumerated_reject:
        assert witness is not None
    assert qulang_member(u, t) == (witness is None)


@pytest.mark.parametrize("seed", range(10))
def test_random_regular_runs_are_valid(seed):
    rng = rng_for(800 + seed)
    a = random_binary(rng, 3, 2, "parity")
    u = word_to_universal_tree(a)
    t = random_tree(rng, a.alphabet, 3)
    r = random_regular_run(u, t, 64, random.Random(seed))
    assert r is not None and validate_run(r) == [] and len(r.classes) <= 64


def test_direction_one_small():
    # value-1 word: every run of the universal tree automaton accepts
    a = swap_pair({"q0": 0, "q1": 2})
    assert value(a, A_OMEGA).value == 1
    u = word_to_universal_tree(a)
    t = constant_tree(A_OMEGA)
    assert find_rejecting_run(u, t) is None
    assert all(qualitative_run_check(r).accepting for r in enumerate_regular_runs(u, t, 5))
