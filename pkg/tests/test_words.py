import math
from fractions import Fraction

import pytest

import oracles
from qualomega.core import Buchi, CoBuchi, Parity, ProbWordAutomaton
from qualomega.corpus import random_binary, random_lasso, random_semisimple, random_simple, rng_for
from qualomega.errors import DocumentError, NotBinaryBranching
from qualomega.markov import ChainObjective, sample_acceptance
from qualomega.trees import branch_measure
from qualomega.words import (
    LassoWord,
    member_as,
    member_prob,
    pad,
    parse_lasso,
    product_chain,
    tree_of_runs,
    value,
)

F = Fraction
H = F(1, 2)


def two_state(p0, p1):
    delta = {("q0", "a"): {"q0": H, "q1": H}, ("q1", "a"): {"q1": F(1)}}
    return ProbWordAutomaton(("q0", "q1"), ("a",), delta, "q0", Parity({"q0": p0, "q1": p1}))


A_OMEGA = LassoWord((), ("a",))


def test_product_chain_one_state():
    a = ProbWordAutomaton(("q",), ("a",), {("q", "a"): {"q": 1}}, "q", Parity({"q": 0}))
    c = product_chain(a, A_OMEGA)
    assert c.states == (("q", 0),)
    assert c.delta == {("q", 0): {("q", 0): F(1)}}
    assert value(a, A_OMEGA).value == 1


def test_product_chain_transcription():
    c = product_chain(two_state(1, 0), A_OMEGA)
    assert c.delta == {("q0", 0): {("q0", 0): H, ("q1", 0): H}, ("q1", 0): {("q1", 0): F(1)}}
    assert c.labels == {("q0", 0): "q0", ("q1", 0): "q1"}


def test_value_examples():
    assert value(two_state(1, 0), A_OMEGA).value == 1
    assert value(two_state(0, 1), A_OMEGA).value == 0
    assert (member_as(two_state(1, 0), A_OMEGA), member_prob(two_state(1, 0), A_OMEGA)) == (True, True)
    assert (member_as(two_state(0, 1), A_OMEGA), member_prob(two_state(0, 1), A_OMEGA)) == (False, False)


def test_value_half_member_split():
    delta = {("i", "a"): {"acc": H, "rej": H}, ("acc", "a"): {"acc": 1}, ("rej", "a"): {"rej": 1}}
    a = ProbWordAutomaton(("i", "acc", "rej"), ("a",), delta, "i", Buchi({"acc"}))
    assert value(a, A_OMEGA).value == H
    assert (member_as(a, A_OMEGA), member_prob(a, A_OMEGA)) == (False, True)


def test_cobuchi_value():
    a = two_state(0, 0)
    a = ProbWordAutomaton(a.states, a.alphabet, a.delta, a.initial, CoBuchi({"q0"}))
    assert value(a, A_OMEGA).value == 1


def _corpus(seed, n, maker=random_semisimple, kinds=("rabin", "parity", "buchi", "cobuchi")):
    rng = rng_for(seed)
    for i in range(n):
        a = maker(rng, rng.randint(2, 4), rng.randint(1, 2), kinds[i % len(kinds)])
        yield a, random_lasso(rng, a.alphabet, 5)


def _fold(w: LassoWord, k: int):
    """Position of the k-unrolled lasso mapped back onto ``w``'s positions."""
    n = len(w.prefix) + len(w.cycle)
    return lambda j: j if j < n else len(w.prefix) + (j - len(w.prefix)) % len(w.cycle)


@pytest.mark.parametrize("seed", range(30))
def test_unroll_invariance_and_lumping(seed):
    (a, w), = _corpus(seed, 1)
    base = value(a, w).value
    for other, fold in (
        (LassoWord(w.prefix + w.cycle, w.cycle), _fold(w, 1)),
        (LassoWord(w.prefix, w.cycle + w.cycle), _fold(w, 2)),
    ):
        assert value(a, other).value == base
        big, small = product_chain(a, other), product_chain(a, w)
        for (q, j), row in big.delta.items():
            lumped = {}
            for (p, k), x in row.items():
                key = (p, fold(k))
                lumped[key] = lumped.get(key, 0) + x
            assert lumped == small.delta[(q, fold(j))]


@pytest.mark.parametrize("seed", range(40))
def test_value_matches_grid_oracle(seed):
    (a, _), = _corpus(500 + seed, 1)
    rng = rng_for(seed)
    for _ in range(3):
        w = random_lasso(rng, a.alphabet, 3)
        assert value(a, w).value == oracles.word_value(a, w.prefix, w.cycle)


def test_value_matches_oracle_exhaustive_small():
    rng = rng_for(77)
    for i in range(6):
        a = random_simple(rng, 3, 2, ("rabin", "parity", "buchi")[i % 3])
        for u, v in oracles.lassos(a.alphabet, 3):
            assert value(a, LassoWord(u, v)).value == oracles.word_value(a, u, v)


@pytest.mark.parametrize("seed", range(20))
def test_value_range_and_member_implication(seed):
    for a, w in _corpus(900 + seed, 3):
        v = value(a, w).value
        assert 0 <= v <= 1
        assert not member_as(a, w) or member_prob(a, w)


def test_tree_of_runs_two_classes():
    delta = {("q0", "a"): {"q0": H, "q1": H}, ("q1", "a"): {"q0": H, "q1": H}}
    a = ProbWordAutomaton(("q0", "q1"), ("a",), delta, "q0", Buchi({"q1"}))
    t = tree_of_runs(a, A_OMEGA)
    assert len(t.classes) == 2
    assert t.label[t.child0[t.root]] == "q0" and t.label[t.child1[t.root]] == "q1"
    mirrored = ProbWordAutomaton(("q1", "q0"), ("a",), delta, "q0", Buchi({"q1"}))
    m = tree_of_runs(mirrored, A_OMEGA)
    assert m.label[m.child0[m.root]] == "q1" and m.label[m.child1[m.root]] == "q0"


def test_tree_of_runs_needs_binary():
    with pytest.raises(NotBinaryBranching):
        tree_of_runs(two_state(0, 1), A_OMEGA)


@pytest.mark.parametrize("seed", range(25))
def test_value_equals_branch_measure_of_tree_of_runs(seed):
    for a, w in _corpus(3000 + seed, 2, random_binary, ("rabin", "parity")):
        t = tree_of_runs(a, w)
        assert len(t.classes) <= len(a.states) * len(w)
        assert branch_measure(t, a.acc) == value(a, w).value


def test_parse_lasso_forms():
    assert parse_lasso("ab;b", ("a", "b")) == LassoWord(("a", "b"), ("b",))
    assert parse_lasso(";a") == LassoWord((), ("a",))
    assert parse_lasso("x1 x2;x1", ("x1", "x2")) == LassoWord(("x1", "x2"), ("x1",))
    assert parse_lasso("x1;x2", ("x1", "x2")) == LassoWord(("x1",), ("x2",))
    assert str(parse_lasso("a,b;a", ("a", "b"))) == "a b;a"
    for bad in ("ab", "a;", "a;b;c"):
        with pytest.raises(DocumentError):
            parse_lasso(bad, ("a", "b"))
    with pytest.raises(DocumentError):
        parse_lasso("a;z", ("a", "b"))


def test_lasso_needs_cycle():
    with pytest.raises(ValueError):
        LassoWord(("a",), ())


def test_pad():
    w = LassoWord(("a",), ("b", "c"))
    assert pad(w, 3, "#") == LassoWord(("a", "#", "#"), ("b", "#", "#", "c", "#", "#"))
    assert pad(w, 1, "#") == w


@pytest.mark.parametrize("seed", range(4))
def test_monte_carlo_agrees(seed):
    for a, w in _corpus(7000 + seed, 2, random_simple, ("parity", "rabin")):
        res = value(a, w)
        n = 20_000
        hits = sample_acceptance(res.chain, ChainObjective(a.acc), n, 200, seed)
        p = res.value
        if p in (0, 1):
            assert hits == n * p
        else:
            assert abs(hits / n - float(p)) <= 3 * math.sqrt(float(p * (1 - p)) / n)
