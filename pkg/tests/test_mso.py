import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qualomega.core import Buchi, Parity
from qualomega.corpus import random_binary, rng_for
from qualomega.errors import CodingWidthTooSmall, DocumentError, NotParity
from qualomega.mso import (
    FO,
    SO,
    And,
    Coding,
    ForallFO,
    ForallPath,
    ForallSO,
    Mem,
    Names,
    Not,
    Succ0,
    Succ1,
    Var,
    emptiness_sentence,
    encode_run,
    free_variables,
    is_sentence,
    parse,
    path_axioms,
    phi_A,
    scope_issues,
    stats,
    to_text,
    walk,
)
from qualomega.trees import TreeAutomaton, word_to_universal_tree


def universal(seed, n=3, m=2):
    rng = rng_for(seed)
    return word_to_universal_tree(random_binary(rng, n, m, "parity"))


X = Var("X", SO)


def test_path_axioms_shape():
    f = path_axioms(X)
    s = stats(f)
    assert s["forallP1"] == 0
    assert scope_issues(f, [X]) == []
    assert free_variables(f) == {X}
    text = to_text(f)
    assert "succ0" in text and "succ1" in text


def test_path_axioms_root_and_exclusivity_clauses():
    f = path_axioms(X)
    # top level: (root in X) and (prefix closed) and (exactly one child)
    parts = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack += [g.right, g.left]
        else:
            parts.append(g)
    assert len(parts) == 3
    progress = parts[2]
    assert isinstance(progress, ForallFO)
    # the "not both" conjunct is a negated conjunction of the two child memberships
    negs = [g for g in walk(progress) if isinstance(g, Not) and isinstance(g.body, And)]
    assert any(
        {type(a) for a in walk(n.body) if isinstance(a, (Succ0, Succ1))} == {Succ0, Succ1} for n in negs
    )


def test_coding_round_trip():
    names = ("a", "b", "c", "d", "e")
    c = Coding.of(names)
    assert c.width == 3 and not c.complete
    for n in names:
        assert c.decode(c.encode(n)) == n
    assert len({c.encode(n) for n in names}) == len(names)
    with pytest.raises(CodingWidthTooSmall):
        Coding(names, 2)
    assert Coding.of(("a",)).width == 1


def test_single_transition_run_formula():
    a = TreeAutomaton(("q",), ("a",), {("q", "a", "q", "q")}, "q", Parity({"q": 0}))
    names = Names({"X1", "Y1"})
    f = encode_run(a, [Var("X1", SO)], [Var("Y1", SO)], Coding.of(a.alphabet), Coding.of(a.states), names)
    assert scope_issues(f, [Var("X1", SO), Var("Y1", SO)]) == []


def test_run_formula_narrow_coding():
    a = universal(1)
    with pytest.raises(CodingWidthTooSmall):
        phi_A(a, width=0)


def test_phi_requires_parity():
    a = universal(2)
    with pytest.raises(NotParity):
        phi_A(TreeAutomaton(a.states, a.alphabet, a.transitions, a.initial, Buchi({a.initial})))


@pytest.mark.parametrize("seed", range(10))
def test_phi_shape(seed):
    a = universal(seed, 2 + seed % 3, 1 + seed % 3)
    enc = phi_A(a)
    assert stats(enc.formula)["forallP1"] == 1
    assert scope_issues(enc.formula, enc.inputs) == []
    assert free_variables(enc.formula) <= set(enc.inputs)
    s = emptiness_sentence(a)
    assert is_sentence(s) and scope_issues(s) == []


@pytest.mark.parametrize("seed", range(10))
def test_print_parse_round_trip(seed):
    a = universal(100 + seed)
    f = phi_A(a).formula
    assert parse(to_text(f)) == f
    assert parse(to_text(f, indent=2)) == f


def test_validity_conjunct_only_for_incomplete_codings():
    full = universal(5, 3, 2)
    three = universal(5, 3, 3)
    assert phi_A(full).letters.complete
    assert isinstance(phi_A(full).formula, ForallSO)
    assert not phi_A(three).letters.complete
    assert isinstance(phi_A(three).formula, And)


def test_size_bound_regression():
    for seed in range(15):
        a = universal(200 + seed, 2 + seed % 4, 1 + seed % 3)
        enc = phi_A(a)
        n, m = enc.letters.width, enc.states.width
        k = len(set(a.acc.priority.values()))
        bound = 4 * (len(a.transitions) * (n + m) + len(a.states) * m + len(a.alphabet) * n) + 40 * k + 80
        assert stats(enc.formula)["atoms"] <= bound


def test_scope_checker_catches_errors():
    x = Var("x", FO)
    assert scope_issues(Mem(x, X))
    assert scope_issues(ForallSO(X, Mem(x, X)))
    assert not scope_issues(ForallFO(x, ForallSO(X, Mem(x, X))))
    assert scope_issues(ForallPath(Var("x", FO), Mem(x, X)), [x, X])
    assert scope_issues(ForallFO(Var("X", FO), Mem(x, X)), [x, X])


def test_parse_errors():
    for bad in ("(in x)", "(foo x y)", "(not (in x X)) extra", "(and (in x X)"):
        with pytest.raises(DocumentError):
            parse(bad)


atoms = st.sampled_from(
    [Succ0(Var("x", FO), Var("y", FO)), Succ1(Var("y", FO), Var("x", FO)), Mem(Var("x", FO), Var("S", SO))]
)
formulas = st.recursive(
    atoms,
    lambda sub: st.one_of(
        sub.map(Not),
        st.tuples(sub, sub).map(lambda p: And(*p)),
        sub.map(lambda f: ForallFO(Var("x", FO), f)),
        sub.map(lambda f: ForallSO(Var("S", SO), f)),
        sub.map(lambda f: ForallPath(Var("S", SO), f)),
    ),
    max_leaves=20,
)


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_round_trip_property(f):
    assert parse(to_text(f)) == f
    assert parse(to_text(f, indent=1)) == f
