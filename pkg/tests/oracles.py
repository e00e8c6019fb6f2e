"""Reference implementations used only by the tests.

They share no code with the package beyond the plain data classes: graph
search is a boolean transitive closure, absorption probabilities come from
sympy's exact linear solver, and product chains are built over the full
state x position grid.
"""

from fractions import Fraction
from itertools import product

import sympy


def closure(states, succ):
    """reach[s] = set of states reachable from s in >= 0 steps (Warshall)."""
    reach = {s: {s} | {t for t in succ(s)} for s in states}
    for k in states:
        for i in states:
            if k in reach[i]:
                reach[i] |= reach[k]
    return reach


def bsccs(states, succ):
    reach = closure(states, succ)
    bottoms = []
    seen = set()
    for s in states:
        if s in seen:
            continue
        if all(s in reach[t] for t in reach[s]):
            comp = frozenset(reach[s])
            bottoms.append(comp)
            seen |= comp
    return bottoms


def absorption(states, delta, initial, targets):
    """Probabilities of ending in each bottom set, from ``initial``, via sympy."""
    in_bottom = {s for b in targets for s in b}
    if initial in in_bottom:
        return [Fraction(1) if initial in b else Fraction(0) for b in targets]
    transient = [s for s in states if s not in in_bottom]
    n = len(transient)
    pos = {s: i for i, s in enumerate(transient)}
    M = sympy.eye(n)
    for s in transient:
        for t, p in delta[s].items():
            if t in pos:
                M[pos[s], pos[t]] -= sympy.Rational(p.numerator, p.denominator)
    out = []
    for b in targets:
        rhs = sympy.zeros(n, 1)
        for s in transient:
            rhs[pos[s]] = sum(
                (sympy.Rational(p.numerator, p.denominator) for t, p in delta[s].items() if t in b),
                sympy.Integer(0),
            )
        # transient states that cannot reach any bottom set do not exist in a finite chain
        x = M.LUsolve(rhs)
        v = x[pos[initial]]
        out.append(Fraction(int(v.p), int(v.q)))
    return out


def chain_value(states, delta, initial, labels, accepts, silent=lambda l: l is None):
    """Value of an inf-set objective: ``accepts(frozenset of non-silent labels)``."""
    states = list(states)
    succ = lambda s: [t for t, p in delta[s].items() if p > 0]
    reach = closure(states, succ)
    live = [s for s in states if s in reach[initial]]
    bs = bsccs(live, succ)
    probs = absorption(live, delta, initial, bs)
    total = Fraction(0)
    for b, p in zip(bs, probs):
        inf = frozenset(labels[s] for s in b if not silent(labels[s]))
        if p and accepts(inf):
            total += p
    return total, bs, probs


def word_value(a, prefix, cycle):
    """Product chain over the full grid Q x positions, then ``chain_value``."""
    word = list(prefix) + list(cycle)
    n = len(word)
    nu = len(prefix)

    def nxt(i):
        return i + 1 if i + 1 < n else nu

    states = list(product(a.states, range(n)))
    delta = {}
    for q, i in states:
        row = {}
        for p in a.states:
            x = a.delta.get((q, word[i]), {}).get(p, Fraction(0))
            if x:
                row[(p, nxt(i))] = x
        delta[(q, i)] = row
    labels = {s: s[0] for s in states}
    v, _, _ = chain_value(states, delta, (a.initial, 0), labels, a.acc.accepts)
    return v


def lassos(alphabet, max_total):
    """All lassos (u, v) with |v| >= 1 and |u| + |v| <= max_total."""
    for total in range(1, max_total + 1):
        for nu in range(total):
            for word in product(alphabet, repeat=total):
                yield tuple(word[:nu]), tuple(word[nu:])


def rabin_accepts_lasso(pairs, prefix, cycle):
    inf = set(cycle)
    return any(inf & set(a) and not inf & set(b) for a, b in pairs)
