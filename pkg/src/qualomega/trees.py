"""Regular trees, tree automata and qualitative acceptance.

Only regular trees are handled: a tree is a finite rooted graph of node
classes where every class has a 0-child and a 1-child.  Runs are regular too
and carry, per run class, the automaton state and the input class they sit
on.  Because every class has finitely many successors, the infinite acceptance
chain over tree nodes quotients to a finite chain over classes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterator, List, Optional, Tuple

from qualomega.core import (
    Buchi,
    CoBuchi,
    Parity,
    ProbWordAutomaton,
    _acceptance_issues,
    binary_successors,
    classify,
    AutomatonClass,
)
from qualomega.errors import (
    AlphabetMismatch,
    NotBinaryBranching,
    NotParity,
    UnsupportedAcceptance,
    ValidationError,
)
from qualomega.markov import (
    ChainObjective,
    FiniteChain,
    almost_sure,
    objective_value,
    reachable,
    strongly_connected_components,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RegularTree:
    classes: Tuple[Hashable, ...]
    root: Hashable
    label: Dict[Hashable, str]
    child0: Dict[Hashable, Hashable]
    child1: Dict[Hashable, Hashable]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    def child(self, c, bit: int):
        return self.child1[c] if bit else self.child0[c]


def validate_tree(t: RegularTree, alphabet=None) -> list:
    issues = []
    declared = set(t.classes)
    if t.root not in declared:
        issues.append(f"root {t.root!r} undeclared")
        return issues
    for c in t.classes:
        for name, m in (("label", t.label), ("child0", t.child0), ("child1", t.child1)):
            if c not in m:
                issues.append(f"class {c!r} has no {name}")
        for m in (t.child0, t.child1):
            if c in m and m[c] not in declared:
                issues.append(f"class {c!r} points to undeclared class {m[c]!r}")
        if alphabet is not None and c in t.label and t.label[c] not in alphabet:
            issues.append(f"class {c!r} labelled {t.label[c]!r} outside the alphabet")
    if issues:
        return issues
    seen = set(reachable(t.root, lambda c: (t.child0[c], t.child1[c])))
    issues += [f"class {c!r} unreachable from the root" for c in t.classes if c not in seen]
    return issues


def ensure_tree(t: RegularTree, alphabet=None) -> RegularTree:
    issues = validate_tree(t, alphabet)
    if issues:
        raise ValidationError(issues)
    return t


def constant_tree(w) -> RegularTree:
    """The tree whose every branch reads the lasso ``w``."""
    n = len(w.prefix) + len(w.cycle)
    names = [f"p{i}" for i in range(n)]
    nxt = {names[i]: names[w.next(i)] for i in range(n)}
    return RegularTree(tuple(names), names[0], {names[i]: w.letter(i) for i in range(n)}, nxt, dict(nxt))


# --------------------------------------------------------------------------
# automata
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeAutomaton:
    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    transitions: frozenset
    initial: str
    acc: object

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(tuple(x) for x in self.transitions))
        idx = {q: i for i, q in enumerate(self.states)}
        table: Dict[Tuple[str, str], List[Tuple[str, str]]] = {}
        for q, a, q0, q1 in self.transitions:
            table.setdefault((q, a), []).append((q0, q1))
        for v in table.values():
            v.sort(key=lambda p: (idx.get(p[0], -1), idx.get(p[1], -1), p))
        object.__setattr__(self, "_table", table)

    def choices(self, q, a) -> List[Tuple[str, str]]:
        return self._table.get((q, a), [])

    def allows(self, q, a, q0, q1) -> bool:
        return (q, a, q0, q1) in self.transitions

    def sorted_transitions(self):
        idx = {q: i for i, q in enumerate(self.states)}
        aidx = {a: i for i, a in enumerate(self.alphabet)}
        return sorted(
            self.transitions, key=lambda x: (idx[x[0]], aidx[x[1]], idx[x[2]], idx[x[3]])
        )


@dataclass(frozen=True)
class ProbTreeAutomaton:
    """``delta[(q, a)]`` maps ``(left, right)`` state pairs to probabilities."""

    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    delta: Dict[Tuple[str, str], Dict[Tuple[str, str], Fraction]]
    initial: str
    acc: object

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(
            self,
            "delta",
            {
                tuple(k): {tuple(p): Fraction(x) for p, x in row.items() if Fraction(x) != 0}
                for k, row in self.delta.items()
            },
        )

    def row(self, q, a) -> Dict[Tuple[str, str], Fraction]:
        return self.delta.get((q, a), {})

    def support(self) -> TreeAutomaton:
        """The plain tree automaton of positive-probability transitions."""
        trans = {(q, a, q0, q1) for (q, a), row in self.delta.items() for (q0, q1) in row}
        return TreeAutomaton(self.states, self.alphabet, trans, self.initial, self.acc)


def validate_tree_automaton(a) -> list:
    issues = []
    declared = set(a.states)
    letters = set(a.alphabet)
    if not a.alphabet:
        issues.append("alphabet is empty")
    if a.initial not in declared:
        issues.append(f"initial state {a.initial!r} undeclared")
    if isinstance(a, ProbTreeAutomaton):
        for (q, l), row in a.delta.items():
            for (q0, q1), x in row.items():
                for s in (q, q0, q1):
                    if s not in declared:
                        issues.append(f"transition ({q}, {l}, {q0}, {q1}) uses undeclared state {s!r}")
                if not 0 <= x <= 1:
                    issues.append(f"probability {x} of ({q}, {l}, {q0}, {q1}) outside [0,1]")
            if l not in letters:
                issues.append(f"undeclared letter {l!r}")
        for q in a.states:
            for l in a.alphabet:
                total = sum(a.row(q, l).values(), Fraction(0))
                if total != 1:
                    issues.append(f"row ({q}, {l}) sums to {total}, not 1")
    else:
        for q, l, q0, q1 in a.transitions:
            for s in (q, q0, q1):
                if s not in declared:
                    issues.append(f"transition ({q}, {l}, {q0}, {q1}) uses undeclared state {s!r}")
            if l not in letters:
                issues.append(f"undeclared letter {l!r}")
    issues += [str(i) for i in _acceptance_issues(a.acc, declared)]
    return issues


# --------------------------------------------------------------------------
# word -> tree constructions
# --------------------------------------------------------------------------


def word_to_tree_copy(a: ProbWordAutomaton) -> ProbTreeAutomaton:
    """Both children receive the same successor state."""
    delta = {
        (q, l): {(p, p): x for p, x in a.row(q, l).items()} for q in a.states for l in a.alphabet
    }
    return ProbTreeAutomaton(a.states, a.alphabet, delta, a.initial, a.acc)


def _require_binary(a: ProbWordAutomaton):
    if classify(a) is not AutomatonClass.BINARY_BRANCHING:
        raise NotBinaryBranching("expected a binary-branching word automaton")


def word_to_tree_switch(a: ProbWordAutomaton) -> ProbTreeAutomaton:
    """Successors ``{q1, q2}`` are sent to the children in both orders, 1/2 each."""
    _require_binary(a)
    delta = {}
    for q in a.states:
        for l in a.alphabet:
            q1, q2 = binary_successors(a, q, l)
            delta[(q, l)] = {(q1, q2): HALF, (q2, q1): HALF}
    return ProbTreeAutomaton(a.states, a.alphabet, delta, a.initial, a.acc)


def word_to_universal_tree(a: ProbWordAutomaton) -> TreeAutomaton:
    """Non-probabilistic parity tree automaton used in the universal-emptiness reduction."""
    _require_binary(a)
    if not isinstance(a.acc, Parity):
        raise NotParity("the universal tree automaton is built from a parity automaton")
    trans = set()
    for q in a.states:
        for l in a.alphabet:
            q1, q2 = binary_successors(a, q, l)
            trans |= {(q, l, q1, q2), (q, l, q2, q1)}
    return TreeAutomaton(a.states, a.alphabet, frozenset(trans), a.initial, a.acc)


# --------------------------------------------------------------------------
# acceptance chains
# --------------------------------------------------------------------------


def _check_alphabet(a, t: RegularTree):
    letters = set(a.alphabet)
    bad = sorted({t.label[c] for c in t.classes if t.label[c] not in letters})
    if bad:
        raise AlphabetMismatch(f"tree letters {bad} not in the automaton alphabet")


def acceptance_chain(a: ProbTreeAutomaton, t: RegularTree) -> Tuple[FiniteChain, ChainObjective]:
    """Finite quotient of the acceptance chain of ``a`` on ``t``.

    States are ``(q, c)`` (labelled ``q``) and the silent choice states
    ``(q, q0, q1, c)``; only the part reachable from ``(initial, root)`` is built.
    """
    _check_alphabet(a, t)
    start = (a.initial, t.root)
    delta: Dict = {}
    labels: Dict = {}
    order = [start]
    seen = {start}
    for s in order:
        if len(s) == 2:
            q, c = s
            labels[s] = q
            row = {}
            for (q0, q1), x in a.row(q, t.label[c]).items():
                row[(q, q0, q1, c)] = x
        else:
            q, q0, q1, c = s
            labels[s] = None
            row = {}
            for succ in ((q0, t.child0[c]), (q1, t.child1[c])):
                row[succ] = row.get(succ, Fraction(0)) + HALF
        delta[s] = row
        for n in row:
            if n not in seen:
                seen.add(n)
                order.append(n)
    chain = FiniteChain(tuple(order), start, delta, labels)
    return chain, ChainObjective(a.acc)


def contract_silent(chain: FiniteChain, objective: ChainObjective) -> FiniteChain:
    """Bypass silent states, attaching their successors to their predecessors."""
    silent = lambda s: objective.silent(chain.label(s))  # noqa: E731
    if silent(chain.initial):
        raise ValueError("initial state is silent")
    delta = {}
    for s in chain.states:
        if silent(s):
            continue
        row: Dict = {}
        for m, x in chain.successors(s).items():
            if silent(m):
                for t, y in chain.successors(m).items():
                    if silent(t):
                        raise ValueError("two consecutive silent states")
                    row[t] = row.get(t, Fraction(0)) + x * y
            else:
                row[m] = row.get(m, Fraction(0)) + x
        delta[s] = row
    keep = reachable(chain.initial, lambda s: delta[s].keys())
    return FiniteChain(tuple(keep), chain.initial, {s: delta[s] for s in keep}, {s: chain.label(s) for s in keep})


def collapsed_chain(a: ProbWordAutomaton, t: RegularTree) -> FiniteChain:
    """Direct construction of the 1/4-branching chain for binary-branching ``a``.

    From ``(q, c)`` with successors ``{q1, q2}`` the chain moves with 1/4 to each
    of ``(q1, c0), (q1, c1), (q2, c0), (q2, c1)``.
    """
    _require_binary(a)
    _check_alphabet(a, t)
    start = (a.initial, t.root)
    order, seen, delta = [start], {start}, {}
    quarter = Fraction(1, 4)
    for s in order:
        q, c = s
        row: Dict = {}
        for p in binary_successors(a, q, t.label[c]):
            for child in (t.child0[c], t.child1[c]):
                row[(p, child)] = row.get((p, child), Fraction(0)) + quarter
        delta[s] = row
        for n in row:
            if n not in seen:
                seen.add(n)
                order.append(n)
    return FiniteChain(tuple(order), start, delta, {s: s[0] for s in order})


def qaslang_member(a: ProbTreeAutomaton, t: RegularTree) -> bool:
    """Qualitative almost-sure membership via the acceptance chain."""
    chain, obj = acceptance_chain(a, t)
    return almost_sure(chain, obj)


# --------------------------------------------------------------------------
# runs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RegularRun:
    """A regular run: per class, a state, the input class below it, and two children."""

    automaton: object
    input: RegularTree
    classes: Tuple[Hashable, ...]
    root: Hashable
    state: Dict[Hashable, str]
    node: Dict[Hashable, Hashable]
    child0: Dict[Hashable, Hashable]
    child1: Dict[Hashable, Hashable]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    def as_tree(self) -> RegularTree:
        return RegularTree(self.classes, self.root, dict(self.state), self.child0, self.child1)


def _allows(a, q, l, q0, q1) -> bool:
    if isinstance(a, ProbTreeAutomaton):
        return a.row(q, l).get((q0, q1), Fraction(0)) > 0
    return a.allows(q, l, q0, q1)


def validate_run(r: RegularRun) -> list:
    issues = validate_tree(r.as_tree())
    if issues:
        return issues
    a, t = r.automaton, r.input
    unknown = sorted(str(c) for c in r.classes if r.node.get(c) not in t.label)
    if unknown:
        return [f"run classes {unknown} sit on no input class"]
    if r.state[r.root] != a.initial:
        issues.append(f"root labelled {r.state[r.root]!r}, expected {a.initial!r}")
    if r.node[r.root] != t.root:
        issues.append("run root does not sit on the input root")
    for c in r.classes:
        n = r.node[c]
        if r.node[r.child0[c]] != t.child0[n] or r.node[r.child1[c]] != t.child1[n]:
            issues.append(f"class {c!r} is not synchronised with the input tree")
            continue
        tr = (r.state[c], t.label[n], r.state[r.child0[c]], r.state[r.child1[c]])
        if not _allows(a, *tr):
            issues.append(f"class {c!r} uses transition {tr} outside the automaton")
    return issues


def ensure_run(r: RegularRun) -> RegularRun:
    issues = validate_run(r)
    if issues:
        raise ValidationError(issues)
    return r


def branch_chain(t: RegularTree) -> FiniteChain:
    """Coin-flipping walk down a regular tree: each child with probability 1/2."""
    delta = {}
    for c in t.classes:
        row: Dict = {}
        for d in (t.child0[c], t.child1[c]):
            row[d] = row.get(d, Fraction(0)) + HALF
        delta[c] = row
    return FiniteChain(t.classes, t.root, delta, dict(t.label))


def branch_measure(t: RegularTree, acc) -> Fraction:
    """Measure of branches of a state-labelled regular tree whose label sequence satisfies ``acc``."""
    return objective_value(branch_chain(t), ChainObjective(acc))


@dataclass(frozen=True)
class RunCheck:
    measure: Fraction
    accepting: bool


def qualitative_run_check(r: RegularRun) -> RunCheck:
    m = branch_measure(r.as_tree(), r.automaton.acc)
    return RunCheck(m, m == 1)


# -- enumeration -------------------------------------------------------------


def _is_minimal(nodes, kids) -> bool:
    """True when no two classes are bisimilar (Moore refinement)."""
    block = {}
    part = [block.setdefault(n, len(block)) for n in nodes]
    while True:
        sig = {}
        new = [sig.setdefault((part[i], part[k0], part[k1]), len(sig)) for i, (k0, k1) in enumerate(kids)]
        if len(sig) == len(set(part)):
            return len(sig) == len(nodes)
        part = new


def _closed_part_minimal(nodes, kids) -> bool:
    """False when two classes whose descendants are all fixed are already bisimilar."""
    done = len(kids)
    closed = set(range(done))
    changed = True
    while changed:
        changed = False
        for j in list(closed):
            if kids[j][0] not in closed or kids[j][1] not in closed:
                closed.discard(j)
                changed = True
    if len(closed) < 2:
        return True
    idx = sorted(closed)
    return _is_minimal([nodes[j] for j in idx], [(idx.index(kids[j][0]), idx.index(kids[j][1])) for j in idx])


def _forced_labels(aut: TreeAutomaton, t: RegularTree) -> set:
    """Product labels below which the run has no choice left.

    All classes carrying such a label are bisimilar, so a minimal run uses
    at most one of them.
    """
    todo = [(q, c) for q in aut.states for c in t.classes]
    succ = {}
    for q, c in todo:
        succ[(q, c)] = [
            ((q0, t.child0[c]), (q1, t.child1[c])) for q0, q1 in aut.choices(q, t.label[c])
        ]
    free = {x for x, opts in succ.items() if len(opts) > 1}
    changed = True
    while changed:
        changed = False
        for x, opts in succ.items():
            if x not in free and any(k in free for pair in opts for k in pair):
                free.add(x)
                changed = True
    return set(succ) - free


def enumerate_regular_runs(a, t: RegularTree, bound: int) -> Iterator[RegularRun]:
    """Yield every regular run presentable with at most ``bound`` classes.

    Each run is produced once, through its minimal presentation numbered in
    breadth-first order (0-child before 1-child), so the stream is
    deterministic.  For probabilistic automata the support is used.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if isinstance(a, ProbTreeAutomaton):
        aut = a.support()
    else:
        aut = a
    _check_alphabet(aut, t)

    forced = _forced_labels(aut, t)
    nodes: List[Tuple[str, Hashable]] = [(aut.initial, t.root)]
    kids: List[Tuple[int, int]] = []

    def targets(label, count):
        opts = [j for j in range(count) if nodes[j] == label]
        if count < bound and not (opts and label in forced):
            opts.append(count)
        return opts

    def extend(i):
        if i == len(nodes):
            if _is_minimal(nodes, kids):
                yield _build_run(a, t, nodes, kids)
            return
        q, c = nodes[i]
        for q0, q1 in aut.choices(q, t.label[c]):
            l0, l1 = (q0, t.child0[c]), (q1, t.child1[c])
            base = len(nodes)
            for k0 in targets(l0, base):
                if k0 == base:
                    nodes.append(l0)
                n1 = len(nodes)
                for k1 in targets(l1, n1):
                    if k1 == n1:
                        nodes.append(l1)
                    kids.append((k0, k1))
                    if _closed_part_minimal(nodes, kids):
                        yield from extend(i + 1)
                    kids.pop()
                    if k1 == n1:
                        nodes.pop()
                if k0 == base:
                    nodes.pop()

    yield from extend(0)


def _build_run(a, t, nodes, kids) -> RegularRun:
    names = [f"r{i}" for i in range(len(nodes))]
    return RegularRun(
        a,
        t,
        tuple(names),
        names[0],
        {names[i]: nodes[i][0] for i in range(len(nodes))},
        {names[i]: nodes[i][1] for i in range(len(nodes))},
        {names[i]: names[k[0]] for i, k in enumerate(kids)},
        {names[i]: names[k[1]] for i, k in enumerate(kids)},
    )


# -- product MDP: exact search for a rejecting run ---------------------------


def _priority_of(acc, states) -> Dict[str, int]:
    if isinstance(acc, Parity):
        return dict(acc.priority)
    if isinstance(acc, Buchi):
        return {q: 0 if q in acc.accepting else 1 for q in states}
    if isinstance(acc, CoBuchi):
        return {q: 1 if q in acc.rejecting else 2 for q in states}
    raise UnsupportedAcceptance(
        "exact run search needs a parity, Buchi or co-Buchi condition (Rabin rejection needs memory)"
    )


def _product_mdp(aut: TreeAutomaton, t: RegularTree):
    """Pairs (state, input class) reachable from the root, with their actions."""
    start = (aut.initial, t.root)
    actions: Dict = {}
    order, seen = [start], {start}
    for s in order:
        q, c = s
        acts = []
        for q0, q1 in aut.choices(q, t.label[c]):
            succ = ((q0, t.child0[c]), (q1, t.child1[c]))
            acts.append(((q0, q1), succ))
            for n in succ:
                if n not in seen:
                    seen.add(n)
                    order.append(n)
        actions[s] = acts
    # prune pairs from which no total run exists
    live = set(order)
    changed = True
    while changed:
        changed = False
        for s in order:
            if s in live and not any(all(n in live for n in succ) for _, succ in actions[s]):
                live.discard(s)
                changed = True
    live_actions = {
        s: [(ch, succ) for ch, succ in actions[s] if all(n in live for n in succ)] for s in order if s in live
    }
    return start, [s for s in order if s in live], live_actions


def _maximal_end_components(states, actions) -> List[Tuple[frozenset, Dict]]:
    """MEC decomposition restricted to ``states``; actions must stay inside."""
    acts = {s: [a for a in actions[s] if all(n in states for n in a[1])] for s in states}
    work = [set(states)]
    out = []
    while work:
        part = work.pop()
        acts_p = {s: [a for a in acts[s] if all(n in part for n in a[1])] for s in part}
        dead = {s for s in part if not acts_p[s]}
        if dead:
            if part - dead:
                work.append(part - dead)
            continue
        order = sorted(part, key=repr)
        comps = strongly_connected_components(order, lambda s: [n for _, succ in acts_p[s] for n in succ])
        if len(comps) == 1:
            out.append((frozenset(part), acts_p))
        else:
            work.extend(set(cmp) for cmp in comps)
    return out


def _attractor_choice(targets, domain, acts) -> Dict:
    """Positive attractor: per state an action with some successor closer to ``targets``."""
    choice = {}
    reached = set(targets)
    frontier = True
    while frontier:
        frontier = False
        for s in domain:
            if s in reached:
                continue
            for ch, succ in acts[s]:
                if any(n in reached for n in succ):
                    choice[s] = (ch, succ)
                    reached.add(s)
                    frontier = True
                    break
    return choice


def find_rejecting_run(a, t: RegularTree) -> Optional[RegularRun]:
    """A regular run whose accepting branches have measure < 1, or None.

    Works on the product of automaton states with input classes read as a
    Markov decision process (the run picks transitions, a fair coin picks the
    branch).  Some run rejects with positive probability iff some reachable
    maximal end component inside "priority >= p" contains a state of odd
    priority p.  A positional witness is then built, so a ``None`` answer covers
    every run of any size, regular or not.
    """
    aut = a.support() if isinstance(a, ProbTreeAutomaton) else a
    _check_alphabet(aut, t)
    prio_q = _priority_of(aut.acc, aut.states)
    start, live, acts = _product_mdp(aut, t)
    if start not in acts:
        return None
    prio = {s: prio_q[s[0]] for s in live}
    reach_all = set(reachable(start, lambda s: [n for _, succ in acts[s] for n in succ]))
    for p in sorted({x for x in prio.values() if x % 2 == 1}):
        region = {s for s in live if prio[s] >= p and s in reach_all}
        for mec, mec_acts in _maximal_end_components(region, acts):
            hits = sorted((s for s in mec if prio[s] == p), key=repr)
            if not hits:
                continue
            target = hits[0]
            strategy = {target: mec_acts[target][0]}
            strategy.update(_attractor_choice({target}, sorted(mec, key=repr), mec_acts))
            outside = [s for s in live if s not in mec]
            strategy.update(_attractor_choice(mec, outside, acts))
            for s in live:
                strategy.setdefault(s, acts[s][0])
            return _positional_run(a, t, start, strategy)
    return None


def qulang_member(a, t: RegularTree) -> bool:
    """Every run of ``a`` on ``t`` is qualitatively accepting (exact, see find_rejecting_run)."""
    return find_rejecting_run(a, t) is None


def _positional_run(a, t, start, strategy) -> RegularRun:
    order = reachable(start, lambda s: strategy[s][1])
    names = {s: f"r{i}" for i, s in enumerate(order)}
    return RegularRun(
        a,
        t,
        tuple(names[s] for s in order),
        names[start],
        {names[s]: s[0] for s in order},
        {names[s]: s[1] for s in order},
        {names[s]: names[strategy[s][1][0]] for s in order},
        {names[s]: names[strategy[s][1][1]] for s in order},
    )


def random_regular_run(a, t: RegularTree, max_classes: int, rng: random.Random) -> Optional[RegularRun]:
    """A random finite-memory run with at most ``max_classes`` classes, or None if no run exists.

    Classes are triples (state, input class, memory cell); the memory size is
    chosen so that the class count stays within ``max_classes``.
    """
    aut = a.support() if isinstance(a, ProbTreeAutomaton) else a
    start, live, acts = _product_mdp(aut, t)
    if start not in acts:
        return None
    mem = max(1, max_classes // max(1, len(live)))
    policy = {}
    for s in live:
        for m in range(mem):
            ch, succ = rng.choice(acts[s])
            policy[(s, m)] = ((succ[0], rng.randrange(mem)), (succ[1], rng.randrange(mem)))
    root = (start, 0)
    order = reachable(root, lambda x: policy[x])
    names = {x: f"r{i}" for i, x in enumerate(order)}
    return RegularRun(
        a,
        t,
        tuple(names[x] for x in order),
        names[root],
        {names[x]: x[0][0] for x in order},
        {names[x]: x[0][1] for x in order},
        {names[x]: names[policy[x][0]] for x in order},
        {names[x]: names[policy[x][1]] for x in order},
    )
