"""Word-automaton transformations towards binary-branching parity automata.

* :func:`semisimple_to_simple` replaces every dyadic distribution by a binary
  tree of 1/2-moves on a fresh padding letter.
* :func:`simple_to_binary` splits probability-1 moves between a state and a
  primed copy of it.
* :func:`rabin_to_parity_binary` takes the product with a deterministic parity
  monitor of the Rabin condition.

All three preserve values exactly (the first one up to padding the input word).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Dict, List, Optional, Tuple

from qualomega.core import (
    AutomatonClass,
    Parity,
    ProbWordAutomaton,
    Rabin,
    classify,
    dyadic_exponent,
    fresh_name,
)
from qualomega.errors import (
    NotBinaryBranching,
    NotRabin,
    NotSemiSimple,
    NotSimple,
    UnsupportedAcceptance,
)

HALF = Fraction(1, 2)
ONE = Fraction(1)


@dataclass
class TransformReport:
    kind: str
    input_class: AutomatonClass
    output_class: AutomatonClass
    fresh_states: int
    state_map: Dict[str, str]
    depth: Optional[int] = None
    details: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "input_class": self.input_class.value,
            "output_class": self.output_class.value,
            "fresh_states": self.fresh_states,
            "state_map": dict(self.state_map),
        }
        if self.depth is not None:
            out["depth"] = self.depth
        out.update(self.details)
        return out


# --------------------------------------------------------------------------
# semi-simple -> simple
# --------------------------------------------------------------------------


def padding_depth(a: ProbWordAutomaton) -> int:
    """Largest dyadic exponent over all transitions, at least 1."""
    return max([1] + [dyadic_exponent(x) for row in a.delta.values() for x in row.values()])


def _bitstrings(length: int) -> List[str]:
    return ["".join(bits) for bits in cartesian("01", repeat=length)]


def semisimple_to_simple(a: ProbWordAutomaton) -> Tuple[ProbWordAutomaton, TransformReport]:
    """Simulate each dyadic row by a depth-``d`` tree of fair coin flips.

    From ``q`` on letter ``x`` the automaton moves to ``(q,x)_0`` / ``(q,x)_1``;
    internal states advance on the padding letter.  The ``2**d`` leaf slots of
    row ``(q, x)`` are filled left to right, targets in declaration order,
    ``c`` slots for probability ``c / 2**d``; a leaf whose two slots agree gets
    a single probability-1 edge.  Any other letter leads to a rejecting sink.
    """
    cls = classify(a)
    if not cls.within(AutomatonClass.SEMI_SIMPLE):
        raise NotSemiSimple(f"automaton is {cls.value}")
    if not isinstance(a.acc, Rabin):
        raise UnsupportedAcceptance("semi-simple to simple is defined for Rabin conditions")

    d = padding_depth(a)
    pad = fresh_name("#", set(a.alphabet))
    sigma = a.alphabet + (pad,)
    taken = set(a.states)
    fresh: Dict[Tuple[str, str, str], str] = {}
    state_map: Dict[str, str] = {q: q for q in a.states}
    for q in a.states:
        for x in a.alphabet:
            for n in range(1, d):
                for b in _bitstrings(n):
                    name = fresh_name(f"({q},{x})_{b}", taken)
                    taken.add(name)
                    fresh[(q, x, b)] = name
                    state_map[name] = q
    sink = fresh_name("sink", taken)
    taken.add(sink)

    delta: Dict[Tuple[str, str], Dict[str, Fraction]] = {}

    def node(q, x, b):
        return q if b == "" else fresh[(q, x, b)]

    def letter(x, b):
        return x if b == "" else pad

    for q in a.states:
        for x in a.alphabet:
            slots: List[str] = []
            for p in a.states:
                slots += [p] * int(a.prob(q, x, p) * 2**d)
            for n in range(0, d - 1):
                for b in _bitstrings(n):
                    delta[(node(q, x, b), letter(x, b))] = {
                        fresh[(q, x, b + "0")]: HALF,
                        fresh[(q, x, b + "1")]: HALF,
                    }
            for j, b in enumerate(_bitstrings(d - 1)):
                left, right = slots[2 * j], slots[2 * j + 1]
                row = {left: ONE} if left == right else {left: HALF, right: HALF}
                delta[(node(q, x, b), letter(x, b))] = row
    for s in a.states:
        delta[(s, pad)] = {sink: ONE}
    for (q, x, b), s in fresh.items():
        for y in a.alphabet:
            delta[(s, y)] = {sink: ONE}
    for y in sigma:
        delta[(sink, y)] = {sink: ONE}

    states = a.states + tuple(fresh.values()) + (sink,)
    out = ProbWordAutomaton(states, sigma, delta, a.initial, a.acc)
    report = TransformReport(
        "semisimple-to-simple",
        cls,
        classify(out),
        len(fresh),
        state_map,
        depth=d,
        details={"pad_symbol": pad, "sink": sink},
    )
    return out, report


# --------------------------------------------------------------------------
# simple -> binary branching
# --------------------------------------------------------------------------


def simple_to_binary(a: ProbWordAutomaton) -> Tuple[ProbWordAutomaton, TransformReport]:
    """Split every probability-1 move ``p -> q`` into ``q`` and a primed copy ``q'``.

    Primed copies behave like their originals and inherit their acceptance
    membership (Rabin pairs, parity priority, Buchi sets alike).
    """
    cls = classify(a)
    if not cls.within(AutomatonClass.SIMPLE):
        raise NotSimple(f"automaton is {cls.value}")

    sure = [(p, x, q) for (p, x), row in a.delta.items() for q, v in row.items() if v == ONE]
    targets = {q for _, _, q in sure}
    q_one = [q for q in a.states if q in targets]
    taken = set(a.states)
    prime: Dict[str, str] = {}
    for q in q_one:
        prime[q] = fresh_name(q + "'", taken)
        taken.add(prime[q])

    delta: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    for p in a.states:
        for x in a.alphabet:
            row: Dict[str, Fraction] = {}
            for q, v in a.row(p, x).items():
                if v == ONE:
                    row = {q: HALF, prime[q]: HALF}
                else:
                    row[q] = HALF
            delta[(p, x)] = row
            if p in prime:
                delta[(prime[p], x)] = dict(row)

    copies = {prime[q]: q for q in q_one}
    acc = a.acc.inherit(copies)
    out = ProbWordAutomaton(a.states + tuple(prime[q] for q in q_one), a.alphabet, delta, a.initial, acc)
    state_map = {q: q for q in a.states}
    state_map.update(copies)
    return out, TransformReport("simple-to-binary", cls, classify(out), len(q_one), state_map)


# --------------------------------------------------------------------------
# Rabin -> parity
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DeterministicParityMonitor:
    """Deterministic parity automaton reading automaton states.

    ``records[m]`` is the index appearance record behind monitor state ``m``:
    a permutation of pair indices and the priority of the move that entered it.
    """

    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    delta: Dict[Tuple[str, str], str]
    initial: str
    priority: Dict[str, int]
    records: Dict[str, Tuple[Tuple[int, ...], int]]

    def step(self, m: str, q: str) -> str:
        return self.delta[(m, q)]

    def accepts_lasso(self, prefix, cycle) -> bool:
        """Whether the monitor accepts ``prefix . cycle^omega``."""
        m = self.initial
        for q in prefix:
            m = self.step(m, q)
        starts: Dict[str, int] = {}
        visited: List[List[str]] = []
        while m not in starts:
            starts[m] = len(visited)
            seg = []
            for q in cycle:
                m = self.step(m, q)
                seg.append(m)
            visited.append(seg)
        loop = [s for seg in visited[starts[m]:] for s in seg]
        return min(self.priority[s] for s in loop) % 2 == 0


def _iar_step(pairs, record, q):
    perm, _ = record
    k = len(pairs)
    bad = [pos for pos, i in enumerate(perm) if q in pairs[i][1]]
    good = [pos for pos, i in enumerate(perm) if q in pairs[i][0]]
    prio = 2 * k + 1
    if bad:
        prio = min(prio, 2 * bad[0] + 1)
    if good:
        prio = min(prio, 2 * good[0] + 2)
    moved = [i for i in perm if q in pairs[i][1]]
    kept = [i for i in perm if q not in pairs[i][1]]
    return tuple(kept + moved), prio


def rabin_condition_to_parity_monitor(pairs, states) -> DeterministicParityMonitor:
    """Index appearance record for a Rabin condition over the alphabet ``states``.

    The record is a permutation of pair indices; a pair whose ``beta`` set is
    read moves to the back.  Pairs that stop being hit settle at the front.
    Reading ``q`` emits ``2*j + 2`` for the leftmost pair at position ``j``
    whose ``alpha`` contains ``q``, ``2*j + 1`` for the leftmost pair hit in
    ``beta``, the smaller of the two, and ``2*k + 1`` when nothing happens.
    The minimal priority seen infinitely often is even iff some pair is
    satisfied.
    """
    pairs = [(frozenset(a), frozenset(b)) for a, b in pairs]
    states = tuple(states)
    k = len(pairs)
    init = (tuple(range(k)), 2 * k + 1)
    order = [init]
    index = {init: 0}
    trans = {}
    for rec in order:
        for q in states:
            nxt = _iar_step(pairs, rec, q)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            trans[(rec, q)] = nxt
    name = {rec: f"m{i}" for rec, i in index.items()}
    return DeterministicParityMonitor(
        tuple(name[r] for r in order),
        states,
        {(name[r], q): name[n] for (r, q), n in trans.items()},
        name[init],
        {name[r]: r[1] for r in order},
        {name[r]: r for r in order},
    )


def rabin_to_parity_binary(a: ProbWordAutomaton) -> Tuple[ProbWordAutomaton, TransformReport]:
    """Product of a binary-branching Rabin automaton with its IAR monitor."""
    cls = classify(a)
    if cls is not AutomatonClass.BINARY_BRANCHING:
        raise NotBinaryBranching(f"automaton is {cls.value}")
    if not isinstance(a.acc, Rabin):
        raise NotRabin(f"acceptance is {a.acc.kind}")
    mon = rabin_condition_to_parity_monitor(a.acc.pairs, a.states)
    midx = {m: i for i, m in enumerate(mon.states)}

    start = (a.initial, mon.step(mon.initial, a.initial))
    order, seen = [start], {start}
    rows = {}
    for q, m in order:
        for x in a.alphabet:
            row = {(p, mon.step(m, p)): v for p, v in a.row(q, x).items()}
            rows[((q, m), x)] = row
            for n in row:
                if n not in seen:
                    seen.add(n)
                    order.append(n)
    order.sort(key=lambda s: (a.index(s[0]), midx[s[1]]))
    names = {s: f"({s[0]},{s[1]})" for s in order}
    if len(set(names.values())) != len(names):
        names = {s: f"s{i}" for i, s in enumerate(order)}
    delta = {(names[s], x): {names[n]: v for n, v in row.items()} for (s, x), row in rows.items()}
    acc = Parity({names[s]: mon.priority[s[1]] for s in order})
    out = ProbWordAutomaton(tuple(names[s] for s in order), a.alphabet, delta, names[start], acc)
    report = TransformReport(
        "rabin-to-parity",
        cls,
        classify(out),
        len(order),
        {names[s]: s[0] for s in order},
        details={
            "monitor_states": len(mon.states),
            "monitor": {m: {"record": list(r[0]), "priority": r[1]} for m, r in mon.records.items()},
        },
    )
    return out, report
