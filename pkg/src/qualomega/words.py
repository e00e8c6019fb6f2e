"""Values of probabilistic word automata on ultimately periodic words."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from qualomega.core import ProbWordAutomaton, binary_successors, classify, AutomatonClass
from qualomega.errors import DocumentError, NotBinaryBranching
from qualomega.markov import ChainObjective, FiniteChain, objective_value
from qualomega.trees import RegularTree


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``prefix . cycle^omega``."""

    prefix: Tuple[str, ...]
    cycle: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("the cycle of a lasso word must be non-empty")

    def __len__(self):
        return len(self.prefix) + len(self.cycle)

    def letter(self, i: int) -> str:
        n = len(self.prefix)
        return self.prefix[i] if i < n else self.cycle[(i - n) % len(self.cycle)]

    def next(self, i: int) -> int:
        """Successor position in the finite presentation."""
        return i + 1 if i + 1 < len(self) else len(self.prefix)

    def letters(self) -> frozenset:
        return frozenset(self.prefix) | frozenset(self.cycle)

    def __str__(self):
        return " ".join(self.prefix) + ";" + " ".join(self.cycle)


def parse_lasso(text: str, alphabet: Sequence[str] = ()) -> LassoWord:
    """Parse ``"u;v"``.

    Each side is split on whitespace or commas when present.  Otherwise a
    side that is itself a multi-character letter stays whole and anything
    else is read one character per letter.
    """
    if text.count(";") != 1:
        raise DocumentError(f"lasso {text!r} must have the form 'prefix;cycle'")
    single = bool(alphabet) and all(len(a) == 1 for a in alphabet)

    def split(part):
        part = part.strip()
        if not part:
            return ()
        if re.search(r"[\s,]", part):
            return tuple(x for x in re.split(r"[\s,]+", part) if x)
        if part in alphabet and not single:
            return (part,)
        return tuple(part)

    u, v = text.split(";")
    word = split(u), split(v)
    if not word[1]:
        raise DocumentError("the cycle of a lasso word must be non-empty")
    if alphabet:
        bad = sorted(set(word[0] + word[1]) - set(alphabet))
        if bad:
            raise DocumentError(f"letters {bad} are not in the alphabet")
    return LassoWord(*word)


@dataclass(frozen=True)
class WordValue:
    value: Fraction
    chain: FiniteChain


def product_chain(a: ProbWordAutomaton, w: LassoWord) -> FiniteChain:
    """Chain over ``(state, position)`` reachable from ``(initial, 0)``; labels are states."""
    start = (a.initial, 0)
    order, seen, delta = [start], {start}, {}
    for s in order:
        q, i = s
        j = w.next(i)
        row = {(p, j): x for p, x in a.row(q, w.letter(i)).items()}
        delta[s] = row
        for n in row:
            if n not in seen:
                seen.add(n)
                order.append(n)
    return FiniteChain(tuple(order), start, delta, {s: s[0] for s in order})


def value(a: ProbWordAutomaton, w: LassoWord) -> WordValue:
    chain = product_chain(a, w)
    return WordValue(objective_value(chain, ChainObjective(a.acc)), chain)


def member_as(a: ProbWordAutomaton, w: LassoWord) -> bool:
    return value(a, w).value == 1


def member_prob(a: ProbWordAutomaton, w: LassoWord) -> bool:
    return value(a, w).value > 0


def tree_of_runs(a: ProbWordAutomaton, w: LassoWord) -> RegularTree:
    """State-labelled tree: the node for ``(q, i)`` has children ``q1 < q2`` of ``delta(q, w_i)``."""
    if classify(a) is not AutomatonClass.BINARY_BRANCHING:
        raise NotBinaryBranching("tree of runs needs a binary-branching automaton")
    name = lambda q, i: f"{q}@{i}"  # noqa: E731
    start = (a.initial, 0)
    order, seen = [start], {start}
    c0, c1 = {}, {}
    for q, i in order:
        j = w.next(i)
        q1, q2 = binary_successors(a, q, w.letter(i))
        c0[name(q, i)] = name(q1, j)
        c1[name(q, i)] = name(q2, j)
        for n in ((q1, j), (q2, j)):
            if n not in seen:
                seen.add(n)
                order.append(n)
    classes = tuple(name(q, i) for q, i in order)
    return RegularTree(classes, name(*start), {name(q, i): q for q, i in order}, c0, c1)


def pad(w: LassoWord, depth: int, symbol: str) -> LassoWord:
    """Insert ``depth - 1`` copies of ``symbol`` after every letter."""
    fill = (symbol,) * (depth - 1)

    def spread(xs):
        return tuple(y for x in xs for y in (x, *fill))

    return LassoWord(spread(w.prefix), spread(w.cycle))
