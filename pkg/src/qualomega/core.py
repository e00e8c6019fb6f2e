"""Probabilistic word automata, acceptance conditions and structural classes.

All probabilities are :class:`fractions.Fraction`.  States and letters are
plain strings kept in declaration order; every construction that has to pick
"one of" several states breaks ties by that order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple

from qualomega.errors import (
    EmptySet,
    NotBinaryBranching,
    ValidationError,
)

State = str
Letter = str


# --------------------------------------------------------------------------
# Acceptance conditions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Buchi:
    accepting: frozenset

    kind = "buchi"

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))

    def accepts(self, infset) -> bool:
        return bool(self.accepting & frozenset(infset))

    def referenced(self) -> frozenset:
        return self.accepting

    def inherit(self, copies: Mapping) -> "Buchi":
        return Buchi(self.accepting | {new for new, old in copies.items() if old in self.accepting})


@dataclass(frozen=True)
class CoBuchi:
    rejecting: frozenset

    kind = "cobuchi"

    def __post_init__(self):
        object.__setattr__(self, "rejecting", frozenset(self.rejecting))

    def accepts(self, infset) -> bool:
        return not (self.rejecting & frozenset(infset))

    def referenced(self) -> frozenset:
        return self.rejecting

    def inherit(self, copies: Mapping) -> "CoBuchi":
        return CoBuchi(self.rejecting | {new for new, old in copies.items() if old in self.rejecting})


@dataclass(frozen=True)
class Rabin:
    """Rabin pairs ``(alpha_i, beta_i)``: some alpha seen infinitely often, its beta not."""

    pairs: Tuple[Tuple[frozenset, frozenset], ...]

    kind = "rabin"

    def __post_init__(self):
        object.__setattr__(
            self, "pairs", tuple((frozenset(a), frozenset(b)) for a, b in self.pairs)
        )

    def accepts(self, infset) -> bool:
        s = frozenset(infset)
        return any(s & a and not s & b for a, b in self.pairs)

    def referenced(self) -> frozenset:
        out = frozenset()
        for a, b in self.pairs:
            out |= a | b
        return out

    def inherit(self, copies: Mapping) -> "Rabin":
        def grow(s):
            return s | {new for new, old in copies.items() if old in s}

        return Rabin(tuple((grow(a), grow(b)) for a, b in self.pairs))


@dataclass(frozen=True)
class Parity:
    """Min-even parity condition given by a total priority map."""

    priority: Mapping

    kind = "parity"

    def __post_init__(self):
        object.__setattr__(self, "priority", dict(self.priority))

    def accepts(self, infset) -> bool:
        return min(self.priority[q] for q in infset) % 2 == 0

    def referenced(self) -> frozenset:
        return frozenset(self.priority)

    def inherit(self, copies: Mapping) -> "Parity":
        prio = dict(self.priority)
        for new, old in copies.items():
            prio[new] = self.priority[old]
        return Parity(prio)

    def __hash__(self):
        return hash(frozenset(self.priority.items()))


AcceptanceCondition = (Buchi, CoBuchi, Rabin, Parity)


def accepts_infset(acc, s) -> bool:
    """Evaluate ``acc`` on ``s`` read as the set of states seen infinitely often."""
    s = frozenset(s)
    if not s:
        raise EmptySet("an infinity set is never empty")
    return acc.accepts(s)


def complement(acc):
    """Per-infset complement, defined for conditions closed under it.

    Parity shifts every priority by one; Buchi and co-Buchi swap.  Rabin has
    no Rabin-shaped complement (it is Streett), so callers needing it should
    negate :func:`accepts_infset` directly.
    """
    if isinstance(acc, Parity):
        return Parity({q: p + 1 for q, p in acc.priority.items()})
    if isinstance(acc, Buchi):
        return CoBuchi(acc.accepting)
    if isinstance(acc, CoBuchi):
        return Buchi(acc.rejecting)
    raise TypeError(f"no closed-form complement for {type(acc).__name__}")


# --------------------------------------------------------------------------
# Word automata
# --------------------------------------------------------------------------


class AutomatonClass(enum.Enum):
    BINARY_BRANCHING = "binary-branching"
    SIMPLE = "simple"
    SEMI_SIMPLE = "semi-simple"
    GENERAL = "general"

    def within(self, other: "AutomatonClass") -> bool:
        """True when every automaton of this class also belongs to ``other``."""
        order = list(AutomatonClass)
        return order.index(self) <= order.index(other)


@dataclass(frozen=True)
class ProbWordAutomaton:
    """Finite probabilistic word automaton.

    ``delta`` maps ``(state, letter)`` to a sparse distribution
    ``{target: probability}``; missing entries are 0.
    """

    states: Tuple[State, ...]
    alphabet: Tuple[Letter, ...]
    delta: Dict[Tuple[State, Letter], Dict[State, Fraction]]
    initial: State
    acc: object
    _index: Dict[State, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        clean = {}
        for key, row in self.delta.items():
            row = {p: Fraction(x) for p, x in row.items() if Fraction(x) != 0}
            if row:
                clean[tuple(key)] = row
        object.__setattr__(self, "delta", clean)
        object.__setattr__(self, "_index", {q: i for i, q in enumerate(self.states)})

    @classmethod
    def from_transitions(cls, states, alphabet, initial, acc, transitions):
        """Build from ``(source, letter, target, probability)`` tuples."""
        delta: Dict[Tuple[State, Letter], Dict[State, Fraction]] = {}
        for q, a, p, x in transitions:
            row = delta.setdefault((q, a), {})
            row[p] = row.get(p, Fraction(0)) + Fraction(x)
        return cls(tuple(states), tuple(alphabet), delta, initial, acc)

    def row(self, q: State, a: Letter) -> Dict[State, Fraction]:
        return self.delta.get((q, a), {})

    def prob(self, q: State, a: Letter, p: State) -> Fraction:
        return self.delta.get((q, a), {}).get(p, Fraction(0))

    def index(self, q: State) -> int:
        return self._index[q]

    def transitions(self) -> Iterator[Tuple[State, Letter, State, Fraction]]:
        for q in self.states:
            for a in self.alphabet:
                row = self.row(q, a)
                for p in sorted(row, key=self._order_key):
                    yield q, a, p, row[p]

    def _order_key(self, q):
        return self._index.get(q, len(self._index)), q


# -- validation ------------------------------------------------------------


@dataclass(frozen=True)
class NonStochasticRow:
    state: State
    letter: Letter
    total: Fraction

    def __str__(self):
        return f"row ({self.state}, {self.letter}) sums to {self.total}, not 1"


@dataclass(frozen=True)
class ProbabilityOutOfRange:
    state: State
    letter: Letter
    target: State
    prob: Fraction

    def __str__(self):
        return f"delta({self.state}, {self.letter}, {self.target}) = {self.prob} outside [0,1]"


@dataclass(frozen=True)
class DanglingState:
    where: str
    state: State

    def __str__(self):
        return f"undeclared state {self.state!r} referenced by {self.where}"


@dataclass(frozen=True)
class UnknownLetter:
    where: str
    letter: Letter

    def __str__(self):
        return f"undeclared letter {self.letter!r} referenced by {self.where}"


@dataclass(frozen=True)
class EmptyAlphabet:
    def __str__(self):
        return "alphabet is empty"


@dataclass(frozen=True)
class DuplicateName:
    what: str
    name: str

    def __str__(self):
        return f"duplicate {self.what} {self.name!r}"


@dataclass(frozen=True)
class PartialPriority:
    state: State

    def __str__(self):
        return f"parity map has no priority for {self.state!r}"


def _acceptance_issues(acc, declared) -> list:
    issues = [DanglingState("acceptance", q) for q in sorted(acc.referenced() - declared)]
    if isinstance(acc, Parity):
        issues += [PartialPriority(q) for q in sorted(declared - set(acc.priority))]
        issues += [
            DanglingState("acceptance", f"{q}: negative priority {p}")
            for q, p in acc.priority.items()
            if not isinstance(p, int) or p < 0
        ]
    return issues


def validate(a: ProbWordAutomaton) -> list:
    """Return every violated invariant of ``a``; an empty list means valid."""
    issues: list = []
    declared = set(a.states)
    if not a.alphabet:
        issues.append(EmptyAlphabet())
    for what, names in (("state", a.states), ("letter", a.alphabet)):
        seen = set()
        for n in names:
            if n in seen:
                issues.append(DuplicateName(what, n))
            seen.add(n)
    if a.initial not in declared:
        issues.append(DanglingState("initial", a.initial))
    letters = set(a.alphabet)
    for (q, l), row in a.delta.items():
        if q not in declared:
            issues.append(DanglingState(f"delta source ({q}, {l})", q))
        if l not in letters:
            issues.append(UnknownLetter(f"delta ({q}, {l})", l))
        for p, x in row.items():
            if p not in declared:
                issues.append(DanglingState(f"delta target ({q}, {l})", p))
            if not 0 <= x <= 1:
                issues.append(ProbabilityOutOfRange(q, l, p, x))
    for q in a.states:
        for l in a.alphabet:
            total = sum(a.row(q, l).values(), Fraction(0))
            if total != 1:
                issues.append(NonStochasticRow(q, l, total))
    issues += _acceptance_issues(a.acc, declared)
    return issues


def ensure_valid(a: ProbWordAutomaton) -> ProbWordAutomaton:
    issues = validate(a)
    if issues:
        raise ValidationError(issues)
    return a


# -- structural classes ----------------------------------------------------


def is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def dyadic_exponent(x: Fraction) -> int:
    """Smallest ``k`` with ``x = c / 2**k``; only meaningful for dyadic ``x``."""
    return x.denominator.bit_length() - 1


def classify(a: ProbWordAutomaton) -> AutomatonClass:
    probs = {x for row in a.delta.values() for x in row.values()}
    half = Fraction(1, 2)
    if probs <= {half}:
        return AutomatonClass.BINARY_BRANCHING
    if probs <= {half, Fraction(1)}:
        return AutomatonClass.SIMPLE
    if all(is_dyadic(x) for x in probs):
        return AutomatonClass.SEMI_SIMPLE
    return AutomatonClass.GENERAL


def binary_successors(a: ProbWordAutomaton, q: State, l: Letter) -> Tuple[State, State]:
    """The two 1/2-successors of ``(q, l)``, smaller declaration index first."""
    row = a.row(q, l)
    if len(row) != 2 or any(x != Fraction(1, 2) for x in row.values()):
        raise NotBinaryBranching(f"row ({q}, {l}) is {_fmt_row(row)}")
    q1, q2 = sorted(row, key=a.index)
    return q1, q2


def _fmt_row(row) -> str:
    return "{" + ", ".join(f"{p}: {x}" for p, x in row.items()) + "}"


def require_binary(a: ProbWordAutomaton) -> None:
    if classify(a) is not AutomatonClass.BINARY_BRANCHING:
        raise NotBinaryBranching("automaton is not binary branching")


def fresh_name(base: str, taken) -> str:
    """``base`` itself, or ``base`` with enough trailing primes to avoid ``taken``."""
    name = base
    while name in taken:
        name += "'"
    return name


def states_of(names: Iterable[State]) -> Tuple[State, ...]:
    return tuple(dict.fromkeys(names))
