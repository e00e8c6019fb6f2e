"""Seeded random instances for property suites.

Every generator draws from a :class:`random.Random` instance (Mersenne
Twister MT19937) seeded with a 64-bit integer, so a corpus is a pure function
of its :class:`CorpusSpec`.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from qualomega.core import Buchi, CoBuchi, Parity, ProbWordAutomaton, Rabin
from qualomega.markov import FiniteChain
from qualomega.trees import RegularTree
from qualomega.words import LassoWord

DEFAULT_SEED = 20240607
SEED_ENV = "QUALOMEGA_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw, 0) if raw else DEFAULT_SEED


def rng_for(seed: int) -> random.Random:
    return random.Random(seed & 0xFFFF_FFFF_FFFF_FFFF)


def state_names(n: int) -> Tuple[str, ...]:
    return tuple(f"q{i}" for i in range(n))


def letter_names(n: int) -> Tuple[str, ...]:
    return tuple("abcdefgh"[i] for i in range(n))


def random_subset(rng: random.Random, items: Sequence, p: float = 0.4) -> frozenset:
    return frozenset(x for x in items if rng.random() < p)


def random_acceptance(rng: random.Random, states: Sequence[str], kind: str):
    if kind == "rabin":
        pairs = []
        for _ in range(rng.randint(1, 2)):
            alpha = random_subset(rng, states) or frozenset([rng.choice(states)])
            beta = random_subset(rng, [q for q in states if q not in alpha], 0.3)
            pairs.append((alpha, beta))
        return Rabin(tuple(pairs))
    if kind == "parity":
        return Parity({q: rng.randint(0, 3) for q in states})
    if kind == "buchi":
        return Buchi(random_subset(rng, states) or {states[0]})
    if kind == "cobuchi":
        return CoBuchi(random_subset(rng, states))
    raise ValueError(f"unknown acceptance kind {kind!r}")


def dyadic_row(rng: random.Random, states: Sequence[str], exponent: int) -> Dict[str, Fraction]:
    """Random distribution with all probabilities multiples of ``2**-exponent``."""
    units = 2**exponent
    k = rng.randint(1, min(len(states), units))
    targets = rng.sample(list(states), k)
    cuts = sorted(rng.sample(range(1, units), k - 1))
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [units])]
    return {q: Fraction(c, units) for q, c in zip(targets, sizes)}


def random_semisimple(rng, n_states: int, n_letters: int, kind: str = "rabin", max_exponent: int = 3):
    states, letters = state_names(n_states), letter_names(n_letters)
    delta = {(q, a): dyadic_row(rng, states, rng.randint(0, max_exponent)) for q in states for a in letters}
    return ProbWordAutomaton(states, letters, delta, states[0], random_acceptance(rng, states, kind))


def random_simple(rng, n_states: int, n_letters: int, kind: str = "rabin", p_sure: float = 0.4):
    states, letters = state_names(n_states), letter_names(n_letters)
    delta = {}
    for q in states:
        for a in letters:
            if n_states == 1 or rng.random() < p_sure:
                delta[(q, a)] = {rng.choice(states): Fraction(1)}
            else:
                q1, q2 = rng.sample(states, 2)
                delta[(q, a)] = {q1: Fraction(1, 2), q2: Fraction(1, 2)}
    return ProbWordAutomaton(states, letters, delta, states[0], random_acceptance(rng, states, kind))


def random_binary(rng, n_states: int, n_letters: int, kind: str = "rabin"):
    if n_states < 2:
        raise ValueError("binary-branching automata need at least two states")
    states, letters = state_names(n_states), letter_names(n_letters)
    delta = {}
    for q in states:
        for a in letters:
            q1, q2 = rng.sample(states, 2)
            delta[(q, a)] = {q1: Fraction(1, 2), q2: Fraction(1, 2)}
    return ProbWordAutomaton(states, letters, delta, states[0], random_acceptance(rng, states, kind))


def random_lasso(rng, alphabet: Sequence[str], max_length: int) -> LassoWord:
    total = rng.randint(1, max_length)
    nu = rng.randint(0, total - 1)
    word = [rng.choice(alphabet) for _ in range(total)]
    return LassoWord(tuple(word[:nu]), tuple(word[nu:]))


def random_tree(rng, alphabet: Sequence[str], max_classes: int) -> RegularTree:
    n = rng.randint(1, max_classes)
    names = [f"n{i}" for i in range(n)]
    c0 = {c: rng.choice(names) for c in names}
    c1 = {c: rng.choice(names) for c in names}
    label = {c: rng.choice(alphabet) for c in names}
    seen = [names[0]]
    for c in seen:
        for d in (c0[c], c1[c]):
            if d not in seen:
                seen.append(d)
    return RegularTree(tuple(seen), names[0], {c: label[c] for c in seen}, {c: c0[c] for c in seen}, {c: c1[c] for c in seen})


def random_chain(rng, n_states: int, max_priority: int = 3) -> FiniteChain:
    """Random chain with small non-dyadic denominators; labels are priorities."""
    names = tuple(f"s{i}" for i in range(n_states))
    delta = {}
    for s in names:
        k = rng.randint(1, min(3, n_states))
        targets = rng.sample(names, k)
        weights = [rng.randint(1, 3) for _ in targets]
        total = sum(weights)
        delta[s] = {t: Fraction(w, total) for t, w in zip(targets, weights)}
    labels = {s: rng.randint(0, max_priority) for s in names}
    return FiniteChain(names, names[0], delta, labels)


# --------------------------------------------------------------------------
# corpus documents
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = DEFAULT_SEED
    counts: Dict[str, int] = field(default_factory=lambda: {"semi-simple": 10, "simple": 10, "binary-branching": 10})
    max_states: int = 5
    max_letters: int = 3
    max_lasso: int = 6
    lassos_per_automaton: int = 3
    kinds: Tuple[str, ...] = ("rabin", "parity")

    def __post_init__(self):
        if min(self.max_states, self.max_letters, self.max_lasso, self.lassos_per_automaton) < 1:
            raise ValueError("corpus bounds must be positive")
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("corpus counts must be non-negative")
        unknown = set(self.counts) - set(_MAKERS)
        if unknown:
            raise ValueError(f"unknown automaton class(es) {sorted(unknown)}")
        if not self.kinds or set(self.kinds) - {"rabin", "parity", "buchi", "cobuchi"}:
            raise ValueError(f"bad acceptance kinds {self.kinds!r}")


_MAKERS = {
    "semi-simple": random_semisimple,
    "simple": random_simple,
    "binary-branching": random_binary,
}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    cls: str
    automaton: ProbWordAutomaton
    lassos: Tuple[LassoWord, ...]


def generate_corpus(spec: CorpusSpec) -> List[CorpusEntry]:
    rng = rng_for(spec.seed)
    out = []
    for cls in ("semi-simple", "simple", "binary-branching"):
        for i in range(spec.counts.get(cls, 0)):
            low = 2 if cls == "binary-branching" else 1
            n = rng.randint(low, max(low, spec.max_states))
            m = rng.randint(1, spec.max_letters)
            kind = rng.choice(spec.kinds)
            a = _MAKERS[cls](rng, n, m, kind)
            words = tuple(random_lasso(rng, a.alphabet, spec.max_lasso) for _ in range(spec.lassos_per_automaton))
            out.append(CorpusEntry(f"{cls}-{i:03d}", cls, a, words))
    return out
