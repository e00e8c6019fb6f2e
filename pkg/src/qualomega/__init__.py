"""Exact analysis of probabilistic automata on infinite words and trees."""

from qualomega.core import (
    AutomatonClass,
    Buchi,
    CoBuchi,
    Parity,
    ProbWordAutomaton,
    Rabin,
    classify,
    validate,
)
from qualomega.markov import ChainObjective, FiniteChain, objective_value
from qualomega.words import LassoWord, member_as, member_prob, parse_lasso, value

__version__ = "0.1.0"

__all__ = [
    "AutomatonClass",
    "Buchi",
    "CoBuchi",
    "ChainObjective",
    "FiniteChain",
    "LassoWord",
    "Parity",
    "ProbWordAutomaton",
    "Rabin",
    "classify",
    "member_as",
    "member_prob",
    "objective_value",
    "parse_lasso",
    "validate",
    "value",
]
