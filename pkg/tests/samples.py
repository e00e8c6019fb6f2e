"""Small hand-built automata shared by several test modules."""

import json
from fractions import Fraction
from pathlib import Path

from qualomega.core import ProbWordAutomaton, Rabin

GOLDEN = Path(__file__).parent / "golden"


def eighths(acc=None):
    """The row (q, a) -> q1: 1/8, q2: 4/8, q3: 3/8 with absorbing targets."""
    delta = {("q", "a"): {"q1": Fraction(1, 8), "q2": Fraction(4, 8), "q3": Fraction(3, 8)}}
    for p in ("q1", "q2", "q3"):
        delta[(p, "a")] = {p: Fraction(1)}
    return ProbWordAutomaton(("q", "q1", "q2", "q3"), ("a",), delta, "q", acc or Rabin(((["q1"], []),)))


def golden(name):
    return json.loads((GOLDEN / name).read_text())
