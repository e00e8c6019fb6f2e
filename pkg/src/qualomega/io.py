"""JSON documents for automata, chains, trees and runs.

Probabilities are written as exact ``"num/den"`` strings.  Every reader
accepts what the matching writer produces, plus plain integers or
``"num/den"``/decimal strings for probabilities.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict

from qualomega.core import Buchi, CoBuchi, Parity, ProbWordAutomaton, Rabin
from qualomega.errors import DocumentError
from qualomega.markov import ChainObjective, FiniteChain
from qualomega.trees import ProbTreeAutomaton, RegularRun, RegularTree, TreeAutomaton


def fmt_prob(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_prob(s) -> Fraction:
    try:
        if isinstance(s, float):
            raise ValueError("floating-point probabilities are not exact")
        x = Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise DocumentError(f"bad probability {s!r}: {e}") from None
    return x


def _require(doc: Dict, *keys):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise DocumentError(f"document lacks field(s) {', '.join(missing)}")


# -- acceptance ------------------------------------------------------------


def acceptance_to_json(acc) -> Dict[str, Any]:
    if isinstance(acc, Buchi):
        return {"kind": "buchi", "states": sorted(acc.accepting)}
    if isinstance(acc, CoBuchi):
        return {"kind": "cobuchi", "states": sorted(acc.rejecting)}
    if isinstance(acc, Rabin):
        return {
            "kind": "rabin",
            "pairs": [{"alpha": sorted(a), "beta": sorted(b)} for a, b in acc.pairs],
        }
    if isinstance(acc, Parity):
        return {"kind": "parity", "priority": dict(acc.priority)}
    raise TypeError(f"unknown acceptance condition {acc!r}")


def acceptance_from_json(doc: Dict):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise DocumentError("acceptance must be an object with a 'kind'")
    kind = doc["kind"]
    if kind == "buchi":
        _require(doc, "states")
        return Buchi(doc["states"])
    if kind == "cobuchi":
        _require(doc, "states")
        return CoBuchi(doc["states"])
    if kind == "rabin":
        _require(doc, "pairs")
        return Rabin(tuple((p.get("alpha", []), p.get("beta", [])) for p in doc["pairs"]))
    if kind == "parity":
        _require(doc, "priority")
        prio = doc["priority"]
        if not all(isinstance(v, int) and v >= 0 for v in prio.values()):
            raise DocumentError("priorities must be natural numbers")
        return Parity(prio)
    raise DocumentError(f"unknown acceptance kind {kind!r}")


# -- word automata ---------------------------------------------------------


def automaton_to_json(a: ProbWordAutomaton) -> Dict[str, Any]:
    return {
        "states": list(a.states),
        "alphabet": list(a.alphabet),
        "initial": a.initial,
        "acceptance": acceptance_to_json(a.acc),
        "delta": [
            {"from": q, "letter": l, "to": p, "prob": fmt_prob(x)} for q, l, p, x in a.transitions()
        ],
    }


def automaton_from_json(doc: Dict) -> ProbWordAutomaton:
    _require(doc, "states", "alphabet", "initial", "acceptance", "delta")
    trans = []
    for e in doc["delta"]:
        _require(e, "from", "letter", "to", "prob")
        trans.append((e["from"], e["letter"], e["to"], parse_prob(e["prob"])))
    return ProbWordAutomaton.from_transitions(
        doc["states"], doc["alphabet"], doc["initial"], acceptance_from_json(doc["acceptance"]), trans
    )


# -- tree automata ---------------------------------------------------------


def tree_automaton_to_json(a) -> Dict[str, Any]:
    base = {
        "states": list(a.states),
        "alphabet": list(a.alphabet),
        "initial": a.initial,
        "acceptance": acceptance_to_json(a.acc),
    }
    if isinstance(a, ProbTreeAutomaton):
        base["type"] = "prob-tree"
        base["delta"] = [
            {"from": q, "letter": l, "left": q0, "right": q1, "prob": fmt_prob(x)}
            for q in a.states
            for l in a.alphabet
            for (q0, q1), x in sorted(a.row(q, l).items(), key=lambda kv: (a.states.index(kv[0][0]), a.states.index(kv[0][1])))
        ]
    else:
        base["type"] = "tree"
        base["transitions"] = [
            {"from": q, "letter": l, "left": q0, "right": q1} for q, l, q0, q1 in a.sorted_transitions()
        ]
    return base


def tree_automaton_from_json(doc: Dict):
    _require(doc, "states", "alphabet", "initial", "acceptance")
    acc = acceptance_from_json(doc["acceptance"])
    if doc.get("type") == "prob-tree" or "delta" in doc:
        delta: Dict = {}
        for e in doc["delta"]:
            _require(e, "from", "letter", "left", "right", "prob")
            row = delta.setdefault((e["from"], e["letter"]), {})
            key = (e["left"], e["right"])
            row[key] = row.get(key, Fraction(0)) + parse_prob(e["prob"])
        return ProbTreeAutomaton(doc["states"], doc["alphabet"], delta, doc["initial"], acc)
    _require(doc, "transitions")
    trans = set()
    for e in doc["transitions"]:
        _require(e, "from", "letter", "left", "right")
        trans.add((e["from"], e["letter"], e["left"], e["right"]))
    return TreeAutomaton(doc["states"], doc["alphabet"], frozenset(trans), doc["initial"], acc)


# -- trees and runs --------------------------------------------------------


def tree_to_json(t: RegularTree) -> Dict[str, Any]:
    return {
        "classes": [str(c) for c in t.classes],
        "root": str(t.root),
        "label": {str(c): t.label[c] for c in t.classes},
        "child0": {str(c): str(t.child0[c]) for c in t.classes},
        "child1": {str(c): str(t.child1[c]) for c in t.classes},
    }


def tree_from_json(doc: Dict) -> RegularTree:
    _require(doc, "classes", "root", "label", "child0", "child1")
    return RegularTree(tuple(doc["classes"]), doc["root"], dict(doc["label"]), dict(doc["child0"]), dict(doc["child1"]))


def run_to_json(r: RegularRun) -> Dict[str, Any]:
    return {
        "classes": [str(c) for c in r.classes],
        "root": str(r.root),
        "state": {str(c): r.state[c] for c in r.classes},
        "node": {str(c): str(r.node[c]) for c in r.classes},
        "child0": {str(c): str(r.child0[c]) for c in r.classes},
        "child1": {str(c): str(r.child1[c]) for c in r.classes},
    }


def run_from_json(doc: Dict, automaton, tree: RegularTree) -> RegularRun:
    _require(doc, "classes", "root", "state", "node", "child0", "child1")
    return RegularRun(
        automaton,
        tree,
        tuple(doc["classes"]),
        doc["root"],
        dict(doc["state"]),
        dict(doc["node"]),
        dict(doc["child0"]),
        dict(doc["child1"]),
    )


# -- chains ----------------------------------------------------------------


def chain_to_json(c: FiniteChain, objective: ChainObjective = None) -> Dict[str, Any]:
    name = {s: _state_name(s) for s in c.states}
    doc = {
        "states": [name[s] for s in c.states],
        "initial": name[c.initial],
        "delta": [
            {"from": name[s], "to": name[t], "prob": fmt_prob(x)}
            for s in c.states
            for t, x in c.successors(s).items()
        ],
        "labels": {name[s]: _label_name(c.label(s)) for s in c.states},
    }
    if objective is not None:
        doc["objective"] = acceptance_to_json(objective.condition)
    return doc


def _label_name(l):
    # JSON object keys are strings, so labels are too (silent stays null)
    return None if l is None else str(l)


def _state_name(s) -> str:
    if isinstance(s, tuple):
        return "(" + ",".join(map(str, s)) + ")"
    return str(s)


def chain_from_json(doc: Dict):
    """Return ``(chain, objective or None)``; ``null`` labels are silent."""
    _require(doc, "states", "initial", "delta")
    delta: Dict = {s: {} for s in doc["states"]}
    for e in doc["delta"]:
        _require(e, "from", "to", "prob")
        row = delta.setdefault(e["from"], {})
        row[e["to"]] = row.get(e["to"], Fraction(0)) + parse_prob(e["prob"])
    labels = dict(doc.get("labels", {s: s for s in doc["states"]}))
    chain = FiniteChain(tuple(doc["states"]), doc["initial"], delta, labels)
    obj = ChainObjective(acceptance_from_json(doc["objective"])) if "objective" in doc else None
    return chain, obj


# -- files -----------------------------------------------------------------


def read_json(path) -> Dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path} is not valid JSON: {e}") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc))
