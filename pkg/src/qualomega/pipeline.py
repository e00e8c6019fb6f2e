"""The full reduction chain from a semi-simple word automaton to an MSO sentence."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from qualomega import io, mso
from qualomega.core import AutomatonClass, Parity, ProbWordAutomaton, Rabin, classify, ensure_valid
from qualomega.errors import NotSemiSimple, QualOmegaError, UnsupportedAcceptance
from qualomega.transform import (
    TransformReport,
    rabin_to_parity_binary,
    semisimple_to_simple,
    simple_to_binary,
)
from qualomega.trees import TreeAutomaton, validate_tree_automaton, word_to_universal_tree
from qualomega.words import LassoWord, pad, value


class StageCheckFailed(QualOmegaError):
    pass


@dataclass
class Stage:
    name: str
    automaton: Optional[ProbWordAutomaton]
    report: Optional[TransformReport]
    skipped: Optional[str] = None


@dataclass
class SpotCheck:
    word: LassoWord
    values: List[Fraction]

    @property
    def preserved(self) -> bool:
        return len(set(self.values)) == 1


@dataclass
class PipelineResult:
    source: ProbWordAutomaton
    stages: List[Stage]
    checks: List[SpotCheck]
    tree: Optional[TreeAutomaton] = None
    phi: Optional[mso.Encoding] = None
    sentence: Optional[mso.Formula] = None

    @property
    def final(self) -> ProbWordAutomaton:
        return [s.automaton for s in self.stages if s.automaton is not None][-1]

    def report(self) -> dict:
        out = {
            "source_class": classify(self.source).value,
            "stages": [
                {"name": s.name, "skipped": s.skipped}
                if s.skipped
                else {"name": s.name, **s.report.to_json()}
                for s in self.stages
            ],
            "spot_checks": [
                {"word": str(c.word), "values": [str(v) for v in c.values], "preserved": c.preserved}
                for c in self.checks
            ],
        }
        if self.phi is not None:
            out["mso"] = {
                "letter_bits": self.phi.letters.width,
                "state_bits": self.phi.states.width,
                "phi_stats": mso.stats(self.phi.formula),
                "sentence_stats": mso.stats(self.sentence),
            }
        return out

    def write(self, directory) -> List[Path]:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        written = []
        for i, s in enumerate(self.stages, start=1):
            if s.automaton is None:
                continue
            p = d / f"{i}-{s.name}.json"
            io.write_json(p, io.automaton_to_json(s.automaton))
            written.append(p)
        if self.tree is not None:
            p = d / f"{len(self.stages) + 1}-universal-tree.json"
            io.write_json(p, io.tree_automaton_to_json(self.tree))
            written.append(p)
        if self.phi is not None:
            n = len(self.stages) + 2
            for suffix, f in (("phi", self.phi.formula), ("sentence", self.sentence)):
                p = d / f"{n}-{suffix}.mso"
                p.write_text(mso.to_text(f) + "\n")
                written.append(p)
        p = d / "report.json"
        io.write_json(p, self.report())
        written.append(p)
        return written


def _promise(a: ProbWordAutomaton, cls: AutomatonClass, stage: str):
    ensure_valid(a)
    got = classify(a)
    if not got.within(cls):
        raise StageCheckFailed(f"stage {stage} produced a {got.value} automaton, expected {cls.value}")


def pipeline_word(a: ProbWordAutomaton, lassos: Sequence[LassoWord] = ()) -> PipelineResult:
    """Semi-simple -> simple -> binary branching -> parity, with exact value spot checks.

    Parity inputs must already be simple: the first stage is only defined for
    Rabin conditions and is skipped for them, as is the Rabin-to-parity stage.
    """
    ensure_valid(a)
    cls = classify(a)
    if not isinstance(a.acc, (Rabin, Parity)):
        raise UnsupportedAcceptance(f"pipeline expects Rabin or parity, got {a.acc.kind}")
    if not cls.within(AutomatonClass.SEMI_SIMPLE):
        raise NotSemiSimple(f"automaton is {cls.value}")

    stages: List[Stage] = []
    cur, depth, symbol = a, 1, None
    if isinstance(a.acc, Rabin):
        cur, rep = semisimple_to_simple(cur)
        _promise(cur, AutomatonClass.SIMPLE, "semisimple-to-simple")
        depth, symbol = rep.depth, rep.details["pad_symbol"]
        stages.append(Stage("simple", cur, rep))
    elif not cls.within(AutomatonClass.SIMPLE):
        raise UnsupportedAcceptance("semi-simple parity automata cannot enter the Rabin-only first stage")
    else:
        stages.append(Stage("simple", None, None, skipped="parity input is already simple"))

    cur, rep = simple_to_binary(cur)
    _promise(cur, AutomatonClass.BINARY_BRANCHING, "simple-to-binary")
    stages.append(Stage("binary", cur, rep))

    if isinstance(cur.acc, Rabin):
        cur, rep = rabin_to_parity_binary(cur)
        _promise(cur, AutomatonClass.BINARY_BRANCHING, "rabin-to-parity")
        stages.append(Stage("parity", cur, rep))
    else:
        stages.append(Stage("parity", None, None, skipped="already parity"))

    checks = []
    for w in lassos:
        vals = [value(a, w).value]
        padded = pad(w, depth, symbol) if symbol else w
        vals += [value(s.automaton, padded).value for s in stages if s.automaton is not None]
        checks.append(SpotCheck(w, vals))
    return PipelineResult(a, stages, checks)


def pipeline_full(a: ProbWordAutomaton, lassos: Sequence[LassoWord] = (), width: Optional[int] = None) -> PipelineResult:
    """Word pipeline followed by the universal tree automaton and its MSO encoding."""
    res = pipeline_word(a, lassos)
    tree = word_to_universal_tree(res.final)
    issues = validate_tree_automaton(tree)
    if issues:
        raise StageCheckFailed("; ".join(issues))
    res.tree = tree
    res.phi = mso.phi_A(tree, width)
    res.sentence = mso.emptiness_sentence(tree, width)
    return res
