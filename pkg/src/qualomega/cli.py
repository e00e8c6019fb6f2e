"""Command-line interface.

Exit codes: 0 success, 1 the queried property or membership is false,
2 bad input (unreadable document, invalid automaton, unsupported class).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from qualomega import io, mso
from qualomega.core import classify, ensure_valid, validate
from qualomega.corpus import CorpusSpec, default_seed, generate_corpus
from qualomega.errors import QualOmegaError
from qualomega.markov import ChainObjective, evaluate, sample_acceptance
from qualomega.pipeline import pipeline_full, pipeline_word
from qualomega.transform import rabin_to_parity_binary, semisimple_to_simple, simple_to_binary
from qualomega.trees import (
    ensure_run,
    ensure_tree,
    enumerate_regular_runs,
    find_rejecting_run,
    qaslang_member,
    qualitative_run_check,
    validate_tree_automaton,
    word_to_tree_copy,
    word_to_tree_switch,
    word_to_universal_tree,
)
from qualomega.words import member_as, member_prob, parse_lasso, value

OK, FALSE, INPUT_ERROR = 0, 1, 2


class UsageError(QualOmegaError):
    pass


def _emit(doc, out=None):
    text = io.dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _verdict(flag: bool) -> int:
    print("true" if flag else "false")
    return OK if flag else FALSE


def _word_automaton(path):
    return ensure_valid(io.automaton_from_json(io.read_json(path)))


def _tree_automaton(path):
    a = io.tree_automaton_from_json(io.read_json(path))
    issues = validate_tree_automaton(a)
    if issues:
        raise UsageError(f"{path}: " + "; ".join(map(str, issues)))
    return a


def _is_tree_doc(doc) -> bool:
    return doc.get("type") in ("tree", "prob-tree")


# -- subcommands -----------------------------------------------------------


def cmd_validate(args) -> int:
    doc = io.read_json(args.automaton)
    if _is_tree_doc(doc):
        issues = validate_tree_automaton(io.tree_automaton_from_json(doc))
    else:
        issues = validate(io.automaton_from_json(doc))
    for i in issues:
        print(i)
    if not issues:
        print("valid")
    return FALSE if issues else OK


def cmd_classify(args) -> int:
    print(classify(_word_automaton(args.automaton)).value)
    return OK


def cmd_value(args) -> int:
    a = _word_automaton(args.automaton)
    w = parse_lasso(args.word, a.alphabet)
    res = value(a, w)
    print(res.value)
    if args.dump_chain:
        io.write_json(args.dump_chain, io.chain_to_json(res.chain, ChainObjective(a.acc)))
    return OK


def cmd_member(args) -> int:
    a = _word_automaton(args.automaton)
    w = parse_lasso(args.word, a.alphabet)
    test = member_as if args.semantics == "as" else member_prob
    return _verdict(test(a, w))


_WORD_TRANSFORMS = {
    "semisimple-to-simple": semisimple_to_simple,
    "simple-to-binary": simple_to_binary,
    "rabin-to-parity": rabin_to_parity_binary,
}
_TREE_TRANSFORMS = {
    "word-to-tree-copy": word_to_tree_copy,
    "word-to-tree-switch": word_to_tree_switch,
    "word-to-universal-tree": word_to_universal_tree,
}


def cmd_transform(args) -> int:
    a = _word_automaton(args.automaton)
    if args.kind in _WORD_TRANSFORMS:
        out, report = _WORD_TRANSFORMS[args.kind](a)
        _emit(io.automaton_to_json(out), args.output)
        if args.report:
            io.write_json(args.report, report.to_json())
    else:
        _emit(io.tree_automaton_to_json(_TREE_TRANSFORMS[args.kind](a)), args.output)
    return OK


def _tree_inputs(args):
    a = _tree_automaton(args.automaton)
    t = ensure_tree(io.tree_from_json(io.read_json(args.tree)), a.alphabet)
    return a, t


def cmd_tree(args) -> int:
    a, t = _tree_inputs(args)
    if args.tree_cmd == "qaslang":
        return _verdict(qaslang_member(a, t))
    if args.tree_cmd == "check-run":
        r = ensure_run(io.run_from_json(io.read_json(args.run), a, t))
        res = qualitative_run_check(r)
        print(res.measure)
        return OK if res.accepting else FALSE
    if args.tree_cmd == "enumerate-runs":
        for n, r in enumerate(enumerate_regular_runs(a, t, args.bound)):
            if args.limit is not None and n >= args.limit:
                print(f"no counterexample among the first {args.limit} runs up to {args.bound} classes")
                return OK
            res = qualitative_run_check(r)
            if not res.accepting:
                print(f"rejecting run found (branch measure {res.measure})", file=sys.stderr)
                _emit(io.run_to_json(r))
                return FALSE
        print(f"no counterexample up to {args.bound} classes")
        return OK
    if args.tree_cmd == "search-run":
        r = find_rejecting_run(a, t)
        if r is None:
            print("every run is qualitatively accepting")
            return OK
        print(f"rejecting run found (branch measure {qualitative_run_check(r).measure})", file=sys.stderr)
        _emit(io.run_to_json(r))
        return FALSE
    raise UsageError(f"unknown tree command {args.tree_cmd!r}")


def cmd_chain(args) -> int:
    chain, obj = io.chain_from_json(io.read_json(args.chain))
    if args.objective:
        obj = ChainObjective(io.acceptance_from_json(json.loads(args.objective)))
    if obj is None:
        raise UsageError("the chain document has no 'objective'; pass --objective")
    rep = evaluate(chain, obj)
    if args.report:
        dec = rep.decomposition
        _emit(
            {
                "value": io.fmt_prob(rep.value),
                "bsccs": [
                    {
                        "states": [io._state_name(s) for s in b],
                        "reach_prob": io.fmt_prob(dec.reach_prob[i]),
                        "labels": sorted(map(str, rep.infsets[i])),
                        "accepting": rep.verdicts[i],
                    }
                    for i, b in enumerate(dec.bsccs)
                ],
                "transient": [io._state_name(s) for s in dec.transient],
            }
        )
    else:
        print(rep.value)
    return OK


def cmd_emit_mso(args) -> int:
    a = _tree_automaton(args.automaton)
    if args.sentence:
        f = mso.emptiness_sentence(a, args.width)
    else:
        f = mso.phi_A(a, args.width).formula
    if args.stats:
        _emit(mso.stats(f))
    else:
        print(mso.to_text(f, indent=2 if args.pretty else None))
    return OK


def cmd_simulate(args) -> int:
    if args.chain:
        chain, obj = io.chain_from_json(io.read_json(args.chain))
        if obj is None:
            raise UsageError("the chain document has no 'objective'")
    else:
        if not (args.automaton and args.word):
            raise UsageError("simulate needs --chain, or --automaton together with --word")
        a = _word_automaton(args.automaton)
        res = value(a, parse_lasso(args.word, a.alphabet))
        chain, obj = res.chain, ChainObjective(a.acc)
    seed = default_seed() if args.seed is None else args.seed
    hits = sample_acceptance(chain, obj, args.samples, args.steps, seed)
    exact = evaluate(chain, obj).value
    _emit(
        {
            "samples": args.samples,
            "steps": args.steps,
            "seed": seed,
            "accepted": hits,
            "frequency": hits / args.samples,
            "exact": io.fmt_prob(exact),
        }
    )
    return OK


def _parse_counts(items):
    counts = {}
    for item in items or ():
        cls, _, n = item.partition("=")
        if cls not in ("semi-simple", "simple", "binary-branching") or not n.isdigit():
            raise UsageError(f"bad --count {item!r}; use CLASS=N with CLASS semi-simple, simple or binary-branching")
        counts[cls] = int(n)
    return counts


def cmd_corpus(args) -> int:
    counts = {"semi-simple": 10, "simple": 10, "binary-branching": 10}
    counts.update(_parse_counts(args.count))
    spec = CorpusSpec(
        seed=default_seed() if args.seed is None else args.seed,
        counts=counts,
        max_states=args.max_states,
        max_letters=args.max_letters,
        max_lasso=args.max_lasso,
        kinds=tuple(args.kinds.split(",")),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    index = {"seed": spec.seed, "prng": "MT19937 (Python random.Random)", "entries": []}
    for e in generate_corpus(spec):
        io.write_json(out / f"{e.name}.json", io.automaton_to_json(e.automaton))
        index["entries"].append({"name": e.name, "class": e.cls, "lassos": [str(w) for w in e.lassos]})
    io.write_json(out / "index.json", index)
    print(f"wrote {len(index['entries'])} automata to {out}")
    return OK


def cmd_pipeline(args) -> int:
    a = _word_automaton(args.automaton)
    words = [parse_lasso(w, a.alphabet) for w in args.word or ()]
    if args.mode == "word":
        res = pipeline_word(a, words)
    else:
        res = pipeline_full(a, words, args.width)
    if args.output:
        for p in res.write(args.output):
            print(p)
    else:
        _emit(res.report())
    return OK if all(c.preserved for c in res.checks) else FALSE


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qualomega", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def automaton_arg(sp, help="word automaton JSON document"):
        sp.add_argument("-a", "--automaton", required=True, help=help)

    def word_arg(sp, required=True):
        sp.add_argument("-w", "--word", required=required, help='lasso word "prefix;cycle", e.g. "ab;b"')

    sp = sub.add_parser("validate", help="check a word or tree automaton document")
    automaton_arg(sp, "automaton JSON document")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("classify", help="binary-branching, simple, semi-simple or general")
    automaton_arg(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("value", help="exact acceptance probability of a lasso word")
    automaton_arg(sp)
    word_arg(sp)
    sp.add_argument("--dump-chain", metavar="FILE", help="write the product chain here")
    sp.set_defaults(func=cmd_value)

    sp = sub.add_parser("member", help="almost-sure or probable membership of a lasso word")
    automaton_arg(sp)
    word_arg(sp)
    sp.add_argument("--semantics", choices=("as", "prob"), default="as")
    sp.set_defaults(func=cmd_member)

    sp = sub.add_parser("transform", help="apply one construction")
    automaton_arg(sp)
    sp.add_argument("--kind", required=True, choices=sorted(_WORD_TRANSFORMS) + sorted(_TREE_TRANSFORMS))
    sp.add_argument("-o", "--output", help="output file (default stdout)")
    sp.add_argument("--report", metavar="FILE", help="write the transform report here")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("tree", help="tree automata on regular trees")
    tsub = sp.add_subparsers(dest="tree_cmd", required=True)
    for name, help in (
        ("qaslang", "is the tree in the almost-sure language of a probabilistic tree automaton"),
        ("check-run", "branch measure of a regular run"),
        ("enumerate-runs", "search runs up to a class bound for a rejecting one"),
        ("search-run", "exact search for a run that is not qualitatively accepting"),
    ):
        tp = tsub.add_parser(name, help=help)
        automaton_arg(tp, "tree automaton JSON document")
        tp.add_argument("-t", "--tree", required=True, help="regular tree JSON document")
        if name == "check-run":
            tp.add_argument("-r", "--run", required=True, help="run JSON document")
        if name == "enumerate-runs":
            tp.add_argument("--bound", type=int, default=64, help="maximum number of run classes")
            tp.add_argument("--limit", type=int, help="stop after this many runs")
    sp.set_defaults(func=cmd_tree)

    sp = sub.add_parser("chain", help="finite Markov chains")
    csub = sp.add_subparsers(dest="chain_cmd", required=True)
    cp = csub.add_parser("solve", help="exact objective value")
    cp.add_argument("-c", "--chain", required=True, help="chain JSON document")
    cp.add_argument("--objective", help='acceptance JSON overriding the document, e.g. \'{"kind":"buchi","states":["s1"]}\'')
    cp.add_argument("--report", action="store_true", help="print the BSCC table as JSON")
    sp.set_defaults(func=cmd_chain)

    sp = sub.add_parser("emit-mso", help="MSO formula for a parity tree automaton")
    automaton_arg(sp, "tree automaton JSON document")
    sp.add_argument("--sentence", action="store_true", help="emit the closed emptiness sentence")
    sp.add_argument("--stats", action="store_true", help="print size statistics instead")
    sp.add_argument("--width", type=int, help="bits per letter code")
    sp.add_argument("--pretty", action="store_true", help="indent the output")
    sp.set_defaults(func=cmd_emit_mso)

    sp = sub.add_parser("simulate", help="Monte-Carlo estimate next to the exact value")
    sp.add_argument("-c", "--chain", help="chain JSON document with an objective")
    sp.add_argument("-a", "--automaton", help="word automaton JSON document")
    word_arg(sp, required=False)
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--steps", type=int, default=400)
    sp.add_argument("--seed", type=int, help="default: $QUALOMEGA_SEED or a fixed seed")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("corpus", help="write a seeded random corpus")
    sp.add_argument("--seed", type=lambda s: int(s, 0), help="64-bit seed (default: $QUALOMEGA_SEED or a fixed seed)")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--count", action="append", metavar="CLASS=N")
    sp.add_argument("--max-states", type=int, default=5)
    sp.add_argument("--max-letters", type=int, default=3)
    sp.add_argument("--max-lasso", type=int, default=6)
    sp.add_argument("--kinds", default="rabin,parity", help="comma-separated acceptance kinds")
    sp.set_defaults(func=cmd_corpus)

    sp = sub.add_parser("pipeline", help="run the reduction chain")
    sp.add_argument("mode", choices=("word", "full"))
    automaton_arg(sp)
    sp.add_argument("-w", "--word", action="append", help="lasso for value spot checks (repeatable)")
    sp.add_argument("--output", help="directory for stage files and report.json")
    sp.add_argument("--width", type=int, help="bits per letter code (full mode)")
    sp.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QualOmegaError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
