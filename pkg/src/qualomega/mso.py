"""Formulas of MSO with the path-measure quantifier, and the automaton encoding.

Concrete syntax is an S-expression language::

    (succ0 x y) (succ1 x y) (in x X) (not f) (and f g)
    (forall x f) (forallS X f) (forallP1 X f)

``forallP1 X f`` states that the set of paths X satisfying f has measure one.
Disjunction, implication and existential quantifiers are abbreviations and
are expanded through ``not``/``and``/``forall`` on construction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from qualomega.core import Parity
from qualomega.errors import CodingWidthTooSmall, DocumentError, NotParity

FO = "fo"
SO = "so"


@dataclass(frozen=True)
class Var:
    name: str
    kind: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Succ0:
    x: Var
    y: Var


@dataclass(frozen=True)
class Succ1:
    x: Var
    y: Var


@dataclass(frozen=True)
class Mem:
    x: Var
    X: Var


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForallFO:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class ForallSO:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class ForallPath:
    var: Var
    body: "Formula"


Formula = Union[Succ0, Succ1, Mem, Not, And, ForallFO, ForallSO, ForallPath]
ATOMS = (Succ0, Succ1, Mem)
BINDERS = (ForallFO, ForallSO, ForallPath)


# --------------------------------------------------------------------------
# derived connectives
# --------------------------------------------------------------------------


def and_all(parts: Sequence[Formula]) -> Formula:
    """Balanced conjunction; the empty conjunction is ``true``."""
    parts = list(parts)
    if not parts:
        return TRUE
    while len(parts) > 1:
        parts = [And(parts[i], parts[i + 1]) if i + 1 < len(parts) else parts[i] for i in range(0, len(parts), 2)]
    return parts[0]


def or_(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def or_all(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    return Not(and_all([Not(p) for p in parts]))


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def exists_fo(v: Var, body: Formula) -> Formula:
    return Not(ForallFO(v, Not(body)))


def forall_all(vs: Sequence[Var], body: Formula) -> Formula:
    for v in reversed(vs):
        body = ForallFO(v, body) if v.kind == FO else ForallSO(v, body)
    return body


_F_SET, _F_NODE = Var("Bot", SO), Var("bot", FO)
# every node lies in every set: false, witnessed by the empty set
FALSE: Formula = ForallSO(_F_SET, ForallFO(_F_NODE, Mem(_F_NODE, _F_SET)))
TRUE: Formula = Not(FALSE)


class Names:
    """Fresh variable supply for one emission."""

    def __init__(self, reserved=()):
        self.taken = set(reserved)
        self.count = 0

    def fo(self, hint="v") -> Var:
        return Var(self._next(hint), FO)

    def so(self, hint="W") -> Var:
        return Var(self._next(hint), SO)

    def _next(self, hint):
        while True:
            self.count += 1
            name = f"{hint}{self.count}"
            if name not in self.taken:
                self.taken.add(name)
                return name


# -- tree vocabulary ---------------------------------------------------------


def child_of(x: Var, y: Var) -> Formula:
    return or_(Succ0(x, y), Succ1(x, y))


def is_root(x: Var, names: Names) -> Formula:
    y = names.fo()
    return Not(exists_fo(y, child_of(y, x)))


def equal(x: Var, y: Var, names: Names) -> Formula:
    w = names.so()
    return ForallSO(w, implies(Mem(x, w), Mem(y, w)))


def prefix(x: Var, y: Var, names: Names) -> Formula:
    """``x`` is an ancestor of ``y`` or equal to it: x lies in every
    predecessor-closed set containing y."""
    w, u, v = names.so(), names.fo(), names.fo()
    closed = ForallFO(u, ForallFO(v, implies(And(Mem(v, w), child_of(u, v)), Mem(u, w))))
    return ForallSO(w, implies(And(Mem(y, w), closed), Mem(x, w)))


def strict_prefix(x: Var, y: Var, names: Names) -> Formula:
    return And(prefix(x, y, names), Not(equal(x, y, names)))


def path_axioms(X: Var, names: Optional[Names] = None) -> Formula:
    """X contains the root, is prefix closed, and continues through exactly one child."""
    names = names or Names({X.name})
    r, v, u, c0, c1 = (names.fo() for _ in range(5))
    root_in = exists_fo(r, And(is_root(r, names), Mem(r, X)))
    closed = ForallFO(v, ForallFO(u, implies(And(Mem(v, X), prefix(u, v, names)), Mem(u, X))))
    w = names.fo()
    left = exists_fo(c0, And(Succ0(w, c0), Mem(c0, X)))
    right = exists_fo(c1, And(Succ1(w, c1), Mem(c1, X)))
    progress = ForallFO(w, implies(Mem(w, X), And(or_(left, right), Not(And(left, right)))))
    return and_all([root_in, closed, progress])


# --------------------------------------------------------------------------
# automaton encoding
# --------------------------------------------------------------------------


def needed_width(count: int) -> int:
    return max(1, math.ceil(math.log2(count))) if count > 1 else 1


@dataclass(frozen=True)
class Coding:
    """Injective coding of names into bit vectors; bit ``b`` of the code of the i-th name is ``(i >> b) & 1``."""

    names: Tuple[str, ...]
    width: int

    def __post_init__(self):
        if self.width < 1 or 2**self.width < len(self.names):
            raise CodingWidthTooSmall(f"{len(self.names)} symbols do not fit in {self.width} bits")

    @classmethod
    def of(cls, names, width=None) -> "Coding":
        names = tuple(names)
        return cls(names, needed_width(len(names)) if width is None else width)

    def encode(self, name) -> Tuple[int, ...]:
        i = self.names.index(name)
        return tuple((i >> b) & 1 for b in range(self.width))

    def decode(self, bits) -> str:
        i = sum(bit << b for b, bit in enumerate(bits))
        if i >= len(self.names):
            raise ValueError(f"code {bits} is unused")
        return self.names[i]

    def holds(self, x: Var, name, sets: Sequence[Var]) -> Formula:
        """``x`` carries the code of ``name`` in ``sets``."""
        return and_all(
            [Mem(x, s) if bit else Not(Mem(x, s)) for bit, s in zip(self.encode(name), sets)]
        )

    @property
    def complete(self) -> bool:
        return len(self.names) == 2**self.width


def input_vars(n: int) -> List[Var]:
    return [Var(f"X{i + 1}", SO) for i in range(n)]


def state_vars(m: int) -> List[Var]:
    return [Var(f"Y{i + 1}", SO) for i in range(m)]


def _reserved(*groups):
    return {v.name for g in groups for v in g}


def encode_run(A, X: Sequence[Var], Y: Sequence[Var], letters: Coding, states: Coding, names: Names) -> Formula:
    """``Y`` codes a run of ``A`` on the tree coded by ``X``."""
    if len(X) < letters.width or len(Y) < states.width:
        raise CodingWidthTooSmall("not enough set variables for the chosen coding")
    x, x0, x1 = names.fo(), names.fo(), names.fo()
    r = names.fo()
    root = ForallFO(r, implies(is_root(r, names), states.holds(r, A.initial, Y)))
    options = [
        and_all(
            [
                states.holds(x, q, Y),
                letters.holds(x, a, X),
                states.holds(x0, q0, Y),
                states.holds(x1, q1, Y),
            ]
        )
        for q, a, q0, q1 in A.sorted_transitions()
    ]
    local = ForallFO(
        x,
        exists_fo(x0, exists_fo(x1, and_all([Succ0(x, x0), Succ1(x, x1), or_all(options)]))),
    )
    return And(root, local)


def _parity_levels(A):
    prio = A.acc.priority
    return sorted(set(prio[q] for q in A.states))


def encode_accepting_path(A, Y: Sequence[Var], Z: Var, states: Coding, names: Names) -> Formula:
    """Z is a path of the run coded by Y along which the least priority seen infinitely often is even.

    Nodes are grouped into one set per occurring priority and into cumulative
    "priority at most" sets; a branch is accepting when for some even priority
    p it meets the p-set infinitely often and the sets below p only finitely often.
    """
    if not isinstance(A.acc, Parity):
        raise NotParity("accepting paths are encoded for parity conditions")
    levels = _parity_levels(A)
    P = [names.so("P") for _ in levels]
    L = [names.so("L") for _ in levels]
    y = names.fo()
    defs = []
    for j, p in enumerate(levels):
        members = [states.holds(y, q, Y) for q in A.states if A.acc.priority[q] == p]
        defs.append(ForallFO(y, iff(Mem(y, P[j]), or_all(members))))
        below = Mem(y, P[j]) if j == 0 else or_(Mem(y, P[j]), Mem(y, L[j - 1]))
        defs.append(ForallFO(y, iff(Mem(y, L[j]), below)))

    def infinitely(S: Var) -> Formula:
        u, v = names.fo(), names.fo()
        later = And(And(Mem(v, Z), strict_prefix(u, v, names)), Mem(v, S))
        return ForallFO(u, implies(Mem(u, Z), exists_fo(v, later)))

    def finitely(S: Var) -> Formula:
        u, v = names.fo(), names.fo()
        after = ForallFO(v, implies(And(Mem(v, Z), strict_prefix(u, v, names)), Not(Mem(v, S))))
        return exists_fo(u, And(Mem(u, Z), after))

    winning = []
    for j, p in enumerate(levels):
        if p % 2:
            continue
        winning.append(infinitely(P[j]) if j == 0 else And(infinitely(P[j]), finitely(L[j - 1])))
    body = implies(and_all(defs), And(path_axioms(Z, names), or_all(winning)))
    return forall_all(P + L, body)


@dataclass(frozen=True)
class Encoding:
    formula: Formula
    inputs: Tuple[Var, ...]
    letters: Coding
    states: Coding


def phi_A(A, width: Optional[int] = None) -> Encoding:
    """Formula with free set variables X1..Xn describing the qualitative universal language of A.

    When the letter coding leaves codes unused, a conjunct requires every
    node to carry the code of an actual letter.
    """
    if not isinstance(A.acc, Parity):
        raise NotParity("phi_A is defined for parity tree automata")
    letters = Coding.of(A.alphabet, width)
    states = Coding.of(A.states)
    X = input_vars(letters.width)
    Y = state_vars(states.width)
    Z = Var("Z", SO)
    names = Names(_reserved(X, Y, [Z]))
    run = encode_run(A, X, Y, letters, states, names)
    body = forall_all(Y, implies(run, ForallPath(Z, encode_accepting_path(A, Y, Z, states, names))))
    if not letters.complete:
        x = names.fo()
        valid = ForallFO(x, or_all([letters.holds(x, a, X) for a in A.alphabet]))
        body = And(valid, body)
    return Encoding(body, tuple(X), letters, states)


def emptiness_sentence(A, width: Optional[int] = None) -> Formula:
    """Closed sentence that holds in the binary tree iff no tree is in the qualitative universal language."""
    enc = phi_A(A, width)
    return forall_all(list(enc.inputs), Not(enc.formula))


# --------------------------------------------------------------------------
# analysis
# --------------------------------------------------------------------------


def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, And):
            stack += [g.right, g.left]
        elif isinstance(g, BINDERS):
            stack.append(g.body)


def scope_issues(f: Formula, free: Sequence[Var] = ()) -> List[str]:
    """Unbound occurrences and kind errors; an empty list means well scoped."""
    issues: List[str] = []

    def use(v: Var, kind: str, env: Dict[str, str], where: str):
        if v.kind != kind:
            issues.append(f"{v.name} used as {kind} in {where} but declared {v.kind}")
        if v.name not in env:
            issues.append(f"{v.name} is unbound in {where}")
        elif env[v.name] != v.kind:
            issues.append(f"{v.name} bound as {env[v.name]} but used as {v.kind}")

    stack = [(f, {v.name: v.kind for v in free})]
    while stack:
        g, env = stack.pop()
        if isinstance(g, (Succ0, Succ1)):
            use(g.x, FO, env, type(g).__name__)
            use(g.y, FO, env, type(g).__name__)
        elif isinstance(g, Mem):
            use(g.x, FO, env, "in")
            use(g.X, SO, env, "in")
        elif isinstance(g, Not):
            stack.append((g.body, env))
        elif isinstance(g, And):
            stack += [(g.left, env), (g.right, env)]
        else:
            want = FO if isinstance(g, ForallFO) else SO
            if g.var.kind != want:
                issues.append(f"{type(g).__name__} binds {g.var.kind} variable {g.var.name}")
            stack.append((g.body, {**env, g.var.name: g.var.kind}))
    return issues


def free_variables(f: Formula) -> frozenset:
    out = set()
    stack = [(f, frozenset())]
    while stack:
        g, bound = stack.pop()
        if isinstance(g, (Succ0, Succ1)):
            out |= {v for v in (g.x, g.y) if v.name not in bound}
        elif isinstance(g, Mem):
            out |= {v for v in (g.x, g.X) if v.name not in bound}
        elif isinstance(g, Not):
            stack.append((g.body, bound))
        elif isinstance(g, And):
            stack += [(g.left, bound), (g.right, bound)]
        else:
            stack.append((g.body, bound | {g.var.name}))
    return frozenset(out)


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def stats(f: Formula) -> Dict[str, int]:
    counts = {"atoms": 0, "nodes": 0, "forall": 0, "forallS": 0, "forallP1": 0, "not": 0, "and": 0}
    keys = {ForallFO: "forall", ForallSO: "forallS", ForallPath: "forallP1", Not: "not", And: "and"}
    for g in walk(f):
        counts["nodes"] += 1
        if isinstance(g, ATOMS):
            counts["atoms"] += 1
        else:
            counts[keys[type(g)]] += 1
    return counts


# --------------------------------------------------------------------------
# printing and parsing
# --------------------------------------------------------------------------

_KEYWORDS = {Succ0: "succ0", Succ1: "succ1", Mem: "in", ForallFO: "forall", ForallSO: "forallS", ForallPath: "forallP1"}


def to_text(f: Formula, indent: Optional[int] = None) -> str:
    """Render as an S-expression; with ``indent`` every compound subformula starts a new line."""
    out: List[str] = []

    def emit(g, depth):
        pad = "\n" + " " * (indent * depth) if indent is not None and depth else ""
        if isinstance(g, ATOMS):
            a, b = (g.x, g.y) if not isinstance(g, Mem) else (g.x, g.X)
            out.append(f"{pad}({_KEYWORDS[type(g)]} {a.name} {b.name})")
        elif isinstance(g, Not):
            out.append(f"{pad}(not ")
            emit(g.body, depth + 1)
            out.append(")")
        elif isinstance(g, And):
            out.append(f"{pad}(and ")
            emit(g.left, depth + 1)
            out.append(" ")
            emit(g.right, depth + 1)
            out.append(")")
        else:
            out.append(f"{pad}({_KEYWORDS[type(g)]} {g.var.name} ")
            emit(g.body, depth + 1)
            out.append(")")

    emit(f, 0)
    return "".join(out)


_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def _tokens(text: str) -> List[str]:
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DocumentError(f"cannot tokenise formula at offset {pos}")
        toks.append(m.group(1))
        pos = m.end()
    return toks


def parse(text: str) -> Formula:
    """Inverse of :func:`to_text`; variable kinds follow from their positions."""
    toks = _tokens(text)
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(toks) or toks[pos] != tok:
            found = toks[pos] if pos < len(toks) else "end of input"
            raise DocumentError(f"expected {tok!r}, found {found!r}")
        pos += 1

    def name():
        nonlocal pos
        if pos >= len(toks) or toks[pos] in "()":
            raise DocumentError("expected a variable name")
        pos += 1
        return toks[pos - 1]

    def formula():
        nonlocal pos
        expect("(")
        if pos >= len(toks):
            raise DocumentError("unexpected end of input")
        head = toks[pos]
        pos += 1
        if head in ("succ0", "succ1"):
            cls = Succ0 if head == "succ0" else Succ1
            g = cls(Var(name(), FO), Var(name(), FO))
        elif head == "in":
            g = Mem(Var(name(), FO), Var(name(), SO))
        elif head == "not":
            g = Not(formula())
        elif head == "and":
            left = formula()
            g = And(left, formula())
        elif head == "forall":
            v = Var(name(), FO)
            g = ForallFO(v, formula())
        elif head == "forallS":
            v = Var(name(), SO)
            g = ForallSO(v, formula())
        elif head == "forallP1":
            v = Var(name(), SO)
            g = ForallPath(v, formula())
        else:
            raise DocumentError(f"unknown keyword {head!r}")
        expect(")")
        return g

    f = formula()
    if pos != len(toks):
        raise DocumentError("trailing tokens after formula")
    return f
