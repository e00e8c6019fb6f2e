"""Exact finite Markov chains with inf-set objectives.

A run of a finite chain is almost surely absorbed into a bottom strongly
connected component (BSCC) and then visits every state of that component
infinitely often.  Objective values are therefore sums of absorption
probabilities over the BSCCs whose label set satisfies the condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from qualomega.errors import AllSilentBscc, ValidationError


def _is_none(label) -> bool:
    return label is None


@dataclass(frozen=True)
class FiniteChain:
    """``delta[s]`` is the sparse successor distribution of ``s``."""

    states: Tuple[Hashable, ...]
    initial: Hashable
    delta: Dict[Hashable, Dict[Hashable, Fraction]]
    labels: Dict[Hashable, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(
            self,
            "delta",
            {s: {t: Fraction(x) for t, x in row.items() if x != 0} for s, row in self.delta.items()},
        )

    def successors(self, s) -> Dict[Hashable, Fraction]:
        return self.delta.get(s, {})

    def label(self, s):
        return self.labels.get(s)


def validate_chain(c: FiniteChain) -> list:
    issues = []
    declared = set(c.states)
    if c.initial not in declared:
        issues.append(f"initial state {c.initial!r} undeclared")
    for s in c.states:
        row = c.successors(s)
        for t, x in row.items():
            if t not in declared:
                issues.append(f"edge {s!r} -> {t!r} leaves the declared states")
            if x < 0:
                issues.append(f"negative probability on {s!r} -> {t!r}")
        total = sum(row.values(), Fraction(0))
        if total != 1:
            issues.append(f"row {s!r} sums to {total}")
    return issues


def ensure_chain(c: FiniteChain) -> FiniteChain:
    issues = validate_chain(c)
    if issues:
        raise ValidationError(issues)
    return c


@dataclass(frozen=True)
class ChainObjective:
    """Acceptance condition over labels; silent labels are dropped before evaluation."""

    condition: Any
    silent: Callable[[Any], bool] = _is_none

    def infset(self, c: FiniteChain, states) -> frozenset:
        return frozenset(c.label(s) for s in states if not self.silent(c.label(s)))


@dataclass(frozen=True)
class BsccDecomposition:
    bsccs: Tuple[frozenset, ...]
    transient: frozenset
    reach_prob: Dict[int, Fraction]


# --------------------------------------------------------------------------
# graph part
# --------------------------------------------------------------------------


def strongly_connected_components(states: Sequence, succ: Callable) -> List[List]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index: Dict[Any, int] = {}
    low: Dict[Any, int] = {}
    on_stack = set()
    stack: list = []
    comps: List[List] = []
    counter = 0
    for root in states:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def reachable(start, succ: Callable) -> List:
    seen = {start: None}
    queue = [start]
    for s in queue:
        for t in succ(s):
            if t not in seen:
                seen[t] = None
                queue.append(t)
    return list(seen)


# --------------------------------------------------------------------------
# exact linear algebra
# --------------------------------------------------------------------------


def solve_sparse(rows: Dict[Any, Dict[Any, Fraction]], rhs: Dict[Any, Dict[Any, Fraction]], order: Sequence):
    """Solve ``rows @ x = rhs`` by Gaussian elimination in the given variable order.

    ``rows[i]`` is a sparse row, ``rhs[i]`` a sparse vector of right-hand-side
    columns.  No pivoting: callers pass nonsingular M-matrices (``I - P`` on
    transient states), whose diagonal pivots stay positive.
    """
    rows = {i: dict(rows[i]) for i in order}
    rhs = {i: dict(rhs.get(i, {})) for i in order}
    pos = {v: k for k, v in enumerate(order)}
    for v in order:
        piv = rows[v].get(v, Fraction(0))
        if piv == 0:
            raise ZeroDivisionError(f"singular system at {v!r}")
        if piv != 1:
            inv = 1 / piv
            rows[v] = {c: x * inv for c, x in rows[v].items()}
            rhs[v] = {c: x * inv for c, x in rhs[v].items()}
        for u in order[pos[v] + 1:]:
            f = rows[u].get(v)
            if not f:
                continue
            ru = rows[u]
            for c, x in rows[v].items():
                y = ru.get(c, Fraction(0)) - f * x
                if y:
                    ru[c] = y
                else:
                    ru.pop(c, None)
            bu = rhs[u]
            for c, x in rhs[v].items():
                y = bu.get(c, Fraction(0)) - f * x
                if y:
                    bu[c] = y
                else:
                    bu.pop(c, None)
    sol: Dict[Any, Dict[Any, Fraction]] = {}
    for v in reversed(order):
        val = dict(rhs[v])
        for c, x in rows[v].items():
            if c == v:
                continue
            for k, y in sol[c].items():
                val[k] = val.get(k, Fraction(0)) - x * y
        sol[v] = {k: y for k, y in val.items() if y}
    return sol


# --------------------------------------------------------------------------
# decomposition and objectives
# --------------------------------------------------------------------------


def bscc_decompose(c: FiniteChain) -> BsccDecomposition:
    succ = lambda s: c.successors(s).keys()  # noqa: E731
    comps = strongly_connected_components(c.states, succ)
    order = {s: i for i, s in enumerate(c.states)}
    bsccs = []
    for comp in comps:
        members = set(comp)
        if all(t in members for s in comp for t in succ(s)):
            bsccs.append(frozenset(comp))
    bsccs.sort(key=lambda b: min(order[s] for s in b))
    where = {s: i for i, b in enumerate(bsccs) for s in b}
    transient = frozenset(s for s in c.states if s not in where)

    reach = {i: Fraction(0) for i in range(len(bsccs))}
    if c.initial in where:
        reach[where[c.initial]] = Fraction(1)
        return BsccDecomposition(tuple(bsccs), transient, reach)

    live = [s for s in reachable(c.initial, succ) if s not in where]
    rows, rhs = {}, {}
    for s in live:
        row = {s: Fraction(1)}
        b: Dict[int, Fraction] = {}
        for t, x in c.successors(s).items():
            if t in where:
                b[where[t]] = b.get(where[t], Fraction(0)) + x
            else:
                row[t] = row.get(t, Fraction(0)) - x
        rows[s] = {k: v for k, v in row.items() if v}
        rhs[s] = b
    sol = solve_sparse(rows, rhs, live)
    for i, x in sol[c.initial].items():
        reach[i] = x
    return BsccDecomposition(tuple(bsccs), transient, reach)


@dataclass(frozen=True)
class ObjectiveReport:
    value: Fraction
    decomposition: BsccDecomposition
    verdicts: Dict[int, Optional[bool]]
    infsets: Dict[int, frozenset]


def evaluate(c: FiniteChain, o: ChainObjective) -> ObjectiveReport:
    """Value plus the per-BSCC table behind it."""
    dec = bscc_decompose(c)
    total = Fraction(0)
    verdicts: Dict[int, Optional[bool]] = {}
    infsets: Dict[int, frozenset] = {}
    for i, b in enumerate(dec.bsccs):
        labels = o.infset(c, b)
        infsets[i] = labels
        if dec.reach_prob[i] == 0:
            verdicts[i] = o.condition.accepts(labels) if labels else None
            continue
        if not labels:
            raise AllSilentBscc(b)
        verdicts[i] = o.condition.accepts(labels)
        if verdicts[i]:
            total += dec.reach_prob[i]
    return ObjectiveReport(total, dec, verdicts, infsets)


def objective_value(c: FiniteChain, o: ChainObjective) -> Fraction:
    return evaluate(c, o).value


def almost_sure(c: FiniteChain, o: ChainObjective) -> bool:
    return objective_value(c, o) == 1


def positive(c: FiniteChain, o: ChainObjective) -> bool:
    return objective_value(c, o) > 0


# --------------------------------------------------------------------------
# sampling (statistical cross-check)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SampledRun:
    trace: Tuple[Any, ...]
    infset: frozenset
    accepted: bool


def _tables(c: FiniteChain):
    idx = {s: i for i, s in enumerate(c.states)}
    width = max(len(c.successors(s)) for s in c.states)
    cum = np.ones((len(c.states), width))
    tgt = np.zeros((len(c.states), width), dtype=np.int64)
    for s, i in idx.items():
        acc = Fraction(0)
        for k, (t, x) in enumerate(c.successors(s).items()):
            acc += x
            cum[i, k] = float(acc)
            tgt[i, k] = idx[t]
        if k + 1 < width:
            tgt[i, k + 1:] = tgt[i, k]
        cum[i, k:] = 1.0
    return idx, cum, tgt


def sample_run(c: FiniteChain, o: ChainObjective, steps: int, seed: int) -> SampledRun:
    """One seeded run of ``steps`` transitions.

    The labels seen in the second half of the trace stand in for the inf-set.
    Uses numpy's PCG64 generator seeded with ``seed``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    idx, cum, tgt = _tables(c)
    cur = idx[c.initial]
    path = [cur]
    for u in rng.random(steps):
        k = int(np.searchsorted(cum[cur], u, side="right"))
        cur = int(tgt[cur, min(k, cum.shape[1] - 1)])
        path.append(cur)
    trace = tuple(c.label(c.states[i]) for i in path)
    tail = [c.states[i] for i in path[len(path) // 2:]]
    inf = o.infset(c, tail)
    return SampledRun(trace, inf, bool(inf) and o.condition.accepts(inf))


def sample_acceptance(c: FiniteChain, o: ChainObjective, samples: int, steps: int, seed: int) -> int:
    """Count accepted runs among ``samples`` independent seeded runs (vectorised).

    Same per-run semantics as ``sample_run``: the states visited in the
    second half of ``steps`` transitions stand in for the inf-set.
    """
    rng = np.random.default_rng(seed)
    idx, cum, tgt = _tables(c)
    n_states, width = cum.shape
    # row i's cumulative weights shifted to (i, i+1]; one searchsorted picks every successor
    keys = (cum + np.arange(n_states)[:, None]).ravel()
    flat_tgt = tgt.ravel()
    cur = np.full(samples, idx[c.initial], dtype=np.int64)
    packed = n_states <= 63
    seen = np.zeros(samples, dtype=np.int64) if packed else np.zeros((samples, n_states), dtype=bool)
    rows = np.arange(samples)
    half = (steps + 1) // 2
    for step in range(1, steps + 1):
        pos = np.searchsorted(keys, cur + rng.random(samples), side="right")
        cur = flat_tgt[np.minimum(pos, cur * width + width - 1)]
        if step >= half:
            if packed:
                seen |= np.left_shift(1, cur)
            else:
                seen[rows, cur] = True
    patterns, counts = np.unique(seen, axis=0, return_counts=True)
    accepted = 0
    for pat, cnt in zip(patterns, counts):
        members = [i for i in range(n_states) if (int(pat) >> i) & 1] if packed else np.flatnonzero(pat)
        inf = o.infset(c, [c.states[i] for i in members])
        if inf and o.condition.accepts(inf):
            accepted += int(cnt)
    return accepted
