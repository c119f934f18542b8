"""Exact and bounded Marcello numbers, Marcello sequences and Marcello indices.

The exact search is breadth-first over isomorphism classes: layer ``i`` holds
the classes first reached after ``i`` global iterations.  A layer that
contains a one-shot completable class ends the search.  Witnesses are found
on canonical representatives and translated back to the caller's labels.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from . import kernels
from .canon import CanonicalForm, canonical_form, canonical_labeling
from .engine import (
    ALL_VALID,
    SATURATED,
    MAX_ALL_VALID_ORDER,
    MAX_SATURATED_ORDER,
    EngineError,
    GlobalPlan,
    apply_plan,
    assignment_plan,
    eligible_mask,
    enumerate_labeled_outcomes,
    greedy_plan,
    one_shot_completable,
    validate_plan,
)
from .graph import Graph, bits, complete, disjoint_union, join, null

INFINITE = math.inf
DEFAULT_EXACT_CAP = 7
DEFAULT_MAX_ITERATIONS = 64


class SolverError(RuntimeError):
    """Base class for solver failures."""


class OrderCapExceeded(SolverError):
    pass


class IterationCapExceeded(SolverError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    restriction: str = SATURATED
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    dedup: bool = True
    threads: int = 1
    exact_cap: int = DEFAULT_EXACT_CAP
    # "flow" stops at the first layer holding a one-shot class; "enumerate"
    # waits for K_n to appear among enumerated outcomes.
    terminal: Optional[str] = None

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.restriction not in (SATURATED, ALL_VALID):
            raise ValueError(f"unknown restriction {self.restriction!r}")
        if self.terminal not in (None, "flow", "enumerate"):
            raise ValueError(f"unknown terminal test {self.terminal!r}")

    @property
    def terminal_test(self) -> str:
        if self.terminal is not None:
            return self.terminal
        return "flow" if self.restriction == SATURATED else "enumerate"


@dataclass
class SearchStats:
    explored: int = 0
    frontier_sizes: list[int] = field(default_factory=list)


@dataclass
class MarcelloResult:
    value: float
    witness: list[GlobalPlan]
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def finite(self) -> bool:
        return self.value != INFINITE


@dataclass
class SequenceCheck:
    ok: bool
    failure: Optional[str] = None
    graphs: list[Graph] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_sequence(g: Graph, plans: Sequence[GlobalPlan]) -> SequenceCheck:
    """Replay ``plans`` one global iteration at a time; ok iff the last graph is complete."""
    cur = g
    graphs = []
    for i, plan in enumerate(plans):
        if cur.is_complete():
            return SequenceCheck(False, f"graph already complete before iteration {i + 1}", graphs)
        check = validate_plan(cur, plan)
        if not check.ok:
            return SequenceCheck(False, f"iteration {i + 1}: {check.violation}", graphs)
        cur = check.result
        graphs.append(cur)
    if not cur.is_complete():
        return SequenceCheck(False, f"final graph not complete ({cur.size} of {cur.n * (cur.n - 1) // 2} edges)", graphs)
    return SequenceCheck(True, None, graphs)


def _expand_one(args: tuple[str, str]) -> list[tuple[str, list[tuple[int, tuple[int, ...]]]]]:
    g6, restriction = args
    rep = CanonicalForm(g6).graph()
    out: dict[str, list] = {}
    for h, plan in enumerate_labeled_outcomes(rep, restriction).items():
        key = canonical_form(h).graph6
        if key not in out:
            out[key] = [(s.initiator, s.added) for s in plan.steps]
    return list(out.items())


class Solver:
    """Holds memo tables keyed by canonical form; reuse one instance to share work."""

    def __init__(self) -> None:
        self._outcomes: dict[tuple[CanonicalForm, str], dict[CanonicalForm, GlobalPlan]] = {}
        self._oneshot: dict[CanonicalForm, bool] = {}
        self._numbers: dict[tuple[CanonicalForm, SearchConfig], MarcelloResult] = {}
        self.expansions = 0

    # -- memoised primitives ---------------------------------------------

    def outcomes(self, cf: CanonicalForm, restriction: str = SATURATED) -> dict[CanonicalForm, GlobalPlan]:
        """Classes reachable from ``cf`` in one iteration, each with a plan on the representative's labels."""
        key = (cf, restriction)
        hit = self._outcomes.get(key)
        if hit is None:
            self.expansions += 1
            hit = {}
            for h, plan in enumerate_labeled_outcomes(cf.graph(), restriction).items():
                child = canonical_form(h)
                if child not in hit:
                    hit[child] = plan
            hit = dict(sorted(hit.items()))
            self._outcomes[key] = hit
        return hit

    def _prefetch(self, classes: Sequence[CanonicalForm], restriction: str, threads: int) -> None:
        todo = [c for c in classes if (c, restriction) not in self._outcomes]
        if threads <= 1 or len(todo) < 2 * threads:
            return
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_expand_one, [(c.graph6, restriction) for c in todo], chunksize=4))
        for c, items in zip(todo, results):
            self.expansions += 1
            table = {CanonicalForm(k): GlobalPlan.from_pairs(p) for k, p in items}
            self._outcomes[(c, restriction)] = dict(sorted(table.items()))

    def one_shot(self, cf: CanonicalForm) -> bool:
        hit = self._oneshot.get(cf)
        if hit is None:
            hit = self._oneshot[cf] = bool(one_shot_completable(cf.graph()))
        return hit

    def _terminal(self, cf: CanonicalForm, cfg: SearchConfig, n: int) -> bool:
        if cfg.terminal_test == "flow":
            return self.one_shot(cf)
        top = canonical_form(complete(n))
        self._check_cap(n, cfg)
        return top in self.outcomes(cf, cfg.restriction)

    @staticmethod
    def _check_cap(n: int, cfg: SearchConfig) -> None:
        cap = min(cfg.exact_cap, MAX_SATURATED_ORDER if cfg.restriction == SATURATED else MAX_ALL_VALID_ORDER)
        if n > cap:
            raise OrderCapExceeded(f"exact search is capped at order {cap}, graph has order {n}")

    # -- layered search ----------------------------------------------------

    def _layers(self, start: CanonicalForm, n: int, cfg: SearchConfig):
        """Yield ``(depth, layer, parents)`` until a layer with a terminal class."""
        parents: dict[CanonicalForm, Optional[tuple[CanonicalForm, GlobalPlan]]] = {start: None}
        layer = [start]
        depth = 0
        while True:
            yield depth, layer, parents
            if depth + 1 >= cfg.max_iterations:
                raise IterationCapExceeded(f"no completion within {cfg.max_iterations} iterations")
            self._check_cap(n, cfg)
            self._prefetch(layer, cfg.restriction, cfg.threads)
            nxt: dict[CanonicalForm, None] = {}
            seen_here: set[CanonicalForm] = set()
            for c in layer:
                for child, plan in self.outcomes(c, cfg.restriction).items():
                    if child in seen_here or (cfg.dedup and child in parents):
                        continue
                    seen_here.add(child)
                    parents.setdefault(child, (c, plan))
                    nxt[child] = None
            layer = sorted(nxt)
            if not layer:
                raise SolverError("search frontier emptied before completion")
            depth += 1

    def marcello_number(self, g: Graph, cfg: SearchConfig = SearchConfig()) -> MarcelloResult:
        if g.is_complete():
            return MarcelloResult(0, [])
        if g.is_null():
            return MarcelloResult(INFINITE, [])
        start = canonical_form(g)
        rep_result = self._numbers.get((start, cfg))
        if rep_result is None:
            rep_result = self._solve_rep(start, g.n, cfg)
            self._numbers[(start, cfg)] = rep_result
        perm = canonical_labeling(g)
        inv = [0] * g.n
        for v, k in enumerate(perm):
            inv[k] = v
        witness = [p.relabel(inv) for p in rep_result.witness]
        return MarcelloResult(rep_result.value, witness, rep_result.stats)

    def _solve_rep(self, start: CanonicalForm, n: int, cfg: SearchConfig) -> MarcelloResult:
        stats = SearchStats()
        top = canonical_form(complete(n))
        for depth, layer, parents in self._layers(start, n, cfg):
            stats.frontier_sizes.append(len(layer))
            stats.explored = len(parents)
            found = next((c for c in layer if self._terminal(c, cfg, n)), None)
            if found is None:
                continue
            chain = [found]
            while parents[chain[-1]] is not None:
                chain.append(parents[chain[-1]][0])
            chain.reverse()
            witness = []
            cur = start.graph()
            for c, nxt in zip(chain, chain[1:]):
                plan = parents[nxt][1]
                witness_plan, cur = self._step_on(cur, c, plan)
                witness.append(witness_plan)
            if cfg.terminal_test == "flow":
                last = assignment_plan(cur, one_shot_completable(cur).assignment)
            else:
                rep_plan = self.outcomes(found, cfg.restriction)[top]
                last, _ = self._step_on(cur, found, rep_plan)
            witness.append(last)
            check = verify_sequence(start.graph(), witness)
            if not check.ok:
                raise SolverError(f"internal error: witness failed verification: {check.failure}")
            return MarcelloResult(depth + 1, witness, stats)
        raise SolverError("unreachable")

    @staticmethod
    def _step_on(cur: Graph, cf: CanonicalForm, rep_plan: GlobalPlan) -> tuple[GlobalPlan, Graph]:
        # rep_plan is written on cf's representative; move it onto cur's labels
        perm = canonical_labeling(cur)
        inv = [0] * cur.n
        for v, k in enumerate(perm):
            inv[k] = v
        plan = rep_plan.relabel(inv)
        nxt, _ = apply_plan(cur, plan)
        return plan, nxt

    def marcello_index(self, g: Graph, cfg: SearchConfig = SearchConfig()) -> "IndexResult":
        if g.is_complete() or g.is_null():
            raise EngineError("Marcello index needs a non-complete, non-null graph")
        cfg = SearchConfig(restriction=cfg.restriction, max_iterations=cfg.max_iterations, exact_cap=cfg.exact_cap,
                           threads=cfg.threads, terminal="flow")
        k = int(self.marcello_number(g, cfg).value)
        start = canonical_form(g)
        layers: list[list[CanonicalForm]] = []
        for depth, layer, _ in self._layers(start, g.n, cfg):
            layers.append(layer)
            if depth == k - 1:
                break
        alive = [set() for _ in layers]
        alive[-1] = {c for c in layers[-1] if self.one_shot(c)}
        for j in range(len(layers) - 2, -1, -1):
            nxt = alive[j + 1]
            alive[j] = {c for c in layers[j] if any(ch in nxt for ch in self.outcomes(c, cfg.restriction))}
        intermediates = {c: k - j for j in range(1, len(layers)) for c in sorted(alive[j])}
        failed: dict[CanonicalForm, int] = {}
        if k == 1:
            top = canonical_form(complete(g.n))
            failed = {c: 1 for c in self.outcomes(start, cfg.restriction) if c != top}
        return IndexResult(len(intermediates), intermediates, [sorted(a) for a in alive], k, failed)


@dataclass
class IndexResult:
    index: int
    intermediates: dict[CanonicalForm, int]
    layers: list[list[CanonicalForm]]
    marcello_number: int
    # diagnostic only: non-complete first-iteration outcomes of a one-shot graph
    failed_first_outcomes: dict[CanonicalForm, int] = field(default_factory=dict)


_default = Solver()


def default_solver() -> Solver:
    return _default


def marcello_number(g: Graph, cfg: SearchConfig = SearchConfig(), solver: Optional[Solver] = None) -> MarcelloResult:
    """Exact Marcello number with a replayable witness."""
    return (solver or _default).marcello_number(g, cfg)


def marcello_index(g: Graph, cfg: SearchConfig = SearchConfig(), solver: Optional[Solver] = None) -> IndexResult:
    """Distinct intermediate classes over all minimal sequences (endpoints excluded)."""
    return (solver or _default).marcello_index(g, cfg)


@dataclass
class UpperBound:
    value: int
    witness: list[GlobalPlan]


def marcello_upper(
    g: Graph,
    policies: Sequence[str] = ("ascending", "descending", "random"),
    restarts: int = 8,
    seed: int = 0,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    finish_with_flow: bool = True,
) -> UpperBound:
    """Fewest iterations found by repeated greedy passes.

    With ``finish_with_flow`` an iteration whose input is one-shot completable
    uses the flow assignment instead of a greedy plan.
    """
    if g.is_null():
        raise EngineError("graph has no edges")
    if g.is_complete():
        return UpperBound(0, [])
    best: Optional[UpperBound] = None
    for pi, policy in enumerate(policies):
        for r in range(restarts if policy == "random" else 1):
            cur, plans = g, []
            while not cur.is_complete():
                if len(plans) >= max_iterations:
                    raise IterationCapExceeded(f"greedy did not finish within {max_iterations} iterations")
                decision = one_shot_completable(cur) if finish_with_flow else None
                if decision:
                    plan = assignment_plan(cur, decision.assignment)
                else:
                    plan = greedy_plan(cur, policy, seed=seed * 1000003 + pi * 1009 + r * 7919 + len(plans))
                cur, _ = apply_plan(cur, plan)
                plans.append(plan)
            if best is None or len(plans) < best.value:
                best = UpperBound(len(plans), plans)
    return best


def counting_lower_bound(g: Graph, refined: bool = True) -> int:
    """Each iteration at most triples the size, so C(n,2) <= 3^k * size.

    ``refined`` also applies the degree-sum necessary condition for k = 1.
    """
    if g.is_null():
        raise EngineError("graph has no edges")
    target = g.n * (g.n - 1) // 2
    k, size = 0, g.size
    while size * 3 ** k < target:
        k += 1
    if refined and k == 1:
        lhs = sum(d for d in g.degrees() if 0 < d < g.n - 1) + g.size
        if lhs < target:
            k = 2
    return k


def min_join_order(m: int, max_n: int = 62) -> int:
    """Smallest n >= 1 with K_n + N_m completable in one iteration."""
    if m < 2:
        raise ValueError("m must be >= 2")
    for n in range(1, max_n + 1):
        if n + m > 64:
            break
        if one_shot_completable(join(complete(n), null(m))):
            return n
    raise OrderCapExceeded(f"no n <= {max_n} found for m = {m}")


def min_union_order(m: int, cfg: SearchConfig = SearchConfig(), solver: Optional[Solver] = None) -> int:
    """Smallest n >= 2 with Marcello number of K_n ∪ N_m equal to 2."""
    if m < 2:
        raise ValueError("m must be >= 2")
    n = 2
    while n + m <= cfg.exact_cap:
        if marcello_number(disjoint_union(complete(n), null(m)), cfg, solver).value == 2:
            return n
        n += 1
    raise OrderCapExceeded(f"no n with n + {m} <= {cfg.exact_cap} found")


def minimal_initiator_subset(g: Graph, max_order: int = 6) -> tuple[int, list[int]]:
    """Smallest X' within the eligible set such that letting only X' initiate keeps the Marcello number.

    Exhaustive over subsets in increasing size with a labeled layered search.
    Returns ``(k, sorted X')``.
    """
    if g.n > max_order:
        raise OrderCapExceeded(f"initiator-subset search is capped at order {max_order}")
    k = marcello_number(g, SearchConfig(exact_cap=max(max_order, DEFAULT_EXACT_CAP))).value
    if k == 0 or k == INFINITE:
        return k, []
    xs = sorted(bits(eligible_mask(g)))
    full = g.full_mask

    def reaches(allowed: int) -> bool:
        layer = {g.adj}
        for _ in range(int(k)):
            nxt = set()
            for rows in layer:
                deg = [bin(r).count("1") for r in rows]
                xm = 0
                for v in range(g.n):
                    if 0 < deg[v] < g.n - 1 and allowed >> v & 1:
                        xm |= 1 << v
                out, _ = kernels.enumerate_outcomes(g.n, rows, deg, xm, True)
                nxt.update(out)
            if any(all(r | (1 << i) == full for i, r in enumerate(rows)) for rows in nxt):
                return True
            layer = nxt
        return False

    for size in range(1, len(xs) + 1):
        for subset in combinations(xs, size):
            allowed = sum(1 << v for v in subset)
            if reaches(allowed):
                return k, list(subset)
    return k, xs
