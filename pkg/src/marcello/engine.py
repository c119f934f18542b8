"""Global iterations of Marcello's completion.

A global iteration fixes, at its start, the eligible set X (vertices of
degree strictly between 0 and n-1) and each vertex's budget (its degree at
that moment).  Initiators from X then take turns, each one adding at most
its budget of edges to vertices it is not adjacent to *at that moment*.
Receiving an edge never changes a budget or membership of X.  The
iteration stops early once the graph is complete.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from . import kernels
from .canon import CanonicalForm, canonical_form
from .graph import Edge, Graph, bits, popcount

ALL_VALID = "all"
SATURATED = "saturated"
RESTRICTIONS = (SATURATED, ALL_VALID)

MAX_SATURATED_ORDER = 8
MAX_ALL_VALID_ORDER = 6


class EngineError(ValueError):
    """Precondition breach for an engine operation."""


@dataclass(frozen=True)
class LocalStep:
    initiator: int
    added: tuple[int, ...] = ()

    def edges(self) -> list[Edge]:
        return [(min(self.initiator, t), max(self.initiator, t)) for t in self.added]


@dataclass(frozen=True)
class GlobalPlan:
    steps: tuple[LocalStep, ...] = ()

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, Iterable[int]]]) -> "GlobalPlan":
        return cls(tuple(LocalStep(v, tuple(ts)) for v, ts in pairs))

    def edges(self) -> list[Edge]:
        return [e for s in self.steps for e in s.edges()]

    def relabel(self, perm: Sequence[int]) -> "GlobalPlan":
        return GlobalPlan(tuple(LocalStep(perm[s.initiator], tuple(sorted(perm[t] for t in s.added))) for s in self.steps))

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Violation:
    step: int
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"step {self.step}: {self.rule} ({self.detail})"


@dataclass
class PlanCheck:
    """Outcome of :func:`validate_plan`; truthy iff the plan is valid."""

    violation: Optional[Violation] = None
    result: Optional[Graph] = None
    trace: list[Graph] = field(default_factory=list)
    unreachable_steps: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.ok


class InvalidPlanError(EngineError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


def eligible_vertices(g: Graph) -> frozenset[int]:
    return frozenset(v for v in range(g.n) if 0 < g.degree(v) < g.n - 1)


def eligible_mask(g: Graph) -> int:
    m = 0
    for v in range(g.n):
        if 0 < popcount(g.adj[v]) < g.n - 1:
            m |= 1 << v
    return m


def _is_complete(rows: Sequence[int], full: int) -> bool:
    return all(r | (1 << i) == full for i, r in enumerate(rows))


def validate_plan(g: Graph, plan: GlobalPlan) -> PlanCheck:
    """Replay ``plan`` on ``g`` and report the first rule it breaks.

    Steps after the graph becomes complete are listed as unreachable rather
    than checked.
    """
    n = g.n
    full = g.full_mask
    budget = g.degrees()
    eligible = eligible_mask(g)
    rows = list(g.adj)
    check = PlanCheck()
    used = set()
    done = _is_complete(rows, full)
    for idx, step in enumerate(plan.steps):
        if done:
            check.unreachable_steps.append(idx)
            continue
        v = step.initiator
        if not 0 <= v < n:
            check.violation = Violation(idx, "vertex-out-of-range", f"initiator {v}")
            return check
        if v in used:
            check.violation = Violation(idx, "duplicate-initiator", f"vertex {v} already initiated")
            return check
        used.add(v)
        if not eligible >> v & 1:
            check.violation = Violation(
                idx, "initiator-not-eligible", f"vertex {v} has starting degree {budget[v]} outside (0, {n - 1})"
            )
            return check
        if len(set(step.added)) != len(step.added):
            check.violation = Violation(idx, "duplicate-target", f"repeated target for {v}")
            return check
        if len(step.added) > budget[v]:
            check.violation = Violation(
                idx, "budget-exceeded", f"vertex {v} adds {len(step.added)} edges with budget {budget[v]}"
            )
            return check
        for t in step.added:
            if not 0 <= t < n or t == v:
                check.violation = Violation(idx, "vertex-out-of-range", f"target {t} of {v}")
                return check
            if rows[v] >> t & 1:
                check.violation = Violation(idx, "target-adjacent", f"{v} and {t} are already adjacent")
                return check
        for t in step.added:
            rows[v] |= 1 << t
            rows[t] |= 1 << v
        check.trace.append(Graph(n, tuple(rows)))
        done = _is_complete(rows, full)
    check.result = Graph(n, tuple(rows))
    return check


def apply_plan(g: Graph, plan: GlobalPlan) -> tuple[Graph, list[Graph]]:
    """Apply a valid plan; returns the resulting graph and the graphs after each step."""
    check = validate_plan(g, plan)
    if not check.ok:
        raise InvalidPlanError(check.violation)
    return check.result, check.trace


def _require_proper(g: Graph) -> None:
    if g.is_complete():
        raise EngineError("graph is already complete")
    if g.is_null():
        raise EngineError("graph has no edges")


POLICIES = ("ascending", "descending", "random", "explicit")


def greedy_plan(
    g: Graph, policy: str = "ascending", seed: Optional[int] = None, order: Optional[Sequence[int]] = None
) -> GlobalPlan:
    """A plan in which every initiator adds as many edges as it can.

    Initiators are taken by ascending or descending starting degree (ties by
    vertex id), in a seeded random order, or in an explicit ``order``.
    Targets are the lowest-numbered current non-neighbours.
    """
    _require_proper(g)
    xs = sorted(eligible_vertices(g))
    deg = g.degrees()
    if policy == "ascending":
        seq = sorted(xs, key=lambda v: (deg[v], v))
    elif policy == "descending":
        seq = sorted(xs, key=lambda v: (-deg[v], v))
    elif policy == "random":
        seq = list(xs)
        random.Random(seed).shuffle(seq)
    elif policy == "explicit":
        if order is None:
            raise EngineError("explicit policy needs an order")
        seq = [v for v in order if v in set(xs)]
    else:
        raise EngineError(f"unknown policy {policy!r}")
    rows = list(g.adj)
    full = g.full_mask
    steps = []
    for v in seq:
        if _is_complete(rows, full):
            break
        nn = full & ~rows[v] & ~(1 << v)
        targets = list(bits(nn))[: deg[v]]
        for t in targets:
            rows[v] |= 1 << t
            rows[t] |= 1 << v
        steps.append(LocalStep(v, tuple(targets)))
    return GlobalPlan(tuple(steps))


@dataclass
class Blocking:
    """Missing edges whose admissible initiators lack the budget to cover them."""

    edges: list[Edge]
    vertices: list[int]
    supply: int

    @property
    def demand(self) -> int:
        return len(self.edges)

    def explain(self) -> str:
        vs = ",".join(map(str, self.vertices)) or "none"
        return (
            f"{self.demand} missing edge(s) can only be initiated by vertices {{{vs}}}"
            f" whose total budget is {self.supply} < {self.demand}"
        )


@dataclass
class OneShot:
    completable: bool
    assignment: Optional[dict[Edge, int]] = None
    blocking: Optional[Blocking] = None

    def __bool__(self) -> bool:
        return self.completable


def one_shot_completable(g: Graph) -> OneShot:
    """Decide whether one global iteration can complete ``g``.

    Equivalent to orienting each missing edge towards an endpoint of positive
    degree so that no vertex receives more than its degree; solved as a
    bipartite max-flow (missing edges on one side, vertices on the other).
    """
    _require_proper(g)
    missing = g.non_edges()
    deg = g.degrees()
    m, n = len(missing), g.n
    src, sink = 0, m + n + 1
    big = m + 1
    rows, cols, caps = [], [], []
    for i, (u, v) in enumerate(missing):
        rows.append(src), cols.append(1 + i), caps.append(1)
        for w in (u, v):
            if deg[w] > 0:
                rows.append(1 + i), cols.append(1 + m + w), caps.append(big)
    for w in range(n):
        if deg[w] > 0:
            rows.append(1 + m + w), cols.append(sink), caps.append(deg[w])
    size = m + n + 2
    cap = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(size, size))
    res = maximum_flow(cap, src, sink)
    flow = res.flow.toarray()
    if res.flow_value == m:
        assignment = {}
        for i, (u, v) in enumerate(missing):
            assignment[(u, v)] = u if flow[1 + i, 1 + m + u] > 0 else v
        return OneShot(True, assignment=assignment)
    residual = cap.toarray() - flow
    seen = np.zeros(size, dtype=bool)
    seen[src] = True
    stack = [src]
    while stack:
        x = stack.pop()
        for y in np.nonzero(residual[x] > 0)[0]:
            if not seen[y]:
                seen[y] = True
                stack.append(int(y))
    edges = [missing[i] for i in range(m) if seen[1 + i]]
    verts = [w for w in range(n) if seen[1 + m + w]]
    return OneShot(False, blocking=Blocking(edges, verts, sum(deg[w] for w in verts)))


def assignment_plan(g: Graph, assignment: Mapping[Edge, int], saturate: bool = False) -> GlobalPlan:
    """Turn an edge-to-initiator assignment into a completing plan.

    Initiators run in ascending id order and add their still-missing assigned
    edges; with ``saturate`` they then pad with lowest-numbered non-neighbours
    up to their budget.
    """
    deg = g.degrees()
    owned: dict[int, list[int]] = {}
    for (u, v), w in sorted(assignment.items()):
        owned.setdefault(w, []).append(v if w == u else u)
    rows = list(g.adj)
    full = g.full_mask
    steps = []
    for w in sorted(owned if not saturate else eligible_vertices(g)):
        if _is_complete(rows, full):
            break
        targets = [t for t in owned.get(w, []) if not rows[w] >> t & 1]
        if saturate:
            for t in bits(full & ~rows[w] & ~(1 << w)):
                if len(targets) >= deg[w]:
                    break
                if t not in targets:
                    targets.append(t)
        for t in targets:
            rows[w] |= 1 << t
            rows[t] |= 1 << w
        steps.append(LocalStep(w, tuple(sorted(targets))))
    return GlobalPlan(tuple(steps))


def enumerate_labeled_outcomes(g: Graph, restriction: str = SATURATED) -> dict[Graph, GlobalPlan]:
    """Every graph one global iteration can produce, with one plan reaching each."""
    if restriction not in RESTRICTIONS:
        raise EngineError(f"unknown restriction {restriction!r}")
    cap = MAX_SATURATED_ORDER if restriction == SATURATED else MAX_ALL_VALID_ORDER
    if g.n > cap:
        raise EngineError(f"outcome enumeration ({restriction}) is capped at order {cap}")
    if g.is_null():
        raise EngineError("graph has no edges")
    if g.is_complete():
        return {}
    out, _ = kernels.enumerate_outcomes(g.n, g.adj, g.degrees(), eligible_mask(g), restriction == SATURATED)
    return {
        Graph(g.n, tuple(rows)): GlobalPlan(tuple(LocalStep(v, tuple(bits(s))) for v, s in plan))
        for rows, plan in out.items()
    }


def enumerate_outcomes(g: Graph, restriction: str = SATURATED) -> dict[CanonicalForm, Graph]:
    """Isomorphism classes reachable in one global iteration."""
    classes: dict[CanonicalForm, Graph] = {}
    for h in enumerate_labeled_outcomes(g, restriction):
        cf = canonical_form(h)
        if cf not in classes:
            classes[cf] = h
    return dict(sorted(classes.items()))


@dataclass(frozen=True)
class DegreeSumBound:
    holds: bool
    lhs: int
    rhs: int


def degree_sum_bound(g: Graph) -> DegreeSumBound:
    """Compare the eligible degree sum plus size against C(n, 2).  This is a
    necessary condition for completing in one iteration."""
    if g.n < 3:
        raise EngineError("degree-sum bound needs order >= 3")
    _require_proper(g)
    lhs = sum(d for d in g.degrees() if 0 < d < g.n - 1) + g.size
    rhs = g.n * (g.n - 1) // 2
    return DegreeSumBound(lhs >= rhs, lhs, rhs)


degree_sum_bound_holds = degree_sum_bound


# -- plan text format ----------------------------------------------------


def emit_plan(plan: GlobalPlan) -> str:
    return "".join(f"{s.initiator}: {','.join(map(str, s.added))}\n" for s in plan.steps)


def emit_witness(plans: Sequence[GlobalPlan]) -> str:
    """One block per global iteration, each opened by a comment line."""
    blocks = [f"# iteration {i + 1}\n{emit_plan(p)}" for i, p in enumerate(plans)]
    return "\n".join(blocks)


class PlanFormatError(ValueError):
    pass


def parse_witness(text: str) -> list[GlobalPlan]:
    """Parse blank-line-separated blocks of ``initiator: t,t,...`` lines."""
    plans = []
    current: Optional[list[LocalStep]] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            if current is not None:
                plans.append(GlobalPlan(tuple(current)))
                current = None
            continue
        if current is None:
            current = []
        if line.startswith("#"):
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise PlanFormatError(f"line {lineno}: expected 'initiator: targets'")
        try:
            v = int(head)
            targets = tuple(int(t) for t in tail.replace(" ", "").split(",") if t)
        except ValueError as exc:
            raise PlanFormatError(f"line {lineno}: {exc}") from exc
        current.append(LocalStep(v, targets))
    if current is not None:
        plans.append(GlobalPlan(tuple(current)))
    return plans


def parse_plan(text: str) -> GlobalPlan:
    plans = parse_witness(text)
    if len(plans) != 1:
        raise PlanFormatError(f"expected a single plan block, found {len(plans)}")
    return plans[0]
