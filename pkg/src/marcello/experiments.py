"""Reproduction of the fixed results, exhaustive claim and conjecture scans,
pairwise-summation helpers for paths, and reveal covers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .canon import CanonicalForm, automorphisms, canonical_form, enumerate_graph_classes, proper_classes
from .engine import (
    ALL_VALID,
    SATURATED,
    GlobalPlan,
    LocalStep,
    apply_plan,
    assignment_plan,
    degree_sum_bound,
    emit_witness,
    enumerate_labeled_outcomes,
    one_shot_completable,
)
from .formats import emit_graph6
from .graph import (
    Graph,
    bits,
    complement,
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    graph_from_edges,
    join,
    null,
    path,
    pearl,
    petersen,
    star,
    wheel,
)
from .solver import (
    INFINITE,
    SearchConfig,
    Solver,
    counting_lower_bound,
    default_solver,
    min_join_order,
    min_union_order,
    verify_sequence,
)


def fmt(value) -> str:
    return "inf" if value == INFINITE else str(int(value)) if isinstance(value, (int, float)) else str(value)


@dataclass
class CheckRow:
    claim: str
    instance: str
    expected: str
    computed: str
    passed: bool
    witness: Optional[str] = None
    finding: bool = False

    @property
    def status(self) -> str:
        if self.finding:
            return "finding"
        return "pass" if self.passed else "fail"

    def record(self) -> str:
        fields = [
            ("claim", self.claim),
            ("instance", self.instance),
            ("expected", self.expected),
            ("computed", self.computed),
            ("status", self.status),
        ]
        line = "\t".join(f"{k}={v}" for k, v in fields)
        if self.witness:
            line += "\twitness=" + self.witness.strip().replace("\n", "|")
        return line


@dataclass
class CheckReport:
    title: str
    rows: list[CheckRow] = field(default_factory=list)

    def add(self, claim, instance, expected, computed, passed=None, witness=None, finding=False) -> CheckRow:
        if isinstance(instance, Graph):
            instance = emit_graph6(instance)
        expected, computed = fmt(expected), fmt(computed)
        if passed is None:
            passed = expected == computed
        row = CheckRow(claim, instance, expected, computed, bool(passed), witness, finding)
        self.rows.append(row)
        return row

    @property
    def failures(self) -> list[CheckRow]:
        return [r for r in self.rows if not r.passed and not r.finding]

    @property
    def findings(self) -> list[CheckRow]:
        return [r for r in self.rows if r.finding]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.rows:
            counts = out.setdefault(r.claim, {"pass": 0, "fail": 0, "finding": 0})
            counts[r.status] += 1
        return out

    def records(self) -> str:
        return "".join(r.record() + "\n" for r in self.rows)

    def table(self) -> str:
        lines = [self.title, "=" * len(self.title)]
        widths = [24, 14, 10, 10]
        header = ["claim", "instance", "expected", "computed", "status"]
        lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths + [0])))
        for r in self.rows:
            cells = [r.claim, r.instance, r.expected, r.computed, r.status]
            lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths + [0])).rstrip())
        lines.append("")
        for claim, c in self.summary().items():
            lines.append(f"{claim}: {c['pass']} pass, {c['fail']} fail, {c['finding']} finding")
        lines.append(f"total: {len(self.rows)} rows, {len(self.failures)} failures, {len(self.findings)} findings")
        return "\n".join(lines) + "\n"


# -- pairwise summation -----------------------------------------------------


@dataclass(frozen=True)
class BracedIterations:
    t: int
    ex: int
    k: int


def braced_iterations(length: int) -> BracedIterations:
    """Rounds of pairwise summation for ``length`` terms: ``t = ex + 1`` with
    ``2**ex < length <= 2**(ex+1)`` and ``k = length - 2**ex``."""
    if length < 2:
        raise ValueError("need at least two terms")
    ex = (length - 1).bit_length() - 1
    return BracedIterations(ex + 1, ex, length - 2 ** ex)


# One-iteration schedule completing P_6 (0-indexed).
P6_COMPLETING_PLAN = GlobalPlan.from_pairs([(1, (3, 5)), (3, (0, 5)), (2, (4, 5)), (4, (0, 1)), (5, (0,)), (0, (2,))])
# A valid P_6 schedule that leaves a non-complete graph of size 13.
P6_STALLING_PLAN = GlobalPlan.from_pairs([(0, (3,)), (1, (3, 4)), (2, (4, 5)), (3, (5,)), (4, (0,)), (5, (1,))])


def petersen_plan() -> GlobalPlan:
    """The explicit one-iteration schedule completing the Petersen graph."""
    steps = []
    for i in range(5):
        steps.append((i, ((i + 2) % 5, 5 + (i + 1) % 5, 5 + (i + 2) % 5)))
    for i in range(5):
        steps.append((5 + i, (5 + (i + 1) % 5, (i + 1) % 5, (i + 2) % 5)))
    return GlobalPlan.from_pairs(steps)


@dataclass
class PathBound:
    n: int
    parts: list[int]
    bound: int
    literal_ell: int
    literal_bound: int
    schedule: list[GlobalPlan]


def _offset(plan: GlobalPlan, base: int) -> GlobalPlan:
    return GlobalPlan(tuple(LocalStep(s.initiator + base, tuple(t + base for t in s.added)) for s in plan.steps))


def path_bound(n: int) -> PathBound:
    """Upper bound for P_n from pearled blocks of P_6.

    One initialization iteration completes every block in isolation; each
    later iteration merges consecutive pairs of complete blocks.
    """
    if n < 7:
        raise ValueError("path_bound needs n >= 7")
    parts = [6] * (n // 6) + ([n % 6] if n % 6 else [])
    g = path(n)
    init_steps: list[LocalStep] = []
    base = 0
    for size in parts:
        if size == 6:
            local = P6_COMPLETING_PLAN
        elif size >= 3:
            p = path(size)
            local = assignment_plan(p, one_shot_completable(p).assignment)
        else:
            local = GlobalPlan()
        init_steps.extend(_offset(local, base).steps)
        base += size
    schedule = [GlobalPlan(tuple(init_steps))]
    cur, _ = apply_plan(g, schedule[0])
    blocks = []
    base = 0
    for size in parts:
        blocks.append(list(range(base, base + size)))
        base += size
    while len(blocks) > 1:
        steps: list[LocalStep] = []
        merged = []
        for i in range(0, len(blocks) - 1, 2):
            verts = blocks[i] + blocks[i + 1]
            h = cur.induced(verts)
            local = assignment_plan(h, one_shot_completable(h).assignment)
            steps.extend(LocalStep(verts[s.initiator], tuple(verts[t] for t in s.added)) for s in local.steps)
            merged.append(verts)
        if len(blocks) % 2:
            merged.append(blocks[-1])
        plan = GlobalPlan(tuple(steps))
        cur, _ = apply_plan(cur, plan)
        schedule.append(plan)
        blocks = merged
    lit = braced_iterations(n)
    parts_t = braced_iterations(len(parts)).t
    return PathBound(n, parts, parts_t + 1, n, lit.ex + 2, schedule)


# -- fixed results ----------------------------------------------------------


def p3k1_maximal_options() -> tuple[list[Graph], list[Graph]]:
    """Maximal all-valid outcomes of P_3 ∪ K_1 up to automorphism, and the two expected option graphs."""
    g = disjoint_union(path(3), null(1))
    outs = list(enumerate_labeled_outcomes(g, ALL_VALID))
    maximal = [h for h in outs if not any(h != o and h.is_spanning_subgraph_of(o) for o in outs)]
    auts = automorphisms(g)
    reps: dict[tuple, Graph] = {}
    for h in maximal:
        key = min(h.relabel(a).adj for a in auts)
        reps.setdefault(key, h)
    figs = [
        graph_from_edges(4, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)]),
        graph_from_edges(4, [(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)]),
    ]
    return sorted(reps.values(), key=lambda h: h.adj), figs


def _orbit_key(h: Graph, auts) -> tuple:
    return min(h.relabel(a).adj for a in auts)


def paper_table(solver: Optional[Solver] = None) -> CheckReport:
    """Every fixed-instance result: paths, cycles, extremes, unions, K_{m,n},
    the P_3 ∪ K_1 options, the Marcello index example and the Petersen graph."""
    s = solver or default_solver()
    rep = CheckReport("Marcello's completion: fixed results")

    def number(claim, g, expected):
        r = s.marcello_number(g)
        rep.add(claim, g, expected, r.value, witness=emit_witness(r.witness) if r.witness else None)

    number("lemma1", path(2), 0)
    for i in range(3, 7):
        number("lemma1", path(i), 1)
    number("lemma1", path(7), 2)
    number("lemma2", cycle(3), 0)
    for i in range(4, 8):
        number("lemma2", cycle(i), 1)
    for n in range(1, 8):
        number("complete", complete(n), 0)
    for n in range(2, 8):
        number("null", null(n), INFINITE)
    for n in range(2, 6):
        for m in range(2, n + 1):
            number("thm2", disjoint_union(complete(n), complete(m)), 1)
    for n in range(1, 6):
        for m in range(1, n + 1):
            if n + m >= 3:
                number("cor4", pearl([complete(n), complete(m)]), 1)
    for m in range(1, 8):
        for n in range(m, 8):
            g = complete_bipartite(m, n)
            expected = n <= 2 * m + 1 and (m, n) != (1, 1)
            computed = False if g.is_complete() else bool(one_shot_completable(g))
            rep.add("prop2", g, "yes" if expected else "no", "yes" if computed else "no")

    p6 = path(6)
    chk = verify_sequence(p6, [P6_COMPLETING_PLAN])
    rep.add("p6-schedule", p6, "complete", "complete" if chk.ok else "not-complete", witness=emit_witness([P6_COMPLETING_PLAN]))
    g3, _ = apply_plan(p6, P6_STALLING_PLAN)
    rep.add("p6-stalling-schedule", p6, "size=13,complete=no", f"size={g3.size},complete={'yes' if g3.is_complete() else 'no'}")

    f4 = disjoint_union(path(3), null(1))
    b = degree_sum_bound(f4)
    rep.add("thm1-p3k1", f4, "holds,6,6", f"{'holds' if b.holds else 'fails'},{b.lhs},{b.rhs}")
    rep.add("thm1-p3k1-oneshot", f4, "no", "yes" if one_shot_completable(f4) else "no")
    options, figs = p3k1_maximal_options()
    auts = automorphisms(f4)
    got = sorted(_orbit_key(h, auts) for h in options)
    want = sorted(_orbit_key(h, auts) for h in figs)
    rep.add("p3k1-options", f4, "2 options = expected pair", f"{len(options)} options" + (
        " = expected pair" if got == want else ""))
    rep.add("p3k1-none-complete", f4, "none complete", "none complete" if not any(h.is_complete() for h in options)
            else "some complete")
    b7 = degree_sum_bound(path(7))
    rep.add("cor1-p7", path(7), "fails,18,21", f"{'holds' if b7.holds else 'fails'},{b7.lhs},{b7.rhs}")

    g = disjoint_union(complete(2), null(3))
    number("sec4-number", g, 3)
    ix = s.marcello_index(g)
    rep.add("sec4-index", g, 5, ix.index)
    layer1 = {canonical_form(disjoint_union(complete(3), null(2))), canonical_form(disjoint_union(path(4), null(1)))}
    layer2 = {
        canonical_form(join(complete(3), null(2))),
        canonical_form(join(complete(2), null(3))),
        canonical_form(complement(disjoint_union(path(3), null(2)))),
    }
    got1 = {c for c, v in ix.intermediates.items() if v == 2}
    got2 = {c for c, v in ix.intermediates.items() if v == 1}
    rep.add("sec4-layer1", g, "K3+2K1 | P4+K1 (w=2)", "match" if got1 == layer1 else "mismatch",
            passed=got1 == layer1)
    rep.add("sec4-layer2", g, "K3#2K1 | K2#3K1 | co(P3+2K1) (w=1)", "match" if got2 == layer2 else "mismatch",
            passed=got2 == layer2)

    pg = petersen()
    pchk = verify_sequence(pg, [petersen_plan()])
    rep.add("petersen-schedule", pg, "complete", "complete" if pchk.ok else pchk.failure,
            witness=emit_witness([petersen_plan()]))
    rep.add("petersen-flow", pg, "yes", "yes" if one_shot_completable(pg) else "no")
    number("petersen", pg, 1)

    for n in range(3, 7):
        c = s.marcello_number(cycle(n)).value
        st = s.marcello_number(star(n)).value
        w = s.marcello_number(wheel(n)).value
        rep.add("claim-b-star", star(n), f"<= {fmt(c + 1)}", st, passed=st <= c + 1)
        rep.add("claim-c-wheel", wheel(n), f"<= {fmt(c)}", w, passed=w <= c)

    for m in range(2, 6):
        n = min_join_order(m)
        ok = s.marcello_number(join(complete(n), null(m))).value == 1 and (
            n == 1 or s.marcello_number(join(complete(n - 1), null(m))).value != 1
        )
        rep.add("thm3-min-join", f"N_{m}", "exact solver agrees", f"n={n}", passed=ok)
    for m in range(2, 5):
        n = min_union_order(m, solver=s)
        ok = s.marcello_number(disjoint_union(complete(n), null(m))).value >= 2
        rep.add("thm4-min-union", f"N_{m}", "exact search", f"n={n}", passed=ok)

    ms = (1, 5, 20, 59)
    lbs = [counting_lower_bound(disjoint_union(path(5), null(m))) for m in ms]
    grows = lbs == sorted(lbs) and lbs[-1] > lbs[0]
    rep.add("divergence-lower", "P5+N_m, m=" + ",".join(map(str, ms)), "nondecreasing, unbounded",
            ",".join(map(str, lbs)), passed=grows)
    return rep


# -- exhaustive scans ----------------------------------------------------------


def is_hamiltonian(g: Graph) -> bool:
    n = g.n
    if n < 3:
        return False
    # reach[mask]: endpoints of paths from vertex 0 covering exactly mask
    reach = [0] * (1 << n)
    reach[1] = 1
    for mask in range(1, 1 << n, 2):
        for v in bits(reach[mask]):
            for u in bits(g.adj[v] & ~mask):
                reach[mask | (1 << u)] |= 1 << u
    return bool(reach[(1 << n) - 1] & g.adj[0])


def _is_star(g: Graph) -> bool:
    return g.n >= 2 and canonical_form(g) == canonical_form(star(g.n - 1))


def claims_scan(n_max: int = 5, solver: Optional[Solver] = None, check_solver: Optional[Solver] = None) -> CheckReport:
    """Exhaustive checks of the claims, lemmas and corollaries over all classes of order <= ``n_max``.

    Suites that enumerate all-valid plans stop at order 5.
    """
    if n_max > 6:
        raise ValueError("claims_scan supports n_max <= 6")
    s = solver or default_solver()
    indep = check_solver or Solver()
    rep = CheckReport(f"claims scan, orders <= {n_max}")
    w = lambda g: s.marcello_number(g).value  # noqa: E731
    brute = min(n_max, 5)

    for n in range(3, n_max + 1):
        for g in proper_classes(n):
            wg = w(g)
            oneshot = bool(one_shot_completable(g))
            if n <= brute:
                top = canonical_form(complete(n))
                bf = top in s.outcomes(canonical_form(g), ALL_VALID)
                rep.add("flow-oracle", g, "yes" if bf else "no", "yes" if oneshot else "no")
                wa = s.marcello_number(g, SearchConfig(restriction=ALL_VALID)).value
                rep.add("restriction-equiv", g, wa, wg)
                sat = list(enumerate_labeled_outcomes(g, SATURATED))
                allv = enumerate_labeled_outcomes(g, ALL_VALID)
                absorbed = all(any(a.is_spanning_subgraph_of(o) for o in sat) for a in allv)
                rep.add("absorption", g, "absorbed", "absorbed" if absorbed else "not-absorbed")
            bound = degree_sum_bound(g)
            rep.add("thm1", g, "oneshot=>bound", f"oneshot={'yes' if oneshot else 'no'},bound={'yes' if bound.holds else 'no'}",
                    passed=not oneshot or bound.holds)
            lb = counting_lower_bound(g)
            rep.add("lower-bound", g, f"<= {fmt(wg)}", lb, passed=lb <= wg)
            outs = s.outcomes(canonical_form(g))
            if g.is_connected():
                conn = all(c.graph().is_connected() for c in outs)
                rep.add("lemma3a", g, "connected", "connected" if conn else "disconnected")
            if not _is_star(g):
                hit = any(_is_star(c.graph()) for c in outs)
                rep.add("lemma3b", g, "no star", "star" if hit else "no star")
            if len(g.isolated_vertices()) >= 2:
                rep.add("claim4", g, ">= 2", wg, passed=wg >= 2)
                rep.add("claim4-engine", g, "no", "yes" if oneshot else "no")
            if len(g.pendant_vertices()) >= 4:
                rep.add("claim5-pendant", g, ">= 2", wg, passed=wg >= 2)
            vstar = g.full_degree_vertices()
            if vstar:
                rest = [v for v in range(n) if v not in vstar]
                if rest:
                    h = g.induced(rest)
                    if not h.is_complete() and not h.is_null():
                        wh = w(h)
                        rep.add("claim3", g, f"<= {fmt(wh)}", wg, passed=wg <= wh)
            for (u, v) in g.edges():
                h = g.remove_edge(u, v)
                wh = w(h)
                rep.add("claim2", g, f"<= {fmt(wh)} (minus {u}-{v})", wg, passed=wg <= wh)
            if is_hamiltonian(g):
                wc = w(cycle(n))
                rep.add("claim-a-hamiltonian", g, f"<= {fmt(wc)}", wg, passed=wg <= wc)
            ix = s.marcello_index(g)
            rep.add("index-bound", g, f">= {int(wg) - 1}", ix.index, passed=ix.index >= wg - 1)
            bad = [c for c, val in ix.intermediates.items() if indep.marcello_number(c.graph()).value != val]
            rep.add("claim1-layers", g, "all layers exact", "ok" if not bad else f"{len(bad)} off",
                    passed=not bad, witness=None if not bad else bad[0].graph6)

    small = [g for k in range(1, n_max) for g in enumerate_graph_classes(k)]

    def conv(g: Graph):
        return 0 if g.is_complete() else w(g)

    for i, a in enumerate(small):
        for b in small[i:]:
            if a.n + b.n > n_max:
                continue
            u = disjoint_union(a, b)
            if not u.is_complete() and not u.is_null():
                bound = max(conv(a) + 1, conv(b) + 1)
                rep.add("cor2-union", u, f"<= {fmt(bound)}", w(u), passed=w(u) <= bound)
            j = join(a, b)
            if not j.is_complete() and not j.is_null():
                bound = max(conv(a), conv(b))
                rep.add("cor3-join", j, f"<= {fmt(bound)}", w(j), passed=w(j) <= bound)
    return rep


def conjecture_scan(n_max: int = 6, solver: Optional[Solver] = None) -> CheckReport:
    """Connected non-complete classes with at most one pendant vertex: degree-sum
    strictly above C(n,2) should give 1, equality should give 1 or 2."""
    if n_max > 7:
        raise ValueError("conjecture_scan supports n_max <= 7")
    s = solver or default_solver()
    rep = CheckReport(f"conjecture scan, orders 3..{n_max}")
    for n in range(3, n_max + 1):
        for g in proper_classes(n):
            if not g.is_connected() or len(g.pendant_vertices()) > 1:
                continue
            b = degree_sum_bound(g)
            if b.lhs > b.rhs:
                one = bool(one_shot_completable(g))
                row = rep.add("conjecture-a", g, 1, 1 if one else ">1", passed=one)
                if not one:
                    r = s.marcello_number(g)
                    row.computed = fmt(r.value)
                    row.finding = True
                    row.witness = emit_witness(r.witness)
            elif b.lhs == b.rhs:
                r = s.marcello_number(g)
                ok = r.value in (1, 2)
                rep.add("conjecture-b", g, "1|2", r.value, passed=ok, finding=not ok,
                        witness=emit_witness(r.witness))
    return rep


@dataclass
class RevealCover:
    n: int
    restriction: str
    classes: list[CanonicalForm]
    revealed: dict[CanonicalForm, dict[CanonicalForm, int]]
    cover: list[CanonicalForm]

    @property
    def q(self) -> int:
        return len(self.classes)

    def covers(self, chosen: Iterable[CanonicalForm]) -> bool:
        got = set()
        for c in chosen:
            got |= set(self.revealed[c])
        return got >= set(self.classes)

    def uncovered(self, chosen: Iterable[CanonicalForm]) -> set[CanonicalForm]:
        got = set()
        for c in chosen:
            got |= set(self.revealed[c])
        return set(self.classes) - got

    def coverage_count(self, chosen: Iterable[CanonicalForm]) -> int:
        """``t`` plus the sum of the chosen classes' Marcello indices."""
        chosen = list(chosen)
        return len(chosen) + sum(len(self.revealed[c]) - 1 for c in chosen)


def reveal_cover(n: int, restriction: str = SATURATED, solver: Optional[Solver] = None) -> RevealCover:
    """Greedy set of classes whose minimal sequences reveal every proper class of order ``n``."""
    if n > 6:
        raise ValueError("reveal_cover supports n <= 6")
    s = solver or default_solver()
    cfg = SearchConfig(restriction=restriction)
    classes = [canonical_form(g) for g in proper_classes(n)]
    revealed = {}
    for c in classes:
        ix = s.marcello_index(c.graph(), cfg)
        revealed[c] = {c: ix.marcello_number, **ix.intermediates}
    remaining = set(classes)
    cover = []
    while remaining:
        best = max(sorted(classes), key=lambda c: len(remaining & set(revealed[c])))
        cover.append(best)
        remaining -= set(revealed[best])
    return RevealCover(n, restriction, classes, revealed, cover)


REFERENCE_COVER_N4 = (
    disjoint_union(complete(2), null(2)),
    disjoint_union(path(3), null(1)),
    disjoint_union(complete(2), complete(2)),
    star(3),
)
