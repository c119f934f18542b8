"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerance.

Run with ``pytest tests/test_acceptance.py -v``; the lines are also
collected in the terminal summary.
"""

import subprocess
import sys
import time

import pytest

from marcello.canon import automorphisms, brute_force_form, canonical_form, proper_classes
from marcello.engine import ALL_VALID, degree_sum_bound, enumerate_labeled_outcomes, one_shot_completable
from marcello.experiments import (
    braced_iterations,
    claims_scan,
    conjecture_scan,
    p3k1_maximal_options,
    path_bound,
    petersen_plan,
)
from marcello.formats import emit_graph6, parse_graph6
from marcello.engine import parse_witness
from marcello.graph import (
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    join,
    null,
    path,
    petersen,
)
from marcello.solver import INFINITE, SearchConfig, Solver, verify_sequence

from test_experiments import simulate_pairwise
from test_formats import _all_labeled, _nx_graph6


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_1_fixed_values(acceptance):
    cases = [(path(2), 0)] + [(path(i), 1) for i in range(3, 7)] + [(path(7), 2), (cycle(3), 0)]
    cases += [(cycle(i), 1) for i in range(4, 8)]
    cases += [(complete(n), 0) for n in range(1, 8)]
    cases += [(null(n), INFINITE) for n in range(2, 8)]
    cases += [(disjoint_union(complete(n), complete(m)), 1) for n in range(2, 6) for m in range(2, n + 1)]
    cases += [(disjoint_union(complete(2), null(3)), 3)]
    bad, slowest = [], 0.0
    for g, want in cases:
        r, dt = timed(lambda: Solver().marcello_number(g))
        slowest = max(slowest, dt)
        ok = r.value == want and (not r.witness or verify_sequence(g, r.witness).ok)
        if not ok or dt >= 10:
            bad.append(f"{emit_graph6(g)}: {r.value} != {want} ({dt:.1f}s)")

    s = Solver()
    g = disjoint_union(complete(2), null(3))
    ix, dt = timed(lambda: s.marcello_index(g))
    layer1 = {canonical_form(disjoint_union(complete(3), null(2))), canonical_form(disjoint_union(path(4), null(1)))}
    layer2 = {
        canonical_form(join(complete(3), null(2))),
        canonical_form(join(complete(2), null(3))),
        canonical_form(complete(5).remove_edge(3, 4).remove_edge(2, 4)),
    }
    got1 = {c for c, w in ix.intermediates.items() if w == 2}
    got2 = {c for c, w in ix.intermediates.items() if w == 1}
    if ix.index != 5 or got1 != layer1 or got2 != layer2 or dt >= 10:
        bad.append(f"index {ix.index}, layers {sorted(map(str, got1))} / {sorted(map(str, got2))}")

    pg = petersen()
    replay = verify_sequence(pg, [petersen_plan()]).ok
    flow = bool(one_shot_completable(pg))
    if not (replay and flow):
        bad.append(f"petersen replay={replay} flow={flow}")

    ok = acceptance(
        "1", not bad,
        f"{len(cases)} fixed values, index 5 with named layers, Petersen schedule+flow; slowest {slowest:.2f}s"
        + (f"; mismatches: {bad}" if bad else ""),
    )
    assert ok


def test_criterion_2_complete_bipartite_table(acceptance):
    def run():
        rows = []
        for m in range(1, 8):
            for n in range(m, 8):
                g = complete_bipartite(m, n)
                got = False if g.is_complete() else bool(one_shot_completable(g))
                rows.append((m, n, got, n <= 2 * m + 1 and (m, n) != (1, 1)))
        return rows

    rows, dt = timed(run)
    bad = [(m, n) for m, n, got, want in rows if got != want]
    boundary = {(1, 3): True, (1, 4): False, (2, 5): True, (2, 6): False}
    bnd_ok = all(got == boundary[(m, n)] for m, n, got, _ in rows if (m, n) in boundary)
    ok = acceptance("2", not bad and bnd_ok and dt < 30,
                    f"{len(rows)} rows, {len(bad)} mismatches, boundary rows ok={bnd_ok}, {dt:.2f}s")
    assert ok


def test_criterion_3_degree_sum_and_options(acceptance):
    g = disjoint_union(path(3), null(1))
    b = degree_sum_bound(g)
    oneshot = bool(one_shot_completable(g))
    outs = enumerate_labeled_outcomes(g, ALL_VALID)
    none_complete = not any(h.is_complete() for h in outs)
    options, expected = p3k1_maximal_options()
    # both expected option graphs reached, as labeled maximal options modulo Aut(G)
    auts = automorphisms(g)
    key = lambda h: min(h.relabel(a).adj for a in auts)  # noqa: E731
    match = sorted(map(key, options)) == sorted(map(key, expected))
    classes = {canonical_form(h) for h in options}
    ok = acceptance(
        "3",
        b.holds and (b.lhs, b.rhs) == (6, 6) and not oneshot and none_complete and match and len(options) == 2,
        f"bound {b.lhs}/{b.rhs} holds={b.holds}, one_shot={oneshot}, {len(outs)} all-valid outcomes none complete,"
        f" {len(options)} maximal options = expected pair: {match} (isomorphism classes among them: {len(classes)})",
    )
    assert ok


def test_criterion_4_oracle_equivalences(acceptance):
    def run():
        bad = []
        s = Solver()
        top = {n: complete(n) for n in range(3, 6)}
        for n in range(3, 6):
            for g in proper_classes(n):
                brute = top[n] in enumerate_labeled_outcomes(g, ALL_VALID)
                if brute != bool(one_shot_completable(g)):
                    bad.append(("flow", emit_graph6(g)))
                sat = s.marcello_number(g).value
                allv = s.marcello_number(g, SearchConfig(restriction=ALL_VALID)).value
                if sat != allv:
                    bad.append(("restriction", emit_graph6(g)))
        for n in range(1, 6):
            seen_cf, seen_bf = {}, {}
            for g in _all_labeled(n):
                cf, bf = canonical_form(g), brute_force_form(g)
                if seen_cf.setdefault(cf, bf) != bf or seen_bf.setdefault(bf, cf) != cf:
                    bad.append(("canon", emit_graph6(g)))
        return bad

    bad, dt = timed(run)
    ok = acceptance("4", not bad and dt < 300,
                    f"flow = all-valid brute force, saturated = all-valid exact, canonical = brute force (n <= 5);"
                    f" {len(bad)} violations, {dt:.1f}s")
    assert ok


@pytest.fixture(scope="module")
def claims6():
    rep, dt = timed(lambda: claims_scan(6, solver=Solver()))
    return rep, dt


def test_criterion_5_claims_scan(acceptance, claims6):
    rep, dt = claims6
    others = [r for r in rep.failures if r.claim != "claim5-pendant"]
    suites = sorted(rep.summary())
    ok = acceptance("5", not others and dt < 600,
                    f"{len(rep.rows)} rows over {len(suites)} suites (n <= 6), {len(others)} violations outside"
                    f" claim5-pendant, {dt:.1f}s")
    assert ok


@pytest.mark.xfail(
    strict=True, reason="claim5-pendant is false at 2P_2 = K_2 ∪ K_2, a union of complete graphs with value 1"
)
def test_criterion_5_claim5_pendant_literal(acceptance, claims6):
    rep, _ = claims6
    bad = [r for r in rep.failures if r.claim == "claim5-pendant"]
    acceptance("5 (claim5-pendant literal)", not bad,
               "zero violations required; counterexamples: "
               + ", ".join(f"{r.instance} computed {r.computed}" for r in bad))
    assert not bad


def test_criterion_6_conjecture_scan(acceptance):
    rep, dt = timed(lambda: conjecture_scan(6, solver=Solver()))
    replay_ok = all(
        verify_sequence(parse_graph6(r.instance), parse_witness(r.witness)).ok for r in rep.findings
    )
    ok = acceptance("6", rep.ok and replay_ok and len(rep.rows) > 0,
                    f"{len(rep.rows)} instances, {len(rep.findings)} counterexamples (witnesses verify: {replay_ok}),"
                    f" {dt:.1f}s")
    assert ok


def test_criterion_7_braced_and_path_bound(acceptance):
    braced_bad = [ell for ell in range(2, 1001) if braced_iterations(ell).t != simulate_pairwise(ell)]
    worked = {14: 4, 9: 4, 2: 1, 8: 3, 11: 4}
    worked_ok = all(braced_iterations(ell).t == t for ell, t in worked.items())
    s = Solver()
    path_bad = []
    for n in range(7, 25):
        pb = path_bound(n)
        if not verify_sequence(path(n), pb.schedule).ok or len(pb.schedule) != pb.bound:
            path_bad.append(n)
        if n <= 8:
            exact = s.marcello_number(path(n), SearchConfig(exact_cap=8)).value
            if pb.bound < exact:
                path_bad.append(n)
    ok = acceptance("7", not braced_bad and worked_ok and not path_bad,
                    f"braced 2..1000 mismatches {len(braced_bad)}, worked values ok={worked_ok},"
                    f" path_bound 7..24 failures {path_bad}")
    assert ok


def test_criterion_8_cli_table_and_graph6(acceptance):
    proc = subprocess.run([sys.executable, "-m", "marcello.cli", "table"], capture_output=True, text=True)
    table_ok = proc.returncode == 0 and "0 failures" in proc.stdout
    mismatches = 0
    total = 0
    for n in range(1, 6):
        for g in _all_labeled(n):
            total += 1
            s = emit_graph6(g)
            if s != _nx_graph6(g) or emit_graph6(parse_graph6(s)) != s or parse_graph6(s) != g:
                mismatches += 1
    last = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr
    ok = acceptance("8", table_ok and not mismatches,
                    f"cli table exit {proc.returncode} ({last}); graph6 round-trip {total} labeled graphs,"
                    f" {mismatches} mismatches")
    assert ok
