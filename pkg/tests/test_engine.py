import itertools

import pytest
from hypothesis import given, settings, strategies as st

from marcello.canon import canonical_form, proper_classes
from marcello.engine import (
    ALL_VALID,
    SATURATED,
    EngineError,
    GlobalPlan,
    InvalidPlanError,
    LocalStep,
    PlanFormatError,
    apply_plan,
    assignment_plan,
    degree_sum_bound,
    eligible_vertices,
    emit_witness,
    enumerate_labeled_outcomes,
    enumerate_outcomes,
    greedy_plan,
    one_shot_completable,
    parse_plan,
    parse_witness,
    validate_plan,
)
from marcello.graph import (
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    graph_from_edges,
    join,
    null,
    path,
    petersen,
    star,
)

from test_graph import graphs


def proper(g):
    return not g.is_complete() and not g.is_null()


def naive_outcomes(g, saturated):
    """Outcome set by direct simulation over orders and target subsets."""
    n, budget, xs = g.n, g.degrees(), sorted(eligible_vertices(g))
    out = set()

    def go(edges, remaining):
        cur = graph_from_edges(n, edges)
        live = [v for v in remaining if cur.degree(v) < n - 1]
        if cur.is_complete() or not live:
            out.add(cur)
            return
        for v in live:
            nn = [u for u in range(n) if u != v and not cur.has_edge(u, v)]
            cap = min(budget[v], len(nn))
            sizes = [cap] if saturated else range(cap + 1)
            rest = [u for u in remaining if u != v]
            for k in sizes:
                for ts in itertools.combinations(nn, k):
                    go(edges | {(min(v, t), max(v, t)) for t in ts}, rest)

    go(frozenset(g.edges()), xs)
    return out


def test_eligible_set():
    g = disjoint_union(star(3), null(1))
    assert eligible_vertices(g) == frozenset({0, 1, 2, 3})
    assert eligible_vertices(join(complete(1), path(4))) == frozenset({1, 2, 3, 4})


def test_completing_schedule_on_p6():
    plan = GlobalPlan.from_pairs([(1, (3, 5)), (3, (0, 5)), (2, (4, 5)), (4, (0, 1)), (5, (0,)), (0, (2,))])
    result, trace = apply_plan(path(6), plan)
    assert result.is_complete() and len(trace) == 6


def test_stalling_schedule_on_p6():
    plan = GlobalPlan.from_pairs([(0, (3,)), (1, (3, 4)), (2, (4, 5)), (3, (5,)), (4, (0,)), (5, (1,))])
    result, _ = apply_plan(path(6), plan)
    assert result.size == 13 and not result.is_complete()


@pytest.mark.parametrize(
    "steps, rule",
    [
        ([(9, (1,))], "vertex-out-of-range"),
        ([(0, (2,)), (0, (3,))], "duplicate-initiator"),
        ([(1, (3, 3))], "duplicate-target"),
        ([(0, (2, 3))], "budget-exceeded"),
        ([(1, (0,))], "target-adjacent"),
        ([(1, (7,))], "vertex-out-of-range"),
    ],
)
def test_violations(steps, rule):
    check = validate_plan(path(5), GlobalPlan.from_pairs(steps))
    assert not check and check.violation.rule == rule
    with pytest.raises(InvalidPlanError):
        apply_plan(path(5), GlobalPlan.from_pairs(steps))


def test_isolated_and_full_vertices_cannot_initiate():
    g = disjoint_union(path(3), null(1))
    assert validate_plan(g, GlobalPlan.from_pairs([(3, (0,))])).violation.rule == "initiator-not-eligible"
    w = join(complete(1), path(3))
    assert validate_plan(w, GlobalPlan.from_pairs([(0, ())])).violation.rule == "initiator-not-eligible"


def test_budget_frozen_and_receivers_do_not_gain():
    # vertex 0 of P_4 has budget 1 even after receiving an edge earlier in the iteration
    g = path(4)
    ok = GlobalPlan.from_pairs([(2, (0,)), (0, (3,))])
    assert validate_plan(g, ok)
    bad = GlobalPlan.from_pairs([(2, (0,)), (0, (3, 2))])
    assert validate_plan(g, bad).violation.rule in ("budget-exceeded", "target-adjacent")


def test_steps_after_completion_are_unreachable():
    g = path(3)
    plan = GlobalPlan.from_pairs([(0, (2,)), (1, ())])
    check = validate_plan(g, plan)
    assert check.ok and check.result.is_complete() and check.unreachable_steps == [1]


@pytest.mark.parametrize("policy", ["ascending", "descending", "random"])
@settings(max_examples=60)
@given(g=graphs(max_n=9), seed=st.integers(0, 1000))
def test_greedy_plans_are_valid(policy, g, seed):
    if not proper(g):
        return
    plan = greedy_plan(g, policy, seed=seed)
    assert validate_plan(g, plan)


def test_greedy_never_completes_star_k14():
    g = star(4)
    for policy in ("ascending", "descending"):
        assert not apply_plan(g, greedy_plan(g, policy))[0].is_complete()
    for seed in range(20):
        assert not apply_plan(g, greedy_plan(g, "random", seed=seed))[0].is_complete()


def test_greedy_explicit_order_and_errors():
    plan = greedy_plan(path(4), "explicit", order=[3, 2, 1, 0])
    assert [s.initiator for s in plan.steps][0] == 3
    with pytest.raises(EngineError):
        greedy_plan(complete(3))
    with pytest.raises(EngineError):
        greedy_plan(null(3))
    with pytest.raises(EngineError):
        greedy_plan(path(3), "sideways")


def test_one_shot_positive_has_valid_assignment():
    for g in (path(6), cycle(5), petersen(), complete_bipartite(2, 5)):
        d = one_shot_completable(g)
        assert d
        deg = g.degrees()
        load = {}
        for (u, v), w in d.assignment.items():
            assert w in (u, v) and deg[w] > 0
            load[w] = load.get(w, 0) + 1
        assert all(load[w] <= deg[w] for w in load)
        assert apply_plan(g, assignment_plan(g, d.assignment))[0].is_complete()
        assert apply_plan(g, assignment_plan(g, d.assignment, saturate=True))[0].is_complete()


def test_one_shot_negative_gives_hall_cut():
    d = one_shot_completable(complete_bipartite(2, 6))
    assert not d
    b = d.blocking
    assert b.demand > b.supply
    assert b.demand == 15 and b.supply == 12
    assert "15 missing edge(s)" in d.blocking.explain()
    # every blocked edge has both endpoints inside the blocking vertex set
    assert all(u in b.vertices and v in b.vertices for u, v in b.edges)


def test_flow_matches_naive_enumeration_up_to_order_5():
    for n in range(3, 6):
        for g in proper_classes(n):
            brute = any(h.is_complete() for h in naive_outcomes(g, saturated=False))
            assert bool(one_shot_completable(g)) == brute, g.edges()


@pytest.mark.parametrize("restriction", [SATURATED, ALL_VALID])
def test_labeled_outcomes_match_naive_simulation(restriction):
    for n in range(3, 6):
        for g in proper_classes(n):
            assert set(enumerate_labeled_outcomes(g, restriction)) == naive_outcomes(g, restriction == SATURATED)


def test_outcome_plans_replay():
    g = disjoint_union(path(3), null(2))
    for h, plan in enumerate_labeled_outcomes(g, ALL_VALID).items():
        assert apply_plan(g, plan)[0] == h


def test_k3_plus_two_isolated_has_single_saturated_outcome():
    g = disjoint_union(complete(3), null(2))
    outs = enumerate_outcomes(g)
    assert list(outs) == [canonical_form(complete(5).remove_edge(3, 4))]


def test_saturated_union_named_classes():
    # the three layer-2 classes of the worked P_2 ∪ 3K_1 example
    named = {
        canonical_form(join(complete(3), null(2))),
        canonical_form(join(complete(2), null(3))),
        canonical_form(complete(5).remove_edge(3, 4).remove_edge(2, 4)),
    }
    got = set(enumerate_outcomes(disjoint_union(complete(3), null(2)))) | set(
        enumerate_outcomes(disjoint_union(path(4), null(1)))
    )
    assert got == named


def test_outcome_errors():
    assert enumerate_labeled_outcomes(complete(4)) == {}
    with pytest.raises(EngineError):
        enumerate_labeled_outcomes(null(4))
    with pytest.raises(EngineError):
        enumerate_labeled_outcomes(path(7), ALL_VALID)
    with pytest.raises(EngineError):
        enumerate_labeled_outcomes(path(4), "some")


def test_degree_sum_bound_values():
    b = degree_sum_bound(disjoint_union(path(3), null(1)))
    assert b.holds and (b.lhs, b.rhs) == (6, 6)
    b7 = degree_sum_bound(path(7))
    assert not b7.holds and (b7.lhs, b7.rhs) == (18, 21)
    with pytest.raises(EngineError):
        degree_sum_bound(path(2))


def test_degree_sum_bound_necessary():
    for n in range(3, 7):
        for g in proper_classes(n):
            if one_shot_completable(g):
                assert degree_sum_bound(g).holds


def test_plan_text_round_trip():
    plans = [GlobalPlan.from_pairs([(0, (2, 3)), (1, ())]), GlobalPlan((LocalStep(4, (0,)),))]
    text = emit_witness(plans)
    assert parse_witness(text) == plans
    assert parse_plan("0: 1,2\n") == GlobalPlan.from_pairs([(0, (1, 2))])
    with pytest.raises(PlanFormatError):
        parse_plan(text)
    with pytest.raises(PlanFormatError):
        parse_witness("0 1 2\n")
