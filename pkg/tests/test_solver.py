import pytest
from hypothesis import given, settings

from marcello.canon import canonical_form, proper_classes
from marcello.engine import ALL_VALID, EngineError, GlobalPlan, apply_plan
from marcello.graph import (
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    join,
    null,
    path,
    petersen,
    star,
)
from marcello.solver import (
    INFINITE,
    IterationCapExceeded,
    OrderCapExceeded,
    SearchConfig,
    Solver,
    counting_lower_bound,
    marcello_index,
    marcello_number,
    marcello_upper,
    min_join_order,
    min_union_order,
    minimal_initiator_subset,
    verify_sequence,
)

from test_graph import graphs


@pytest.mark.parametrize(
    "g, value",
    [
        (path(2), 0),
        (path(3), 1),
        (path(6), 1),
        (path(7), 2),
        (cycle(3), 0),
        (cycle(7), 1),
        (complete(5), 0),
        (null(4), INFINITE),
        (disjoint_union(complete(2), null(3)), 3),
        (petersen(), 1),
    ],
)
def test_marcello_number(g, value):
    r = marcello_number(g)
    assert r.value == value
    if r.finite and value:
        assert len(r.witness) == value
        assert verify_sequence(g, r.witness)


def test_p7_stats():
    r = Solver().marcello_number(path(7))
    assert r.value == 2 and r.stats.frontier_sizes[0] == 1


def test_witness_is_on_caller_labels():
    g = path(7).relabel([3, 6, 0, 5, 1, 4, 2])
    r = marcello_number(g)
    assert verify_sequence(g, r.witness)


def test_terminal_tests_agree():
    s = Solver()
    for g in proper_classes(5):
        flow = s.marcello_number(g, SearchConfig(terminal="flow")).value
        enum = s.marcello_number(g, SearchConfig(terminal="enumerate")).value
        assert flow == enum


def test_dedup_does_not_change_value():
    s = Solver()
    for g in proper_classes(4):
        assert s.marcello_number(g).value == s.marcello_number(g, SearchConfig(dedup=False)).value


def test_threads_give_same_result():
    a = Solver().marcello_number(path(7), SearchConfig(threads=2)).value
    assert a == 2


def test_caps():
    with pytest.raises(OrderCapExceeded):
        marcello_number(path(9))
    with pytest.raises(OrderCapExceeded):
        marcello_number(path(9), SearchConfig(exact_cap=9))
    assert marcello_number(path(8), SearchConfig(exact_cap=8)).value == 2
    # decided at layer 0 regardless of order
    assert marcello_number(disjoint_union(complete(5), complete(5))).value == 1
    with pytest.raises(IterationCapExceeded):
        marcello_number(disjoint_union(complete(2), null(3)), SearchConfig(max_iterations=2))


def test_memo_counts_expansions():
    s = Solver()
    s.marcello_number(path(7))
    before = s.expansions
    s.marcello_number(path(7).relabel([6, 5, 4, 3, 2, 1, 0]))
    assert s.expansions == before


def test_verify_sequence_failures():
    chk = verify_sequence(path(4), [])
    assert not chk and "not complete" in chk.failure
    chk = verify_sequence(path(4), [GlobalPlan.from_pairs([(0, (1,))])])
    assert not chk and "iteration 1" in chk.failure


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7))
def test_bounds_sandwich(g):
    if g.is_complete() or g.is_null():
        return
    exact = marcello_number(g).value
    up = marcello_upper(g, restarts=2)
    assert verify_sequence(g, up.witness)
    assert up.value >= exact
    if exact != INFINITE:
        assert counting_lower_bound(g) <= exact


def test_upper_bound_examples():
    assert marcello_upper(complete(4)).value == 0
    assert marcello_upper(path(7)).value >= 2
    with pytest.raises(EngineError):
        marcello_upper(null(3))


def test_counting_lower_bound():
    assert counting_lower_bound(path(7)) == 2
    assert counting_lower_bound(star(4), refined=False) == 1
    assert counting_lower_bound(star(4)) == 2
    assert counting_lower_bound(disjoint_union(path(5), null(20))) >= 4


def test_index_of_worked_example():
    g = disjoint_union(complete(2), null(3))
    ix = marcello_index(g)
    assert ix.index == 5 and ix.marcello_number == 3
    assert sorted(ix.intermediates.values()) == [1, 1, 1, 2, 2]
    assert marcello_index(g, SearchConfig(restriction=ALL_VALID)).index == 26


def test_index_one_shot_graph():
    ix = marcello_index(path(5))
    assert ix.index == 0 and ix.marcello_number == 1


def test_index_intermediates_have_exact_values():
    s, fresh = Solver(), Solver()
    for g in proper_classes(5):
        ix = s.marcello_index(g)
        for cf, w in ix.intermediates.items():
            assert fresh.marcello_number(cf.graph()).value == w


def test_min_orders():
    assert [min_join_order(m) for m in (2, 3, 4, 5)] == [1, 1, 2, 2]
    for m in (2, 3, 4):
        n = min_join_order(m)
        assert marcello_number(join(complete(n), null(m))).value == 1
    assert min_union_order(2) == 2


def test_minimal_initiator_subset():
    k, xs = minimal_initiator_subset(path(4))
    assert k == 1 and xs
    with pytest.raises(OrderCapExceeded):
        minimal_initiator_subset(path(8))


def test_complete_bipartite_row():
    assert marcello_number(complete_bipartite(2, 5)).value == 1
    assert marcello_number(complete_bipartite(2, 6), SearchConfig(exact_cap=8)).value == 2


def test_all_valid_sequences_reach_complete():
    g = disjoint_union(path(3), null(1))
    r = marcello_number(g, SearchConfig(restriction=ALL_VALID))
    cur = g
    for plan in r.witness:
        cur, _ = apply_plan(cur, plan)
    assert cur.is_complete() and r.value == 2
    assert canonical_form(cur) == canonical_form(complete(4))
