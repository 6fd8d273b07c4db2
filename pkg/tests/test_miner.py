import random

import pytest

from sigpat import (
    MinerConfig,
    MineStats,
    Thresholds,
    Tidset,
    TraceNode,
    common_items,
    from_transactions,
    mine,
    mine_oracle,
    supporting_tids,
)

from conftest import random_dataset, random_thresholds

THRESHOLD_SETS = [
    Thresholds(),
    Thresholds(min_sd=0.1, min_gr=1.2, min_ors=1.5),
    Thresholds(min_ors=2.0),
    Thresholds(min_lci_ors=0.1),
    Thresholds(min_lci_gr=0.3),
    Thresholds(min_sd=0.3, min_lci_ors=0.5),
]


@pytest.mark.parametrize("thresholds", THRESHOLD_SETS)
def test_mine_matches_oracle_on_worked_table(table1, thresholds):
    records, _ = mine(table1, MinerConfig(thresholds=thresholds))
    assert records == mine_oracle(table1, MinerConfig(thresholds=thresholds))


def test_mine_worked_table_counts(table1):
    records, stats = mine(table1)
    assert len(records) == 50
    assert stats.patterns_emitted == 50
    assert stats.nodes_visited == 184
    assert stats.nodes_pruned == 0
    assert stats.wall_time_seconds >= 0.0

    records, stats = mine(table1, MinerConfig(thresholds=Thresholds(min_ors=2.0)))
    assert len(records) == 15
    assert stats.nodes_visited == 137
    assert stats.nodes_pruned == 41


def test_mine_output_invariants(table1):
    records, _ = mine(table1)
    itemsets = [r.itemset for r in records]
    assert itemsets == sorted(itemsets)
    assert len(set(itemsets)) == len(itemsets)
    for r in records:
        assert r.itemset == tuple(sorted(r.itemset))
        assert r.tidset.pos and r.tidset.neg
        assert r.table.a == len(r.tidset.pos)
        assert r.table.c == len(r.tidset.neg)
        assert r.table.a + r.table.b == table1.n_case
        assert r.table.c + r.table.d == table1.n_control
        assert supporting_tids(r.itemset, table1) == r.tidset
        assert common_items(r.tidset, table1) == r.itemset


def test_mine_prune_changes_nothing_but_work(table1):
    th = Thresholds(min_ors=2.0)
    pruned, st_pruned = mine(table1, MinerConfig(thresholds=th))
    full, st_full = mine(table1, MinerConfig(thresholds=th, prune=False))
    assert pruned == full
    assert st_full.nodes_pruned == 0
    assert st_pruned.nodes_visited < st_full.nodes_visited


def test_mine_prune_noop_without_thresholds(table1):
    on, st_on = mine(table1, MinerConfig(prune=True))
    off, st_off = mine(table1, MinerConfig(prune=False))
    assert on == off
    assert st_on.nodes_visited == st_off.nodes_visited
    assert st_on.nodes_pruned == 0


def test_lci_gr_prune_guard(table1):
    # four controls: the growth-rate lower bound is not monotone there,
    # so the automatic guard must disable that prune entirely
    th = Thresholds(min_lci_gr=0.3)
    _, stats = mine(table1, MinerConfig(thresholds=th))
    assert stats.nodes_pruned == 0
    _, forced = mine(table1, MinerConfig(thresholds=th, lci_gr_prune_guard=True))
    assert forced.nodes_pruned > 0


def test_mine_trace_soundness(table1):
    trace: list[TraceNode] = []
    _, stats = mine(table1, trace=trace)
    assert len(trace) == stats.nodes_visited == 184
    for node in trace:
        assert node.pos
        assert node.items
        q = Tidset(node.pos, node.neg)
        assert common_items(q, table1) == node.items


def test_mine_trace_contains_closure_jumps(table1):
    def ids(names):
        return tuple(sorted(table1.items.index(x) for x in names))

    trace: list[TraceNode] = []
    mine(table1, trace=trace)
    nodes = {(n.pos, n.neg): n.items for n in trace}
    # adding control 9 to cases {1,2} leaves only item a, whose support
    # closure pulls in control 7: both nodes must have been visited
    assert nodes[(0, 1), (8,)] == ids("a")
    assert nodes[(0, 1), (6, 8)] == ids("a")
    # the closure of cases {2} with controls {8,9} jumps to control 6
    assert nodes[(1,), (7, 8)] == ids("e")
    assert nodes[(1,), (5, 7, 8)] == ids("e")


def test_mine_thread_count_does_not_change_output(table1):
    base_records, base_stats = mine(table1, MinerConfig(threads=1))
    for threads in (2, 4, 8):
        records, stats = mine(table1, MinerConfig(threads=threads))
        assert records == base_records
        assert stats.nodes_visited == base_stats.nodes_visited
        assert stats.nodes_pruned == base_stats.nodes_pruned


def test_mine_input_validation():
    single = from_transactions([["a"], ["b"]], [])
    with pytest.raises(ValueError):
        mine(single)
    both = from_transactions([["a"]], [["b"]])
    with pytest.raises(ValueError):
        mine(both, MinerConfig(threads=0))


def test_mine_trivial_dataset():
    d = from_transactions([["x"]], [["x"]])
    records, _ = mine(d)
    assert len(records) == 1
    assert records[0].tidset == Tidset((0,), (1,))


def test_mine_matches_oracle_random_sweep():
    rng = random.Random(5150)
    for _ in range(40):
        d = random_dataset(rng, max_case=7, max_control=7, max_items=11)
        cfg = MinerConfig(thresholds=random_thresholds(rng))
        records, _ = mine(d, cfg)
        assert records == mine_oracle(d, cfg)
        unpruned, _ = mine(d, MinerConfig(thresholds=cfg.thresholds, prune=False))
        assert records == unpruned


def test_mine_stats_type():
    assert MineStats().nodes_visited == 0
    assert MineStats().wall_time_seconds == 0.0
