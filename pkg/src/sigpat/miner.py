"""Depth-first tidset enumeration of significant discriminative closed patterns.

The search walks tidsets, not itemsets. Starting from each case tid, the case
part grows with smaller case tids while the case-side closure keeps the branch
canonical; once a control tid joins, only smaller control tids may follow and
the control-side closure takes over. A branch is abandoned whenever the
closure adds a tid at or above the tid that opened it, which makes every
closed tidset reachable exactly once. A pattern is emitted when its tidset is
closed over both classes, contains at least one control tid, and satisfies the
configured thresholds.

Because adding a control tid to a tidset can only lower the support
difference, growth rate, odds ratio and (under documented guards) the
interval lower bounds, failing thresholds at an inner node proves every
pattern below it would fail too; that is the pruning rule. Growth-rate
lower-bound pruning switches off for control classes smaller than 5, where
the decrease does not hold for every table, and each interval-based prune
additionally requires that the most extreme reachable table (all remaining
controls joining, which re-triggers the zero-cell correction) also fails,
so pruning never loses a valid pattern.

Scores, prune verdicts, and interval floors depend only on the two tidset
part sizes, so they are memoised per search; the row list shrinks with the
node exactly as in a dataset-reduction scheme, since the itemset of a node
is the itemset of its surviving rows.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .dataset import Dataset, Tidset, bit_positions
from .measures import (
    ContingencyTable,
    ScoreSet,
    Thresholds,
    check_significance,
    confidence_intervals,
    score_set,
)


class InternalInvariantError(RuntimeError):
    """The engine produced output that violates its own guarantees."""


@dataclass(frozen=True)
class MinerConfig:
    thresholds: Thresholds = Thresholds()
    prune: bool = True
    #: None resolves to (n_control >= 5) at mine time; forcing True on a
    #: smaller control class may lose patterns and exists for experiments.
    lci_gr_prune_guard: Optional[bool] = None
    threads: int = 1


@dataclass(frozen=True, slots=True)
class PatternRecord:
    itemset: tuple[int, ...]
    tidset: Tidset
    table: ContingencyTable
    scores: ScoreSet


@dataclass(slots=True)
class MineStats:
    nodes_visited: int = 0
    nodes_pruned: int = 0
    patterns_emitted: int = 0
    wall_time_seconds: float = 0.0


class TraceNode(NamedTuple):
    """One enumerated node: tidset parts plus the itemset it carries."""

    pos: tuple[int, ...]
    neg: tuple[int, ...]
    items: tuple[int, ...]


class _Search:
    """Per-root search state; rows are (original item id, bit row) pairs."""

    __slots__ = (
        "n_case", "n_control", "case_mask", "control_mask",
        "thresholds", "prune", "lci_gr_prunes",
        "min_sd", "min_gr", "min_ors", "min_lci_gr", "min_lci_ors",
        "records", "trace", "nodes_visited", "nodes_pruned",
        "_floors", "_hope", "_scored",
    )

    def __init__(self, n_case: int, n_control: int, cfg: MinerConfig, traced: bool):
        self.n_case = n_case
        self.n_control = n_control
        n = n_case + n_control
        self.case_mask = (1 << n_case) - 1
        self.control_mask = ((1 << n) - 1) ^ self.case_mask
        th = cfg.thresholds
        self.thresholds = th
        self.prune = cfg.prune and th.has_any
        guard = cfg.lci_gr_prune_guard
        self.lci_gr_prunes = (n_control >= 5) if guard is None else guard
        self.min_sd = th.min_sd
        self.min_gr = th.min_gr
        self.min_ors = th.min_ors
        self.min_lci_gr = th.min_lci_gr
        self.min_lci_ors = th.min_lci_ors
        self.records: list[PatternRecord] = []
        self.trace: list[TraceNode] | None = [] if traced else None
        self.nodes_visited = 0
        self.nodes_pruned = 0
        self._floors: dict[int, tuple[float, float]] = {}
        self._hope: dict[tuple[int, int], bool] = {}
        self._scored: dict[tuple[int, int], tuple[ContingencyTable, ScoreSet, bool]] = {}

    def _log(self, tpos: int, tneg: int, rows) -> None:
        self.trace.append(
            TraceNode(bit_positions(tpos), bit_positions(tneg), tuple(i for i, _ in rows))
        )

    def expand_case(self, tpos: int, e: int, rows) -> None:
        ebit = 1 << e
        sub = []
        inter = -1
        union = 0
        for ir in rows:
            r = ir[1]
            if r & ebit:
                sub.append(ir)
                inter &= r
                union |= r
        if not sub:
            return
        tpos |= ebit
        self.nodes_visited += 1
        if self.trace is not None:
            self._log(tpos, 0, sub)
        ext = inter & self.case_mask & ~tpos
        if ext:
            if ext >= ebit:
                return  # closure reaches a tid >= e: this branch is a duplicate
            tpos |= ext
            self.nodes_visited += 1
            if self.trace is not None:
                self._log(tpos, 0, sub)
        a = tpos.bit_count()
        free = union & ~tpos & (ebit - 1)
        while free:
            low = free & -free
            free ^= low
            self.expand_case(tpos, low.bit_length() - 1, sub)
        ctl = union & self.control_mask
        while ctl:
            low = ctl & -ctl
            ctl ^= low
            self.expand_control(tpos, a, 0, low.bit_length() - 1, sub)

    def expand_control(self, tpos: int, a: int, tneg: int, e: int, rows) -> None:
        ebit = 1 << e
        sub = []
        inter = -1
        union = 0
        for ir in rows:
            r = ir[1]
            if r & ebit:
                sub.append(ir)
                inter &= r
                union |= r
        if not sub:
            return
        tneg |= ebit
        self.nodes_visited += 1
        if self.trace is not None:
            self._log(tpos, tneg, sub)
        if self.prune:
            key = (a, tneg.bit_count())
            hope = self._hope.get(key)
            if hope is None:
                hope = self._keeps_hope(*key)
                self._hope[key] = hope
            if not hope:
                self.nodes_pruned += 1
                return
        ext = inter & self.control_mask & ~tneg
        if ext:
            if ext >= ebit:
                return
            tneg |= ext
            self.nodes_visited += 1
            if self.trace is not None:
                self._log(tpos, tneg, sub)
        if inter & self.case_mask == tpos:
            self._emit(tpos, tneg, a, sub)
        free = union & self.control_mask & ~tneg & (ebit - 1)
        while free:
            low = free & -free
            free ^= low
            self.expand_control(tpos, a, tneg, low.bit_length() - 1, sub)

    def _emit(self, tpos: int, tneg: int, a: int, rows) -> None:
        key = (a, tneg.bit_count())
        scored = self._scored.get(key)
        if scored is None:
            table = ContingencyTable(a, self.n_case - a, key[1], self.n_control - key[1])
            scores = score_set(table)
            scored = (table, scores, check_significance(table, self.thresholds, scores))
            self._scored[key] = scored
        if scored[2]:
            self.records.append(
                PatternRecord(
                    tuple(i for i, _ in rows),
                    Tidset(bit_positions(tpos), bit_positions(tneg)),
                    scored[0],
                    scored[1],
                )
            )

    def _floor_bounds(self, a: int) -> tuple[float, float]:
        # CI lower bounds of the deepest reachable table (every control joins)
        floors = self._floors.get(a)
        if floors is None:
            cis = confidence_intervals(
                ContingencyTable(a, self.n_case - a, self.n_control, 0)
            )
            floors = (cis[0], cis[2])
            self._floors[a] = floors
        return floors

    def _keeps_hope(self, a: int, c: int) -> bool:
        """False when no descendant of a node with tidset counts (a, c) can pass."""
        n1 = self.n_case
        n2 = self.n_control
        b = n1 - a
        d = n2 - c
        s1 = a / n1
        s2 = c / n2
        if self.min_sd is not None and s1 - s2 < self.min_sd:
            return False
        if self.min_gr is not None and s1 / s2 < self.min_gr:
            return False
        if self.min_ors is not None:
            bc = b * c
            if bc and a * d / bc < self.min_ors:
                return False
        check_ors = self.min_lci_ors is not None and b
        check_gr = self.min_lci_gr is not None and b and self.lci_gr_prunes
        if check_ors or check_gr:
            cis = confidence_intervals(ContingencyTable(a, b, c, d))
            gr_floor, ors_floor = self._floor_bounds(a)
            if (
                check_ors
                and cis[2] <= self.min_lci_ors
                and ors_floor <= self.min_lci_ors
            ):
                return False
            if (
                check_gr
                and cis[0] <= self.min_lci_gr
                and gr_floor <= self.min_lci_gr
            ):
                return False
        return True


def mine(
    dataset: Dataset,
    config: MinerConfig | None = None,
    trace: list[TraceNode] | None = None,
) -> tuple[list[PatternRecord], MineStats]:
    """Enumerate all significant discriminative closed patterns of ``dataset``.

    Returns the records sorted by itemset (lexicographic on item ids) plus
    search statistics. ``trace``, when given a list, receives every visited
    node; the output is identical for any thread count.
    """
    cfg = config if config is not None else MinerConfig()
    if dataset.n_case < 1 or dataset.n_control < 1:
        raise ValueError("mining needs at least one case and one control transaction")
    if cfg.threads < 1:
        raise ValueError("threads must be >= 1")
    start = time.perf_counter()
    base_rows = tuple(zip(dataset.item_ids, dataset.rows))
    traced = trace is not None

    def run_root(e: int) -> _Search:
        search = _Search(dataset.n_case, dataset.n_control, cfg, traced)
        search.expand_case(0, e, base_rows)
        return search

    roots = range(dataset.n_case)
    if cfg.threads == 1:
        searches = [run_root(e) for e in roots]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            searches = list(pool.map(run_root, roots))
    records: list[PatternRecord] = []
    stats = MineStats()
    for search in searches:
        records.extend(search.records)
        stats.nodes_visited += search.nodes_visited
        stats.nodes_pruned += search.nodes_pruned
        if traced:
            trace.extend(search.trace)
    records.sort(key=lambda r: r.itemset)
    for first, second in zip(records, records[1:]):
        if first.itemset == second.itemset:
            raise InternalInvariantError(
                f"closed pattern emitted twice: {first.itemset}"
            )
    stats.patterns_emitted = len(records)
    stats.wall_time_seconds = time.perf_counter() - start
    return records, stats
