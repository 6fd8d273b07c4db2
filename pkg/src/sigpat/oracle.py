"""Brute-force reference miner for small instances.

Where the main engine walks tidsets, this module enumerates every itemset,
intersects supports directly and keeps the closed ones. The two routes share
nothing beyond the dataset container and the scoring functions, so agreement
between them on the same input is strong evidence both are right. Instances
are capped hard because the walk is exponential in the item count.
"""

from __future__ import annotations

from .dataset import Dataset, Tidset, bit_positions, tidset_from_masks
from .measures import check_significance, contingency_from_tidset, score_set
from .miner import MinerConfig, PatternRecord

MAX_TRANSACTIONS = 24
MAX_ITEMS = 20


class InstanceTooLargeError(ValueError):
    """The dataset exceeds the brute-force size caps."""


def _check_size(dataset: Dataset) -> None:
    m = len(dataset.items)
    if dataset.n > MAX_TRANSACTIONS or m > MAX_ITEMS:
        raise InstanceTooLargeError(
            f"oracle handles at most {MAX_TRANSACTIONS} transactions and "
            f"{MAX_ITEMS} items, got {dataset.n} and {m}"
        )


def enumerate_closed(dataset: Dataset) -> list[tuple[tuple[int, ...], Tidset]]:
    """All non-empty closed itemsets with their supporting tidsets, sorted.

    Works over itemset bitmasks: the support of a mask is the intersection
    of its items' supports (memoised bottom-up), and a mask is closed when
    no item outside it is shared by all its supporting transactions.
    """
    _check_size(dataset)
    m = len(dataset.items)
    n = dataset.n
    full_tids = (1 << n) - 1
    rows = dataset.rows
    # transpose: per-transaction itemset masks, for the closure check
    columns = [0] * n
    for j, row in enumerate(rows):
        bit = 1 << j
        while row:
            low = row & -row
            columns[low.bit_length() - 1] |= bit
            row ^= low
    support = [full_tids] * (1 << m)
    closed: list[tuple[tuple[int, ...], Tidset]] = []
    ids = dataset.item_ids
    case_mask = dataset.case_mask
    control_mask = dataset.control_mask
    for mask in range(1, 1 << m):
        low = mask & -mask
        tids = support[mask ^ low] & rows[low.bit_length() - 1]
        support[mask] = tids
        if not tids:
            continue
        shared = (1 << m) - 1
        t = tids
        while t:
            lowt = t & -t
            shared &= columns[lowt.bit_length() - 1]
            t ^= lowt
        if shared == mask:
            itemset = tuple(ids[j] for j in bit_positions(mask))
            closed.append(
                (itemset, tidset_from_masks(tids & case_mask, tids & control_mask))
            )
    closed.sort(key=lambda pair: pair[0])
    return closed


def mine_oracle(
    dataset: Dataset, config: MinerConfig | None = None
) -> list[PatternRecord]:
    """Reference answer for :func:`sigpat.miner.mine` on a small dataset."""
    cfg = config if config is not None else MinerConfig()
    thresholds = cfg.thresholds
    records: list[PatternRecord] = []
    for itemset, tidset in enumerate_closed(dataset):
        # the mining task targets patterns of the case class that also occur
        # in controls, so both tidset parts must be non-empty
        if not tidset.pos or not tidset.neg:
            continue
        table = contingency_from_tidset(tidset, dataset)
        scores = score_set(table)
        if check_significance(table, thresholds, scores):
            records.append(PatternRecord(itemset, tidset, table, scores))
    records.sort(key=lambda r: r.itemset)
    return records
