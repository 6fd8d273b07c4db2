"""Two-class transaction datasets stored as per-item bit rows.

Transactions get internal ids 0..n-1 with all case (label 1) transactions
first, followed by the controls (label 0). Each item owns one integer whose
bit j records whether internal transaction j contains the item, so set
intersections and support counts reduce to bitwise ops on Python ints.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

Source = Union[str, Path, IO[str], IO[bytes]]

#: An itemset is a strictly increasing tuple of internal item ids.
ItemSet = tuple[int, ...]


class DatasetFormatError(ValueError):
    """Input text does not conform to the expected file format."""


def bit_positions(mask: int) -> tuple[int, ...]:
    """Positions of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Tidset:
    """A set of internal transaction ids split into case and control parts.

    ``pos`` holds case tids (all < n_case), ``neg`` holds control tids
    (all >= n_case). Both tuples are strictly increasing.
    """

    pos: tuple[int, ...] = ()
    neg: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for part in (self.pos, self.neg):
            if any(part[i] >= part[i + 1] for i in range(len(part) - 1)):
                raise ValueError("tids must be strictly increasing")

    @classmethod
    def of(cls, pos: Iterable[int] = (), neg: Iterable[int] = ()) -> "Tidset":
        return cls(tuple(sorted(set(pos))), tuple(sorted(set(neg))))

    def __len__(self) -> int:
        return len(self.pos) + len(self.neg)


@dataclass(frozen=True, slots=True)
class TwoClassDataset:
    items: tuple[str, ...]
    n_case: int
    n_control: int
    rows: tuple[int, ...]
    external_ids: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.n_case + self.n_control

    @property
    def case_mask(self) -> int:
        return (1 << self.n_case) - 1

    @property
    def control_mask(self) -> int:
        return ((1 << self.n) - 1) ^ self.case_mask

    @property
    def item_ids(self) -> tuple[int, ...]:
        """Row index -> original item id (the identity for a full dataset)."""
        return tuple(range(len(self.items)))

    def row_of(self, item_id: int) -> int:
        return self.rows[item_id]

    def name_of(self, item_id: int) -> str:
        return self.items[item_id]


@dataclass(frozen=True)
class ReducedDataset:
    """A dataset restricted to the item rows shared by some tidset.

    Columns (transactions) are untouched; ``item_ids`` maps each retained row
    back to the item id in the original dataset.
    """

    items: tuple[str, ...]
    n_case: int
    n_control: int
    rows: tuple[int, ...]
    external_ids: tuple[str, ...]
    item_ids: tuple[int, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {orig: k for k, orig in enumerate(self.item_ids)})

    @property
    def n(self) -> int:
        return self.n_case + self.n_control

    @property
    def case_mask(self) -> int:
        return (1 << self.n_case) - 1

    @property
    def control_mask(self) -> int:
        return ((1 << self.n) - 1) ^ self.case_mask

    def row_of(self, item_id: int) -> int:
        try:
            return self.rows[self._index[item_id]]
        except KeyError:
            raise KeyError(f"item id {item_id} was dropped by the reduction") from None

    def name_of(self, item_id: int) -> str:
        return self.items[self._index[item_id]]


Dataset = Union[TwoClassDataset, ReducedDataset]


def tidset_mask(q: Tidset, dataset: Dataset) -> int:
    """Bitmask over internal tids for ``q``, validating the class split."""
    n_case, n = dataset.n_case, dataset.n
    mask = 0
    for t in q.pos:
        if not 0 <= t < n_case:
            raise ValueError(f"case tid {t} out of range [0, {n_case})")
        mask |= 1 << t
    for t in q.neg:
        if not n_case <= t < n:
            raise ValueError(f"control tid {t} out of range [{n_case}, {n})")
        mask |= 1 << t
    return mask


def tidset_from_masks(pos_mask: int, neg_mask: int) -> Tidset:
    return Tidset(bit_positions(pos_mask), bit_positions(neg_mask))


def _read_text(source: Source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _build(
    items: Sequence[str],
    transactions: Sequence[tuple[str, Sequence[int]]],
    n_case: int,
) -> TwoClassDataset:
    rows = [0] * len(items)
    for j, (_ext, ids) in enumerate(transactions):
        bit = 1 << j
        for i in ids:
            rows[i] |= bit
    external = tuple(ext for ext, _ in transactions)
    return TwoClassDataset(tuple(items), n_case, len(transactions) - n_case, tuple(rows), external)


def load_transactions(source: Source) -> TwoClassDataset:
    """Parse the labelled transaction text format.

    Each non-comment line reads ``<label> <item> <item> ...`` with label 1 for
    case and 0 for control. Items are arbitrary whitespace-free tokens;
    duplicates within a line collapse to one occurrence. Lines starting with
    ``#`` and blank lines are skipped. Item ids follow first appearance order;
    external ids are 1-based positions in the sequence of data lines.
    """
    item_ids: dict[str, int] = {}
    case: list[tuple[str, list[int]]] = []
    control: list[tuple[str, list[int]]] = []
    seq = 0
    for lineno, raw in enumerate(_read_text(source).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        label = tokens[0]
        if label not in ("0", "1"):
            raise DatasetFormatError(f"line {lineno}: label must be 0 or 1, got {label!r}")
        if len(tokens) == 1:
            logger.warning("line %d: transaction has no items", lineno)
        ids: list[int] = []
        seen: set[int] = set()
        for tok in tokens[1:]:
            iid = item_ids.setdefault(tok, len(item_ids))
            if iid not in seen:
                seen.add(iid)
                ids.append(iid)
        seq += 1
        (case if label == "1" else control).append((str(seq), ids))
    if not case and not control:
        raise DatasetFormatError("empty dataset: no transactions found")
    return _build(list(item_ids), case + control, len(case))


def from_transactions(
    case: Sequence[Iterable[str]],
    control: Sequence[Iterable[str]],
    external_ids: Sequence[str] | None = None,
) -> TwoClassDataset:
    """Build a dataset from in-memory item-name transactions (cases first)."""
    item_ids: dict[str, int] = {}
    tx: list[tuple[str, list[int]]] = []
    for k, names in enumerate(list(case) + list(control)):
        ids: list[int] = []
        seen: set[int] = set()
        for name in names:
            iid = item_ids.setdefault(name, len(item_ids))
            if iid not in seen:
                seen.add(iid)
                ids.append(iid)
        ext = external_ids[k] if external_ids is not None else str(k + 1)
        tx.append((ext, ids))
    if not tx:
        raise DatasetFormatError("empty dataset: no transactions found")
    return _build(list(item_ids), tx, len(case))


def dump_transactions(dataset: Dataset, dest: Union[str, Path, IO[str]]) -> None:
    """Serialize to the transaction text format, cases first."""
    lines = []
    m = len(dataset.items)
    for j in range(dataset.n):
        label = "1" if j < dataset.n_case else "0"
        names = [dataset.items[i] for i in range(m) if dataset.rows[i] >> j & 1]
        lines.append(" ".join([label] + names))
    text = "\n".join(lines) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)


def _parse_labels(text: str) -> dict[str, str]:
    labels: dict[str, str] = {}
    first = True
    for row in csv.reader(io.StringIO(text)):
        if not row or (row[0].strip().startswith("#")):
            continue
        if len(row) != 2:
            raise DatasetFormatError(f"labels: expected 'individual,label', got {row!r}")
        ind, label = row[0].strip(), row[1].strip()
        if label not in ("0", "1"):
            if first:
                first = False
                continue  # header line
            raise DatasetFormatError(f"labels: label for {ind!r} must be 0 or 1, got {label!r}")
        if ind in labels:
            raise DatasetFormatError(f"labels: duplicate individual id {ind!r}")
        labels[ind] = label
        first = False
    if not labels:
        raise DatasetFormatError("labels: no entries found")
    return labels


def load_genotype_matrix(matrix_source: Source, labels_source: Source) -> TwoClassDataset:
    """Expand a SNP genotype matrix into a two-class transaction dataset.

    The matrix is CSV with a header row naming the individuals; each data row
    is a SNP id followed by one genotype cell in {0,1,2} per individual. Every
    SNP s contributes the three items ``s_0``, ``s_1``, ``s_2`` and each
    individual holds exactly one of them. The labels stream maps individual
    ids to 1 (case) or 0 (control).
    """
    labels = _parse_labels(_read_text(labels_source))
    rows_iter = [
        row
        for row in csv.reader(io.StringIO(_read_text(matrix_source)))
        if row and not row[0].strip().startswith("#")
    ]
    if not rows_iter:
        raise DatasetFormatError("genotype matrix: empty input")
    header = [cell.strip() for cell in rows_iter[0]]
    individuals = header[1:]
    if not individuals:
        raise DatasetFormatError("genotype matrix: no individual columns")
    if len(set(individuals)) != len(individuals):
        raise DatasetFormatError("genotype matrix: duplicate individual id in header")
    if set(individuals) != set(labels):
        raise DatasetFormatError("labels do not match the matrix columns")
    snps: list[str] = []
    seen_snps: set[str] = set()
    genotypes: list[list[int]] = []
    for lineno, row in enumerate(rows_iter[1:], start=2):
        snp = row[0].strip()
        if snp in seen_snps:
            raise DatasetFormatError(f"genotype matrix row {lineno}: duplicate SNP id {snp!r}")
        seen_snps.add(snp)
        if len(row) != len(individuals) + 1:
            raise DatasetFormatError(
                f"genotype matrix row {lineno}: expected {len(individuals)} cells, got {len(row) - 1}"
            )
        cells = []
        for cell in row[1:]:
            value = cell.strip()
            if value not in ("0", "1", "2"):
                raise DatasetFormatError(
                    f"genotype matrix row {lineno}: genotype must be 0, 1 or 2, got {value!r}"
                )
            cells.append(int(value))
        snps.append(snp)
        genotypes.append(cells)
    if not snps:
        raise DatasetFormatError("genotype matrix: no SNP rows")
    order = [k for k, ind in enumerate(individuals) if labels[ind] == "1"]
    n_case = len(order)
    order += [k for k, ind in enumerate(individuals) if labels[ind] == "0"]
    items = tuple(f"{snp}_{v}" for snp in snps for v in range(3))
    rows = [0] * len(items)
    for s, cells in enumerate(genotypes):
        base = 3 * s
        for j, col in enumerate(order):
            rows[base + cells[col]] |= 1 << j
    external = tuple(individuals[col] for col in order)
    return TwoClassDataset(items, n_case, len(order) - n_case, tuple(rows), external)


def reduced_dataset(q: Tidset, dataset: Dataset) -> ReducedDataset:
    """Keep only the item rows present in every transaction of ``q``."""
    mask = tidset_mask(q, dataset)
    names: list[str] = []
    rows: list[int] = []
    ids: list[int] = []
    for orig, name, row in zip(dataset.item_ids, dataset.items, dataset.rows):
        if row & mask == mask:
            ids.append(orig)
            names.append(name)
            rows.append(row)
    return ReducedDataset(
        tuple(names), dataset.n_case, dataset.n_control, tuple(rows),
        dataset.external_ids, tuple(ids),
    )


def generate_synthetic(
    n_case: int, n_control: int, n_items: int, density: float, seed: int
) -> TwoClassDataset:
    """Random dataset where every (item, transaction) bit is Bernoulli(density)."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be within [0, 1], got {density}")
    if min(n_case, n_control, n_items) < 0:
        raise ValueError("counts must be non-negative")
    n = n_case + n_control
    rng = np.random.default_rng(seed)
    bits = rng.random((n_items, n)) < density
    rows = tuple(
        int.from_bytes(np.packbits(bits[i], bitorder="little").tobytes(), "little")
        for i in range(n_items)
    )
    items = tuple(f"i{k}" for k in range(n_items))
    external = tuple(str(j + 1) for j in range(n))
    return TwoClassDataset(items, n_case, n_control, rows, external)
