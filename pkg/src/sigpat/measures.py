"""Discriminance scores, confidence intervals and tests for 2x2 class tables.

A contingency table (a, b, c, d) counts cases containing a pattern, cases
lacking it, controls containing it and controls lacking it. The three
discriminance scores are support difference, growth rate and odds ratio;
their 95% confidence bounds use the standard log-normal approximation with
z = 1.96 and the Haldane-Anscombe +0.5 correction when a cell is empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .dataset import Dataset, Tidset

Z_95 = 1.96


@dataclass(frozen=True, slots=True)
class ContingencyTable:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("contingency counts must be non-negative")

    @property
    def n_case(self) -> int:
        return self.a + self.b

    @property
    def n_control(self) -> int:
        return self.c + self.d


@dataclass(frozen=True, slots=True)
class ScoreSet:
    sd: float
    gr: float
    ors: float
    lci_gr: float
    uci_gr: float
    lci_ors: float
    uci_ors: float
    corrected_ci: bool


@dataclass(frozen=True, slots=True)
class Thresholds:
    """Minimum values a pattern must reach; any subset may be set.

    Plain score thresholds compare with >=, interval lower bounds with
    a strict >. A missing threshold is vacuously satisfied.
    """

    min_sd: Optional[float] = None
    min_gr: Optional[float] = None
    min_ors: Optional[float] = None
    min_lci_gr: Optional[float] = None
    min_lci_ors: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("min_sd", "min_gr", "min_ors", "min_lci_gr", "min_lci_ors"):
            value = getattr(self, name)
            if value is None:
                continue
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            if name in ("min_gr", "min_ors") and value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")

    @property
    def has_any(self) -> bool:
        return any(
            getattr(self, name) is not None
            for name in ("min_sd", "min_gr", "min_ors", "min_lci_gr", "min_lci_ors")
        )


def contingency_from_tidset(q: Tidset, dataset: Dataset) -> ContingencyTable:
    """Table whose present-counts are the sizes of the two tidset parts."""
    a, c = len(q.pos), len(q.neg)
    if a > dataset.n_case or c > dataset.n_control:
        raise ValueError("tidset does not fit the dataset class sizes")
    return ContingencyTable(a, dataset.n_case - a, c, dataset.n_control - c)


def relational_support(count_present: int, class_size: int) -> float:
    if class_size < 1:
        raise ValueError("class size must be at least 1")
    if not 0 <= count_present <= class_size:
        raise ValueError("count must lie within [0, class size]")
    return count_present / class_size


def discriminance(table: ContingencyTable) -> tuple[float, float, float]:
    """(support difference, growth rate, odds ratio) with the 0/inf conventions.

    A positive numerator over a zero denominator yields +inf, a zero numerator
    over a positive denominator yields 0, and the fully degenerate 0/0 forms
    are reported as 0.
    """
    n1, n2 = table.n_case, table.n_control
    if n1 == 0 or n2 == 0:
        raise ValueError("both classes must be non-empty")
    s1 = table.a / n1
    s2 = table.c / n2
    sd = s1 - s2
    if table.c > 0:
        gr = s1 / s2
    elif table.a > 0:
        gr = math.inf
    else:
        gr = 0.0
    ad = table.a * table.d
    bc = table.b * table.c
    if bc > 0:
        ors = ad / bc
    elif ad > 0:
        ors = math.inf
    else:
        ors = 0.0
    return sd, gr, ors


def confidence_intervals(table: ContingencyTable) -> tuple[float, float, float, float, bool]:
    """95% bounds (lci_gr, uci_gr, lci_ors, uci_ors, corrected).

    When any cell is 0 the log-scale standard errors are undefined, so every
    cell gets +0.5 before evaluation and the corrected flag is set.
    """
    if table.n_case == 0 or table.n_control == 0:
        raise ValueError("both classes must be non-empty")
    corrected = min(table.a, table.b, table.c, table.d) == 0
    shift = 0.5 if corrected else 0.0
    a = table.a + shift
    b = table.b + shift
    c = table.c + shift
    d = table.d + shift
    n1 = a + b
    n2 = c + d
    log_gr = math.log((a / n1) / (c / n2))
    half_gr = Z_95 * math.sqrt(1.0 / a - 1.0 / n1 + 1.0 / c - 1.0 / n2)
    log_ors = math.log((a * d) / (b * c))
    half_ors = Z_95 * math.sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d)
    return (
        math.exp(log_gr - half_gr),
        math.exp(log_gr + half_gr),
        math.exp(log_ors - half_ors),
        math.exp(log_ors + half_ors),
        corrected,
    )


def score_set(table: ContingencyTable) -> ScoreSet:
    sd, gr, ors = discriminance(table)
    lci_gr, uci_gr, lci_ors, uci_ors, corrected = confidence_intervals(table)
    return ScoreSet(sd, gr, ors, lci_gr, uci_gr, lci_ors, uci_ors, corrected)


def check_significance(
    table: ContingencyTable,
    thresholds: Thresholds,
    scores: ScoreSet | None = None,
) -> bool:
    """True when every configured threshold is met (infinite scores pass all)."""
    s = scores if scores is not None else score_set(table)
    if thresholds.min_sd is not None and not s.sd >= thresholds.min_sd:
        return False
    if thresholds.min_gr is not None and not s.gr >= thresholds.min_gr:
        return False
    if thresholds.min_ors is not None and not s.ors >= thresholds.min_ors:
        return False
    if thresholds.min_lci_gr is not None and not s.lci_gr > thresholds.min_lci_gr:
        return False
    if thresholds.min_lci_ors is not None and not s.lci_ors > thresholds.min_lci_ors:
        return False
    return True


def association_pvalue(table: ContingencyTable, yates: bool = False) -> float:
    """Upper-tail Pearson chi-square p-value (1 dof) for class association.

    Returns 1.0 when any margin is empty. ``yates`` applies the continuity
    correction |ad - bc| -> max(0, |ad - bc| - n/2).
    """
    a, b, c, d = table.a, table.b, table.c, table.d
    n = a + b + c + d
    r1, r2, c1, c2 = a + b, c + d, a + c, b + d
    if 0 in (r1, r2, c1, c2):
        return 1.0
    diff = abs(a * d - b * c)
    if yates:
        diff = max(0.0, diff - n / 2.0)
    stat = n * diff * diff / (r1 * r2 * c1 * c2)
    return math.erfc(math.sqrt(stat / 2.0))
