import io
import random

import pytest

from sigpat import Thresholds, from_transactions, load_transactions

TABLE1_TEXT = """\
1 a b c f i j
1 a b c e g i
1 a b c f h j
1 b d e g i j
1 d f g h i j
0 b c e g h j
0 a b c f g h
0 b c d e h i
0 a d e g h j
"""


@pytest.fixture
def table1():
    return load_transactions(io.StringIO(TABLE1_TEXT))


@pytest.fixture
def table1_path(tmp_path):
    p = tmp_path / "table1.tct"
    p.write_text(TABLE1_TEXT, encoding="utf-8")
    return p


def random_dataset(rng: random.Random, max_case=10, max_control=10, max_items=14):
    """A small random two-class dataset drawn from a seeded generator."""
    n_case = rng.randint(1, max_case)
    n_control = rng.randint(1, max_control)
    m = rng.randint(1, max_items)
    density = rng.uniform(0.2, 0.6)
    names = [f"i{k}" for k in range(m)]
    case = [[x for x in names if rng.random() < density] for _ in range(n_case)]
    control = [[x for x in names if rng.random() < density] for _ in range(n_control)]
    return from_transactions(case, control)


def random_thresholds(rng: random.Random) -> Thresholds:
    """A random subset of thresholds, allowing the empty configuration."""
    kwargs = {}
    if rng.random() < 0.5:
        kwargs["min_sd"] = rng.uniform(-0.2, 0.6)
    if rng.random() < 0.5:
        kwargs["min_gr"] = rng.uniform(0.0, 3.0)
    if rng.random() < 0.5:
        kwargs["min_ors"] = rng.uniform(0.0, 4.0)
    if rng.random() < 0.4:
        kwargs["min_lci_gr"] = rng.uniform(0.0, 2.0)
    if rng.random() < 0.4:
        kwargs["min_lci_ors"] = rng.uniform(0.0, 2.0)
    return Thresholds(**kwargs)


def planted_genotype_matrix(
    seed: int,
    n_case: int = 100,
    n_control: int = 100,
    n_snps: int = 500,
    pair: tuple[str, str] = ("rs0007", "rs0123"),
    case_joint: float = 0.55,
    control_joint: float = 0.04,
):
    """CSV text for a genotype matrix with one case-enriched SNP pair.

    Background genotypes are class-independent. For the planted pair, a
    per-individual coin decides whether both SNPs take genotype 2 jointly;
    the coin is biased toward cases. Returns (matrix_csv, labels_csv).
    """
    rng = random.Random(seed)
    snps = [f"rs{k:04d}" for k in range(1, n_snps + 1)]
    assert set(pair) <= set(snps)
    individuals = [f"ind{k:03d}" for k in range(1, n_case + n_control + 1)]
    labels = {ind: 1 if k < n_case else 0 for k, ind in enumerate(individuals)}

    def background() -> int:
        r = rng.random()
        return 0 if r < 0.45 else (1 if r < 0.85 else 2)

    column: dict[str, dict[str, int]] = {}
    for ind in individuals:
        joint_p = case_joint if labels[ind] else control_joint
        joint = rng.random() < joint_p
        geno = {snp: background() for snp in snps}
        if joint:
            geno[pair[0]] = 2
            geno[pair[1]] = 2
        column[ind] = geno

    # shuffle columns so the loader's case-first ordering is exercised
    shuffled = individuals[:]
    rng.shuffle(shuffled)
    lines = ["snp," + ",".join(shuffled)]
    for snp in snps:
        lines.append(snp + "," + ",".join(str(column[ind][snp]) for ind in shuffled))
    matrix_csv = "\n".join(lines) + "\n"
    labels_csv = "".join(f"{ind},{labels[ind]}\n" for ind in individuals)
    return matrix_csv, labels_csv
