"""Shared test utilities: random code corpora and an independent chain oracle.

The oracle re-derives every leaf's ancestor chain with plain string surgery
and a linear scan of the raw block TSV; it never calls into the package's
ancestry or augmentation code paths.
"""

from __future__ import annotations

import random
from pathlib import Path

DATA_TSV = Path(__file__).resolve().parents[1] / "src" / "cophe" / "data" / "icd9_blocks.tsv"

LEVEL_ORDER = ["e2", "e1", "e0", "chapter"]

# Mixed families, mixed depths; '043' and 'E500' sit in coverage gaps of the
# bundled block table on purpose.
CATEGORY_POOL = [
    "008", "042", "043", "250", "276", "305", "364", "401", "425", "428",
    "518", "585", "707", "780", "996",
    "V09", "V30", "V58", "V85",
    "E500", "E849", "E878", "E930",
    "00", "17", "38", "96",
]

# One category per block so per-document node counts stay binary at every
# level, chapters included.
DISTINCT_BLOCK_POOL = [
    "008", "140", "250", "280", "300", "364", "401", "460", "520", "580",
    "650", "680", "710", "740", "760", "780", "800",
    "V01", "E800", "00",
]


def load_block_rows() -> list[tuple[str, str, str]]:
    rows = []
    for line in DATA_TSV.read_text(encoding="utf-8").splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        start, end, chapter_id, _ = line.split("\t")
        rows.append((start, end, chapter_id))
    return rows


def random_code_strings(
    rng: random.Random, max_leaves: int = 50, pool: list[str] | None = None
) -> list[str]:
    """Distinct random code strings across families and native depths."""
    pool = pool or CATEGORY_POOL
    target = rng.randint(0, max_leaves)
    out: set[str] = set()
    for _ in range(4 * target + 8):
        if len(out) >= target:
            break
        category = rng.choice(pool)
        digits = rng.randint(0, 2)
        etiology = "".join(rng.choice("0123456789") for _ in range(digits))
        out.add(f"{category}.{etiology}" if etiology else category)
    return sorted(out)


def oracle_chapter(category: str, rows: list[tuple[str, str, str]]) -> str:
    for start, end, chapter_id in rows:
        if category[0] in "VE":
            if start[0] != category[0]:
                continue
            if int(start[1:]) <= int(category[1:]) <= int(end[1:]):
                return chapter_id
        else:
            if start[0] in "VE" or len(start) != len(category):
                continue
            if int(start) <= int(category) <= int(end):
                return chapter_id
    return "UNKNOWN"


def oracle_tally(
    codes: list[str], rows: list[tuple[str, str, str]], max_level: str
) -> dict[str, dict[str, int]]:
    """Brute-force per-level tally of every leaf's full ancestor chain."""
    upto = LEVEL_ORDER.index(max_level)
    tallies: dict[str, dict[str, int]] = {name: {} for name in LEVEL_ORDER[: upto + 1]}
    for text in codes:
        if "." in text:
            category, etiology = text.split(".")
        else:
            category, etiology = text, ""
        chain = {"e0": category, "chapter": oracle_chapter(category, rows)}
        if len(etiology) == 2:
            chain["e2"] = f"{category}.{etiology}"
            chain["e1"] = f"{category}.{etiology[0]}"
        elif len(etiology) == 1:
            chain["e1"] = f"{category}.{etiology}"
        native = {0: "e0", 1: "e1", 2: "e2"}[len(etiology)]
        for name in LEVEL_ORDER[LEVEL_ORDER.index(native) : upto + 1]:
            bucket = tallies[name]
            bucket[chain[name]] = bucket.get(chain[name], 0) + 1
    return tallies
