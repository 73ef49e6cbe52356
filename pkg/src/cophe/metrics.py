"""Confusion counts and micro-averaged precision/recall/F1 for three regimes.

Per ancestor node, predicted and gold descendant counts x and y reduce to
count-preserving confusion cells:

    tp = min(x, y)    fp = max(x - y, 0)    fn = max(y - x, 0)

which coincide with the standard binary cells whenever x and y are 0/1.
Counts are summed exactly (integers) over nodes, documents, and levels;
ratios are taken once, at report time.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .augmentation import CountMode, LabelSet, LevelCounts, augment
from .errors import DocIdMismatch, ModeMismatch
from .ontology import Hierarchy, Level


@dataclass(frozen=True)
class ConfusionCounts:
    """Integer TP/FP/FN triple; addition is component-wise."""

    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self):
        if self.tp < 0 or self.fp < 0 or self.fn < 0:
            raise ValueError("confusion counts must be non-negative")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn
        )


_ZERO = ConfusionCounts()


def confusion_counts(x: int, y: int) -> ConfusionCounts:
    """Count-preserving confusion cell for predicted count x vs gold count y."""
    if x < 0 or y < 0:
        raise ValueError("counts must be non-negative")
    return ConfusionCounts(tp=min(x, y), fp=max(x - y, 0), fn=max(y - x, 0))


@dataclass(frozen=True)
class PRF:
    """Precision/recall/F1 with explicit flags for zero-denominator cases.

    An undefined component carries the value 0.0 and its flag set to False;
    scores are never inflated by empty denominators.
    """

    precision: float
    recall: float
    f1: float
    precision_defined: bool
    recall_defined: bool
    f1_defined: bool


def micro_prf(counts: ConfusionCounts) -> PRF:
    """P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R), 0.0 when undefined."""
    p_den = counts.tp + counts.fp
    r_den = counts.tp + counts.fn
    precision = counts.tp / p_den if p_den else 0.0
    recall = counts.tp / r_den if r_den else 0.0
    f_den = precision + recall
    f1 = 2.0 * precision * recall / f_den if f_den else 0.0
    return PRF(precision, recall, f1, p_den > 0, r_den > 0, f_den > 0)


def document_confusion(
    pred: LevelCounts, gold: LevelCounts
) -> dict[Level, dict[str, ConfusionCounts]]:
    """Per-node confusion cells for one document, level by level.

    Nodes appearing on either side are compared with absent counts as zero.
    Both inputs must use the same count mode.
    """
    if pred.mode is not gold.mode:
        raise ModeMismatch(
            f"cannot compare {pred.mode.value} counts with {gold.mode.value} counts"
        )
    result: dict[Level, dict[str, ConfusionCounts]] = {}
    for level in sorted(set(pred.per_level) | set(gold.per_level)):
        pred_nodes = pred.per_level.get(level, {})
        gold_nodes = gold.per_level.get(level, {})
        result[level] = {
            node: confusion_counts(pred_nodes.get(node, 0), gold_nodes.get(node, 0))
            for node in set(pred_nodes) | set(gold_nodes)
        }
    return result


def flat_confusion(pred: LabelSet, gold: LabelSet) -> ConfusionCounts:
    """Standard set confusion over raw leaf codes, ignoring the hierarchy."""
    tp = len(pred.codes & gold.codes)
    return ConfusionCounts(
        tp=tp, fp=len(pred.codes) - tp, fn=len(gold.codes) - tp
    )


class Regime(Enum):
    """Evaluation style: flat leaves, set-based hierarchy, count-preserving."""

    FLAT = "flat"
    SET_BASED = "set"
    COPHE = "cophe"


ALL_REGIMES = (Regime.FLAT, Regime.SET_BASED, Regime.COPHE)

_REGIME_MODE = {Regime.SET_BASED: CountMode.BINARY, Regime.COPHE: CountMode.COUNT}


@dataclass
class ModeResult:
    """Aggregated counts and scores for one evaluation regime."""

    regime: Regime
    overall: ConfusionCounts
    overall_prf: PRF
    per_level: dict[Level, ConfusionCounts]
    per_level_prf: dict[Level, PRF]
    per_node: dict[Level, dict[str, ConfusionCounts]]


@dataclass
class EvalReport:
    """Evaluation results per regime over a fixed span of levels."""

    levels: tuple[Level, ...]
    results: dict[Regime, ModeResult]


def _check_alignment(corpus: Sequence[tuple[LabelSet, LabelSet]]) -> None:
    seen: set[str] = set()
    for pred, gold in corpus:
        if pred.doc_id != gold.doc_id:
            raise DocIdMismatch(
                f"misaligned pair: pred doc {pred.doc_id!r} vs gold doc {gold.doc_id!r}"
            )
        if pred.doc_id in seen:
            raise DocIdMismatch(f"doc_id {pred.doc_id!r} appears more than once")
        seen.add(pred.doc_id)


def evaluate(
    corpus: Sequence[tuple[LabelSet, LabelSet]],
    hierarchy: Hierarchy,
    regimes: Iterable[Regime] = ALL_REGIMES,
) -> EvalReport:
    """Micro-aggregate a corpus of (pred, gold) document pairs.

    Confusion cells are computed per document and node, summed over
    documents and nodes within each level, and summed across levels
    (E2 up to the hierarchy's max level) for the overall figures.
    """
    _check_alignment(corpus)
    requested = set(regimes)
    levels = hierarchy.levels
    results: dict[Regime, ModeResult] = {}
    for regime in ALL_REGIMES:
        if regime not in requested:
            continue
        if regime is Regime.FLAT:
            total = _ZERO
            for pred, gold in corpus:
                total = total + flat_confusion(pred, gold)
            results[regime] = ModeResult(
                regime=regime,
                overall=total,
                overall_prf=micro_prf(total),
                per_level={},
                per_level_prf={},
                per_node={},
            )
            continue
        mode = _REGIME_MODE[regime]
        per_node: dict[Level, dict[str, ConfusionCounts]] = {
            level: {} for level in levels
        }
        for pred, gold in corpus:
            doc_cells = document_confusion(
                augment(pred, hierarchy, mode), augment(gold, hierarchy, mode)
            )
            for level, row in doc_cells.items():
                bucket = per_node[level]
                for node, cell in row.items():
                    bucket[node] = bucket.get(node, _ZERO) + cell
        per_level = {
            level: sum(per_node[level].values(), _ZERO) for level in levels
        }
        overall = sum(per_level.values(), _ZERO)
        results[regime] = ModeResult(
            regime=regime,
            overall=overall,
            overall_prf=micro_prf(overall),
            per_level=per_level,
            per_level_prf={level: micro_prf(cell) for level, cell in per_level.items()},
            per_node=per_node,
        )
    return EvalReport(levels=levels, results=results)
