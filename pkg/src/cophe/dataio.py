"""Corpus file ingestion, report assembly, and table/JSON rendering.

JSONL is the primary interchange format: one object per line with fields
`doc_id` (string) and `codes` (array of strings). CSV is supported for
spreadsheet workflows: header `doc_id,codes`, with codes `;`-separated
inside the cell. All counts stay integers until rendering; percentages are
rounded to one decimal with half-even ties.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from .augmentation import LabelSet
from .errors import (
    ConfigError,
    CopheError,
    DuplicateDocId,
    DocIdMismatch,
    FormatError,
    InputError,
)
from .metrics import ConfusionCounts, EvalReport, PRF, Regime
from .ontology import Level

JSONL = "jsonl"
CSV = "csv"


def detect_format(path: str | Path) -> str:
    """File format by extension: `.csv` is CSV, anything else is JSONL."""
    return CSV if Path(path).suffix.lower() == ".csv" else JSONL


def read_corpus(
    path: str | Path,
    fmt: str | None = None,
    *,
    strict: bool = False,
    warnings: list[str] | None = None,
) -> list[LabelSet]:
    """Read one corpus file into validated label sets, in file order.

    Errors carry the file name and line number of the offending record.
    """
    path = Path(path)
    if fmt is None:
        fmt = detect_format(path)
    if not path.is_file():
        raise InputError(f"{path}: no such file")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    if fmt == JSONL:
        return _read_jsonl(text, str(path), strict, warnings)
    if fmt == CSV:
        return _read_csv(text, str(path), strict, warnings)
    raise ConfigError(f"unknown corpus format {fmt!r}")


def _build_label_set(name, lineno, doc_id, codes, seen_ids, strict, warnings):
    if doc_id in seen_ids:
        raise DuplicateDocId(f"{name}:{lineno}: duplicate doc_id {doc_id!r}")
    seen_ids.add(doc_id)
    try:
        return LabelSet.from_strings(doc_id, codes, strict=strict, warnings=warnings)
    except CopheError as exc:
        raise type(exc)(f"{name}:{lineno}: {exc}") from None


def _read_jsonl(text, name, strict, warnings):
    label_sets = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{name}:{lineno}: invalid JSON: {exc.msg}") from None
        if not isinstance(record, dict):
            raise FormatError(f"{name}:{lineno}: expected a JSON object")
        doc_id = record.get("doc_id")
        codes = record.get("codes")
        if not isinstance(doc_id, str):
            raise FormatError(f"{name}:{lineno}: missing or non-string 'doc_id'")
        if not isinstance(codes, list) or not all(isinstance(c, str) for c in codes):
            raise FormatError(f"{name}:{lineno}: 'codes' must be an array of strings")
        label_sets.append(
            _build_label_set(name, lineno, doc_id, codes, seen_ids, strict, warnings)
        )
    return label_sets


def _read_csv(text, name, strict, warnings):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{name}:1: missing header 'doc_id,codes'") from None
    if [cell.strip() for cell in header] != ["doc_id", "codes"]:
        raise FormatError(f"{name}:1: header must be 'doc_id,codes'")
    label_sets = []
    seen_ids: set[str] = set()
    for row in reader:
        lineno = reader.line_num
        if not row:
            continue
        if len(row) != 2:
            raise FormatError(f"{name}:{lineno}: expected 2 fields, got {len(row)}")
        doc_id, cell = row
        codes = [part for part in (p.strip() for p in cell.split(";")) if part]
        label_sets.append(
            _build_label_set(name, lineno, doc_id, codes, seen_ids, strict, warnings)
        )
    return label_sets


def align_corpora(
    preds: list[LabelSet], golds: list[LabelSet]
) -> list[tuple[LabelSet, LabelSet]]:
    """Pair prediction and gold documents by doc_id, in prediction order."""
    gold_by_id = {gold.doc_id: gold for gold in golds}
    pred_ids = {pred.doc_id for pred in preds}
    only_pred = sorted(pred_ids - set(gold_by_id))
    only_gold = sorted(set(gold_by_id) - pred_ids)
    if only_pred or only_gold:
        parts = []
        if only_pred:
            parts.append(f"only in pred: {', '.join(only_pred)}")
        if only_gold:
            parts.append(f"only in gold: {', '.join(only_gold)}")
        raise DocIdMismatch("; ".join(parts))
    return [(pred, gold_by_id[pred.doc_id]) for pred in preds]


@dataclass(frozen=True)
class RunConfig:
    """Echo of the evaluation configuration, embedded in every report."""

    modes: tuple[Regime, ...]
    max_level: Level
    strict: bool
    chapter_table_sha256: str | None
    show_per_level: bool = False
    show_per_code: bool = False


@dataclass
class ReportDocument:
    """A rendered-ready evaluation run: config echo, results, warnings."""

    version: str
    config: RunConfig
    report: EvalReport
    warnings: list[str] = field(default_factory=list)


def round_percent(numerator: int, denominator: int) -> float:
    """Exact percentage of an integer ratio, one decimal, half-even ties."""
    pct = Decimal(100 * numerator) / Decimal(denominator)
    return float(pct.quantize(Decimal("0.1"), rounding=ROUND_HALF_EVEN))


def _cell(counts: ConfusionCounts, prf: PRF) -> dict:
    """Full metric cell: integer counts, raw ratios, rounded percentages."""
    tp, fp, fn = counts.tp, counts.fp, counts.fn
    return {
        "tp": tp,
        "fp": fp,
        "fn": fn,
        "precision": prf.precision,
        "recall": prf.recall,
        "f1": prf.f1,
        "precision_pct": round_percent(tp, tp + fp) if prf.precision_defined else 0.0,
        "recall_pct": round_percent(tp, tp + fn) if prf.recall_defined else 0.0,
        "f1_pct": round_percent(2 * tp, 2 * tp + fp + fn) if prf.f1_defined else 0.0,
        "precision_defined": prf.precision_defined,
        "recall_defined": prf.recall_defined,
        "f1_defined": prf.f1_defined,
    }


def _count_cell(counts: ConfusionCounts) -> dict:
    return {"tp": counts.tp, "fp": counts.fp, "fn": counts.fn}


def report_to_dict(doc: ReportDocument) -> dict:
    """Serialize a report document to the machine-readable JSON structure."""
    results = {}
    for regime in doc.config.modes:
        mode = doc.report.results[regime]
        entry = {"overall": _cell(mode.overall, mode.overall_prf)}
        if doc.config.show_per_level and regime is not Regime.FLAT:
            entry["per_level"] = {
                level.label: _cell(mode.per_level[level], mode.per_level_prf[level])
                for level in doc.report.levels
            }
        if doc.config.show_per_code and regime is not Regime.FLAT:
            entry["per_node"] = {
                level.label: {
                    node: _count_cell(mode.per_node[level][node])
                    for node in sorted(mode.per_node[level])
                }
                for level in doc.report.levels
            }
        results[regime.value] = entry
    return {
        "tool": "cophe",
        "version": doc.version,
        "config": {
            "modes": [regime.value for regime in doc.config.modes],
            "max_level": doc.config.max_level.label,
            "strict": doc.config.strict,
            "per_level": doc.config.show_per_level,
            "per_code": doc.config.show_per_code,
            "chapter_table_sha256": doc.config.chapter_table_sha256,
        },
        "warnings": list(doc.warnings),
        "results": results,
    }


def render_json(doc: ReportDocument) -> str:
    return json.dumps(report_to_dict(doc), indent=2) + "\n"


def _pct_text(cell: dict, key: str) -> str:
    if not cell[f"{key}_defined"]:
        return "-"
    return f"{cell[f'{key}_pct']:.1f}"


def render_table(doc: ReportDocument) -> str:
    """Plain-text grid: one row per mode and level, TP/FP/FN/P/R/F1 columns."""
    payload = report_to_dict(doc)
    rows: list[tuple[str, str, dict]] = []
    for regime in doc.config.modes:
        entry = payload["results"][regime.value]
        for level_label, cell in entry.get("per_level", {}).items():
            rows.append((regime.value, level_label, cell))
        rows.append((regime.value, "overall", entry["overall"]))

    count_width = 2
    for _, _, cell in rows:
        for key in ("tp", "fp", "fn"):
            count_width = max(count_width, len(str(cell[key])))

    config = payload["config"]
    lines = [
        f"# cophe {payload['version']}",
        "# modes: {}  max_level: {}  strict: {}".format(
            ",".join(config["modes"]),
            config["max_level"],
            "true" if config["strict"] else "false",
        ),
        f"# chapter_table_sha256: {config['chapter_table_sha256'] or '-'}",
        "{:<6} {:<8} {:>{w}} {:>{w}} {:>{w}} {:>6} {:>6} {:>6}".format(
            "mode", "level", "TP", "FP", "FN", "P", "R", "F1", w=count_width
        ),
    ]
    for mode_label, level_label, cell in rows:
        lines.append(
            "{:<6} {:<8} {:>{w}} {:>{w}} {:>{w}} {:>6} {:>6} {:>6}".format(
                mode_label,
                level_label,
                cell["tp"],
                cell["fp"],
                cell["fn"],
                _pct_text(cell, "precision"),
                _pct_text(cell, "recall"),
                _pct_text(cell, "f1"),
                w=count_width,
            )
        )

    node_rows = []
    for regime in doc.config.modes:
        entry = payload["results"][regime.value]
        for level_label, nodes in entry.get("per_node", {}).items():
            for node, cell in nodes.items():
                node_rows.append((regime.value, level_label, node, cell))
    if node_rows:
        node_width = max(4, max(len(node) for _, _, node, _ in node_rows))
        lines.append("")
        lines.append("per-code breakdown")
        lines.append(
            "{:<6} {:<8} {:<{nw}} {:>{w}} {:>{w}} {:>{w}}".format(
                "mode", "level", "node", "TP", "FP", "FN", nw=node_width, w=count_width
            )
        )
        for mode_label, level_label, node, cell in node_rows:
            lines.append(
                "{:<6} {:<8} {:<{nw}} {:>{w}} {:>{w}} {:>{w}}".format(
                    mode_label,
                    level_label,
                    node,
                    cell["tp"],
                    cell["fp"],
                    cell["fn"],
                    nw=node_width,
                    w=count_width,
                )
            )

    if payload["warnings"]:
        lines.append("")
        lines.append("warnings")
        for warning in payload["warnings"]:
            lines.append(f"- {warning}")
    return "\n".join(lines) + "\n"
