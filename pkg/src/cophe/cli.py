"""Command-line driver: read corpora, evaluate, render a report."""

from __future__ import annotations

import argparse
import hashlib
import io
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .dataio import (
    ReportDocument,
    RunConfig,
    align_corpora,
    read_corpus,
    render_json,
    render_table,
)
from .errors import (
    ConfigError,
    CopheError,
    FormatError,
    OverlapError,
    UnknownChapter,
)
from .metrics import ALL_REGIMES, Regime, evaluate
from .ontology import (
    ChapterTable,
    Hierarchy,
    Level,
    default_table_bytes,
    load_chapter_table,
)

_MODES = {
    "flat": (Regime.FLAT,),
    "set": (Regime.SET_BASED,),
    "cophe": (Regime.COPHE,),
    "all": ALL_REGIMES,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cophe",
        description=(
            "Evaluate multi-label ICD-9 predictions against gold labels with "
            "flat, set-based, and count-preserving hierarchical metrics."
        ),
    )
    parser.add_argument("--pred", required=True, metavar="FILE",
                        help="predicted labels (JSONL, or CSV by .csv extension)")
    parser.add_argument("--gold", required=True, metavar="FILE",
                        help="gold labels, same formats as --pred")
    parser.add_argument("--mode", choices=["flat", "set", "cophe", "all"],
                        default="all", help="evaluation regime (default: all)")
    parser.add_argument("--max-level", choices=["e1", "e0", "chapter"],
                        default="chapter", dest="max_level",
                        help="highest augmented level (default: chapter)")
    parser.add_argument("--chapters", metavar="FILE",
                        help="chapter table TSV (default: bundled ICD-9 blocks; "
                             "used when --max-level is chapter)")
    parser.add_argument("--per-level", action="store_true", dest="per_level",
                        help="include per-level rows in the report")
    parser.add_argument("--per-code", action="store_true", dest="per_code",
                        help="include per-node count breakdowns")
    parser.add_argument("--format", choices=["table", "json"], default="table",
                        help="output rendering (default: table)")
    parser.add_argument("--strict", action="store_true",
                        help="fail on duplicate labels and uncovered chapters")
    parser.add_argument("--output", metavar="FILE",
                        help="write the report to FILE (default: stdout)")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    return parser


def _fail(exc: CopheError, status: int) -> int:
    print(f"cophe: {type(exc).__name__}: {exc}", file=sys.stderr)
    return status


def _load_hierarchy(args) -> tuple[Hierarchy, str | None]:
    max_level = Level.from_label(args.max_level)
    checksum = None
    if max_level == Level.CHAPTER:
        if args.chapters:
            try:
                table_bytes = Path(args.chapters).read_bytes()
            except OSError as exc:
                raise ConfigError(f"{args.chapters}: {exc.strerror or exc}") from None
            table_name = args.chapters
        else:
            table_bytes = default_table_bytes()
            table_name = "icd9_blocks.tsv"
        checksum = hashlib.sha256(table_bytes).hexdigest()
        table = load_chapter_table(io.BytesIO(table_bytes), name=table_name)
    else:
        table = ChapterTable(())
    return Hierarchy(chapter_table=table, max_level=max_level, strict=args.strict), checksum


def _coverage_warnings(pairs, hierarchy: Hierarchy, warnings: list[str]) -> None:
    """Pre-scan label coverage so data problems surface with document context.

    In strict mode an uncovered category raises UnknownChapter here, before
    any evaluation runs; non-strict runs record one warning per category.
    Codes whose native level lies above max_level cannot contribute anywhere
    and are warned about as well.
    """
    uncovered: dict[str, str] = {}
    dropped: list[str] = []
    for pred, gold in pairs:
        for label_set in (pred, gold):
            for code in sorted(label_set.codes, key=lambda c: c.render()):
                if code.native_level > hierarchy.max_level:
                    dropped.append(
                        f"document {label_set.doc_id!r}: code {code.render()!r} is above "
                        f"max level {hierarchy.max_level.label}; it contributes to no level"
                    )
                if (
                    hierarchy.max_level == Level.CHAPTER
                    and hierarchy.chapter_table.lookup(code.category) is None
                ):
                    if hierarchy.strict:
                        raise UnknownChapter(
                            f"document {label_set.doc_id!r}: category {code.category!r} "
                            "is not covered by the chapter table"
                        )
                    uncovered.setdefault(
                        code.category,
                        f"category {code.category!r} is not covered by the chapter "
                        f"table; mapped to UNKNOWN (first seen in document "
                        f"{label_set.doc_id!r})",
                    )
    warnings.extend(dropped)
    warnings.extend(uncovered[cat] for cat in sorted(uncovered))


def _write_output(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    target = Path(output)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent or Path("."), prefix=".cophe-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        os.unlink(tmp_name)
        raise


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)

    try:
        hierarchy, checksum = _load_hierarchy(args)
    except (ConfigError, FormatError, OverlapError) as exc:
        return _fail(exc, 2)

    warnings: list[str] = []
    try:
        preds = read_corpus(args.pred, strict=args.strict, warnings=warnings)
        golds = read_corpus(args.gold, strict=args.strict, warnings=warnings)
        pairs = align_corpora(preds, golds)
        _coverage_warnings(pairs, hierarchy, warnings)
        report = evaluate(pairs, hierarchy, _MODES[args.mode])
    except UnknownChapter as exc:
        return _fail(exc, 2)
    except CopheError as exc:
        return _fail(exc, 1)

    doc = ReportDocument(
        version=__version__,
        config=RunConfig(
            modes=_MODES[args.mode],
            max_level=hierarchy.max_level,
            strict=args.strict,
            chapter_table_sha256=checksum,
            show_per_level=args.per_level,
            show_per_code=args.per_code,
        ),
        report=report,
        warnings=warnings,
    )
    text = render_json(doc) if args.format == "json" else render_table(doc)
    try:
        _write_output(text, args.output)
    except OSError as exc:
        print(f"cophe: InputError: {args.output}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli())
