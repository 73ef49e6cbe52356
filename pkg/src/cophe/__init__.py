"""Hierarchical evaluation of multi-label predictions over the ICD-9 ontology.

Three regimes share one corpus: flat leaf-level confusion, set-based
hierarchical evaluation (ancestors as booleans), and count-preserving
hierarchical evaluation (ancestors carry descendant counts), all reported
as micro-averaged precision/recall/F1 per level and overall.
"""

__version__ = "0.1.0"

from .augmentation import CountMode, LabelSet, LevelCounts, augment
from .dataio import (
    ReportDocument,
    RunConfig,
    align_corpora,
    read_corpus,
    render_json,
    render_table,
    report_to_dict,
    round_percent,
)
from .errors import (
    ConfigError,
    CopheError,
    DocIdMismatch,
    DuplicateDocId,
    DuplicateLabel,
    FormatError,
    InputError,
    MalformedCode,
    ModeMismatch,
    OverlapError,
    UnknownChapter,
)
from .metrics import (
    ALL_REGIMES,
    ConfusionCounts,
    EvalReport,
    ModeResult,
    PRF,
    Regime,
    confusion_counts,
    document_confusion,
    evaluate,
    flat_confusion,
    micro_prf,
)
from .ontology import (
    UNKNOWN_CHAPTER,
    ChapterEntry,
    ChapterTable,
    CodeId,
    Hierarchy,
    Level,
    ancestor_at,
    default_chapter_table,
    default_hierarchy,
    load_chapter_table,
    parse_code,
)

__all__ = [
    "__version__",
    "ALL_REGIMES",
    "ChapterEntry",
    "ChapterTable",
    "CodeId",
    "ConfigError",
    "ConfusionCounts",
    "CopheError",
    "CountMode",
    "DocIdMismatch",
    "DuplicateDocId",
    "DuplicateLabel",
    "EvalReport",
    "FormatError",
    "Hierarchy",
    "InputError",
    "LabelSet",
    "Level",
    "LevelCounts",
    "MalformedCode",
    "ModeMismatch",
    "ModeResult",
    "OverlapError",
    "PRF",
    "Regime",
    "ReportDocument",
    "RunConfig",
    "UNKNOWN_CHAPTER",
    "UnknownChapter",
    "align_corpora",
    "ancestor_at",
    "augment",
    "confusion_counts",
    "default_chapter_table",
    "default_hierarchy",
    "document_confusion",
    "evaluate",
    "flat_confusion",
    "load_chapter_table",
    "micro_prf",
    "parse_code",
    "read_corpus",
    "render_json",
    "render_table",
    "report_to_dict",
    "round_percent",
]
