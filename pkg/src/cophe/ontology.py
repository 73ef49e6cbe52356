"""ICD-9 code grammar, depth levels, and chapter-block ancestry.

A code splits into a pre-decimal *category* and 0-2 post-decimal *etiology*
digits; the etiology length alone fixes the code's depth level. Ancestry
within a code family is therefore syntactic (drop etiology digits) and needs
no stored tree. Only the top "chapter" level, the ICD-9 block ranges such as
360-379, requires data: a four-column TSV of category ranges, one of which
ships with the package.

Four code families are recognised, each with its own ordering and ranges:
3-digit numeric categories (diagnoses), 2-digit numeric categories
(procedures), V-prefixed and E-prefixed categories.
"""

from __future__ import annotations

import io
import re
from bisect import bisect_right
from dataclasses import dataclass
from enum import IntEnum
from importlib import resources
from pathlib import Path
from typing import IO, Iterable

from .errors import ConfigError, FormatError, MalformedCode, OverlapError, UnknownChapter

#: Sentinel chapter assigned in non-strict mode when no range covers a category.
UNKNOWN_CHAPTER = "UNKNOWN"

_CATEGORY_RE = re.compile(r"[0-9]{2,3}|V[0-9]{2}|E[0-9]{3}")
_ETIOLOGY_RE = re.compile(r"[0-9]{0,2}")


class Level(IntEnum):
    """Depth strata of the label space, ordered bottom-up (E2 is deepest)."""

    E2 = 0
    E1 = 1
    E0 = 2
    CHAPTER = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, text: str) -> "Level":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ConfigError(
                f"unknown level {text!r}; expected one of e2, e1, e0, chapter"
            ) from None


_NATIVE_LEVEL = (Level.E0, Level.E1, Level.E2)  # indexed by etiology length


@dataclass(frozen=True)
class CodeId:
    """A parsed hierarchical label: category plus etiology digits."""

    raw: str
    category: str
    etiology: str
    native_level: Level

    def render(self) -> str:
        """Canonical text form; the dot is omitted when there is no etiology."""
        if self.etiology:
            return f"{self.category}.{self.etiology}"
        return self.category


def parse_code(text: str) -> CodeId:
    """Parse a code string such as ``364.11`` into its structured form.

    The category must match ``[0-9]{2,3}``, ``V[0-9]{2}`` or ``E[0-9]{3}``;
    the etiology is 0-2 digits. Surrounding whitespace is ignored.

    Raises MalformedCode on any grammar violation.
    """
    raw = text.strip()
    if not raw:
        raise MalformedCode("empty code string")
    category, dot, etiology = raw.partition(".")
    if "." in etiology:
        raise MalformedCode(f"{raw!r}: more than one decimal point")
    if dot and not etiology:
        raise MalformedCode(f"{raw!r}: trailing decimal point")
    if not _CATEGORY_RE.fullmatch(category):
        raise MalformedCode(
            f"{raw!r}: category {category!r} must match [0-9]{{2,3}}, V[0-9]{{2}} or E[0-9]{{3}}"
        )
    if not _ETIOLOGY_RE.fullmatch(etiology):
        raise MalformedCode(f"{raw!r}: etiology {etiology!r} must be 0-2 digits")
    return CodeId(
        raw=raw,
        category=category,
        etiology=etiology,
        native_level=_NATIVE_LEVEL[len(etiology)],
    )


def _family_value(category: str) -> tuple[str, int]:
    """Classify a category into its code family and family-local ordinal."""
    if category[0] == "V":
        return "V", int(category[1:])
    if category[0] == "E":
        return "E", int(category[1:])
    if len(category) == 2:
        return "proc", int(category)
    return "diag", int(category)


@dataclass(frozen=True)
class ChapterEntry:
    range_start: str
    range_end: str
    chapter_id: str
    description: str


class ChapterTable:
    """Maps code categories to chapter (block) identifiers via range lookup.

    Ranges are validated at construction: bounds must parse as categories of
    the same family, start must not exceed end, and ranges of one family must
    not overlap. Lookup is O(log n) per family. Instances are immutable.
    """

    def __init__(self, entries: Iterable[ChapterEntry]):
        self.entries: tuple[ChapterEntry, ...] = tuple(entries)
        buckets: dict[str, list[tuple[int, int, ChapterEntry]]] = {}
        for entry in self.entries:
            fam_start, start = _family_value(entry.range_start)
            fam_end, end = _family_value(entry.range_end)
            if fam_start != fam_end:
                raise FormatError(
                    f"range {entry.range_start}-{entry.range_end} mixes code families"
                )
            if start > end:
                raise FormatError(
                    f"range start {entry.range_start!r} exceeds end {entry.range_end!r}"
                )
            buckets.setdefault(fam_start, []).append((start, end, entry))
        self._index: dict[str, tuple[list[int], list[tuple[int, str]]]] = {}
        for family, ranges in buckets.items():
            ranges.sort(key=lambda item: (item[0], item[1], item[2].chapter_id))
            for prev, cur in zip(ranges, ranges[1:]):
                if cur[0] <= prev[1]:
                    raise OverlapError(
                        f"ranges {prev[2].range_start}-{prev[2].range_end} and "
                        f"{cur[2].range_start}-{cur[2].range_end} overlap"
                    )
            self._index[family] = (
                [start for start, _, _ in ranges],
                [(end, entry.chapter_id) for _, end, entry in ranges],
            )

    def lookup(self, category: str) -> str | None:
        """Chapter id covering `category`, or None when no range covers it."""
        family, value = _family_value(category)
        index = self._index.get(family)
        if index is None:
            return None
        starts, ends = index
        pos = bisect_right(starts, value) - 1
        if pos < 0:
            return None
        end, chapter_id = ends[pos]
        return chapter_id if value <= end else None

    def __len__(self) -> int:
        return len(self.entries)


def load_chapter_table(
    source: str | Path | IO[bytes] | IO[str], *, name: str | None = None
) -> ChapterTable:
    """Parse a chapter table from a TSV file path or stream.

    One entry per line: range_start, range_end, chapter_id, description,
    tab-separated. Lines starting with ``#`` and blank lines are skipped.
    """
    if isinstance(source, (str, Path)):
        name = name or str(source)
        with open(source, "r", encoding="utf-8") as handle:
            return _parse_chapter_lines(handle, name)
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return _parse_chapter_lines(io.StringIO(data), name or "<stream>")


def _parse_chapter_lines(lines: Iterable[str], name: str) -> ChapterTable:
    entries = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\r\n").split("\t")
        if len(fields) != 4:
            raise FormatError(
                f"{name}:{lineno}: expected 4 tab-separated fields, got {len(fields)}"
            )
        start, end, chapter_id, description = (field.strip() for field in fields)
        for bound in (start, end):
            if not _CATEGORY_RE.fullmatch(bound):
                raise FormatError(f"{name}:{lineno}: bad range bound {bound!r}")
        if not chapter_id:
            raise FormatError(f"{name}:{lineno}: empty chapter id")
        entries.append(ChapterEntry(start, end, chapter_id, description))
    try:
        return ChapterTable(entries)
    except (FormatError, OverlapError) as exc:
        raise type(exc)(f"{name}: {exc}") from None


def default_table_bytes() -> bytes:
    """Raw bytes of the bundled ICD-9 block table (for checksums)."""
    return resources.files("cophe").joinpath("data/icd9_blocks.tsv").read_bytes()


def default_chapter_table() -> ChapterTable:
    """The bundled ICD-9-CM block table (diagnoses, V codes, E codes, procedures)."""
    return load_chapter_table(io.BytesIO(default_table_bytes()), name="icd9_blocks.tsv")


@dataclass(frozen=True)
class Hierarchy:
    """Immutable evaluation ontology: a chapter table plus the evaluated span.

    `max_level` is the highest level that augmentation reaches; it must be
    E1, E0 or CHAPTER. In strict mode, categories without chapter coverage
    raise UnknownChapter instead of mapping to the UNKNOWN sentinel.
    """

    chapter_table: ChapterTable
    max_level: Level = Level.CHAPTER
    strict: bool = False

    def __post_init__(self):
        if self.max_level not in (Level.E1, Level.E0, Level.CHAPTER):
            raise ConfigError("max_level must be e1, e0, or chapter")
        if self.max_level == Level.CHAPTER and self.strict and len(self.chapter_table) == 0:
            raise ConfigError(
                "chapter level requested with an empty chapter table in strict mode"
            )

    @property
    def levels(self) -> tuple[Level, ...]:
        """Evaluated levels, deepest first (E2 up to max_level)."""
        return tuple(level for level in Level if level <= self.max_level)


def default_hierarchy(
    max_level: Level = Level.CHAPTER, strict: bool = False
) -> Hierarchy:
    """Hierarchy over the bundled block table; empty table below chapter level."""
    if max_level == Level.CHAPTER:
        table = default_chapter_table()
    else:
        table = ChapterTable(())
    return Hierarchy(chapter_table=table, max_level=max_level, strict=strict)


def ancestor_at(code: CodeId, level: Level, hierarchy: Hierarchy) -> str | None:
    """Node identifier of `code`'s ancestor at `level`.

    Returns the code's own node at its native level, the truncated code at
    a higher etiology level, the chapter id at CHAPTER, and None when the
    requested level lies below the code's native level.
    """
    if level < code.native_level:
        return None
    if level == code.native_level:
        return code.render()
    if level == Level.E1:
        return f"{code.category}.{code.etiology[0]}"
    if level == Level.E0:
        return code.category
    chapter = hierarchy.chapter_table.lookup(code.category)
    if chapter is None:
        if hierarchy.strict:
            raise UnknownChapter(
                f"category {code.category!r} is not covered by the chapter table"
            )
        return UNKNOWN_CHAPTER
    return chapter
