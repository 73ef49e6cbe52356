"""Ancestor propagation of flat leaf label sets into per-level node counts.

Each document's labels are redistributed over the hierarchy levels: a leaf
contributes to its own node at its native level and to exactly one ancestor
node at every higher level up to the hierarchy's max level. Counts can be
kept (count-preserving) or clamped to presence booleans (set-based).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import DuplicateLabel
from .ontology import CodeId, Hierarchy, Level, ancestor_at, parse_code


class CountMode(Enum):
    """Interpretation of propagated values: descendant counts or booleans."""

    COUNT = "count"
    BINARY = "binary"


@dataclass(frozen=True)
class LabelSet:
    """One document's flat labels; a code appears at most once per document."""

    doc_id: str
    codes: frozenset[CodeId]

    @classmethod
    def from_strings(
        cls,
        doc_id: str,
        codes: Iterable[str],
        *,
        strict: bool = False,
        warnings: list[str] | None = None,
    ) -> "LabelSet":
        """Parse label strings, rejecting (strict) or dropping duplicates.

        Dropped duplicates are reported through the optional `warnings` list.
        """
        seen: set[CodeId] = set()
        for text in codes:
            code = parse_code(text)
            if code in seen:
                message = f"document {doc_id!r}: duplicate code {code.render()!r}"
                if strict:
                    raise DuplicateLabel(message)
                if warnings is not None:
                    warnings.append(message + " dropped")
                continue
            seen.add(code)
        return cls(doc_id=doc_id, codes=frozenset(seen))


@dataclass(frozen=True)
class LevelCounts:
    """Per-level node values for one document; absent nodes count as zero."""

    mode: CountMode
    per_level: Mapping[Level, Mapping[str, int]]


def augment(labels: LabelSet, hierarchy: Hierarchy, mode: CountMode) -> LevelCounts:
    """Spread a document's leaves over every level up to hierarchy.max_level.

    A leaf with native level L contributes 1 to its own node at L and, at
    each higher evaluated level, 1 to its unique ancestor node there
    (summed in COUNT mode, OR-ed in BINARY mode). Leaves never contribute
    below their native level.
    """
    per_level: dict[Level, dict[str, int]] = {
        level: {} for level in hierarchy.levels
    }
    for code in labels.codes:
        for level, bucket in per_level.items():
            if level < code.native_level:
                continue
            node = ancestor_at(code, level, hierarchy)
            if mode is CountMode.BINARY:
                bucket[node] = 1
            else:
                bucket[node] = bucket.get(node, 0) + 1
    return LevelCounts(mode=mode, per_level=per_level)
