"""Error taxonomy shared by parsing, augmentation, metrics, and I/O."""


class CopheError(Exception):
    """Base class for every error raised by this package."""


class MalformedCode(CopheError):
    """A label string does not match the ICD-9 code grammar."""


class UnknownChapter(CopheError):
    """A category has no covering range in the chapter table (strict mode)."""


class FormatError(CopheError):
    """A corpus or chapter-table file is syntactically invalid."""


class OverlapError(CopheError):
    """Two chapter-table ranges of the same code family overlap."""


class DuplicateLabel(CopheError):
    """The same code appears more than once in one document (strict mode)."""


class DuplicateDocId(CopheError):
    """The same doc_id appears more than once within one corpus file."""


class ModeMismatch(CopheError):
    """Count-preserving and binary level counts were mixed in one comparison."""


class DocIdMismatch(CopheError):
    """Prediction and gold corpora do not cover the same documents."""


class ConfigError(CopheError):
    """An invalid configuration was requested."""


class InputError(CopheError):
    """A corpus file is missing or unreadable."""
