"""Exception types raised across the toolkit.

Every error that callers are expected to catch derives from
:class:`PulseboostError`, so CLI entry points can map any domain failure
to a single-line diagnostic and a nonzero exit code.
"""

from __future__ import annotations


class PulseboostError(Exception):
    """Base class for all toolkit errors."""


class EmptyRoi(PulseboostError):
    """A region of interest covers no pixel of the raster."""


class OutOfBounds(PulseboostError):
    """A resolved polygon vertex lies outside the raster."""


class DimensionMismatch(PulseboostError):
    """A vector or matrix does not have the width a schema demands."""

    def __init__(self, category: str, expected: int, actual: int):
        self.category = category
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"category {category!r}: expected width {expected}, got {actual}"
        )


class InsufficientData(PulseboostError):
    """Too few rows to fit statistics."""


class EmptySegment(PulseboostError):
    """A segment aggregation was requested over zero frames."""


class UnknownCategory(PulseboostError):
    """A feature-category name is not present in the schema."""

    def __init__(self, name: str, available: tuple[str, ...]):
        self.name = name
        super().__init__(f"unknown category {name!r}; schema has {list(available)}")


class DegenerateLeaf(PulseboostError):
    """Leaf weight is undefined because the regularized hessian is not positive."""


class DegenerateLabels(PulseboostError):
    """Training labels contain a single class."""


class SchemaMismatch(PulseboostError):
    """Data columns do not match the schema a model or manifest declares."""


class VersionMismatch(PulseboostError):
    """A model file was written by an incompatible format version."""


class CorruptModel(PulseboostError):
    """A model file is truncated, malformed, or fails its checksum."""


class SingleClass(PulseboostError):
    """AUC is undefined without at least one positive and one negative."""


class InsufficientVideos(PulseboostError):
    """Not enough videos to satisfy the requested split."""


class ParseError(PulseboostError):
    """A manifest or CSV file could not be parsed."""

    def __init__(self, message: str, *, path: str | None = None,
                 line: int | None = None, column: str | int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class NonFiniteValue(PulseboostError):
    """A NaN or infinity appeared where only finite values are allowed."""

    def __init__(self, video_id: str, frame: int, column: str | int):
        self.video_id = video_id
        self.frame = frame
        self.column = column
        super().__init__(
            f"non-finite value in video {video_id!r}, frame {frame}, column {column}"
        )
