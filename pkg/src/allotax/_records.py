# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import json
import logging

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, BinaryIO, Iterable, Iterator

from ._artifacts import Meta, write_tsv
from ._errors import ParseError

logger = logging.getLogger(__name__)

DEFAULT_DELETED_MARKERS = frozenset({"[deleted]", "[removed]"})

AUTOMODERATOR = "AutoModerator"

# 9999-12-31T23:59:59Z, the last second `datetime` can represent
MAX_TIMESTAMP = 253402300799


@dataclass(frozen=True, slots=True)
class Comment:
    """One comment record of a dump.

    Parsing never rejects a record for its content; `filter_comments` is
    where the author, body and timestamp invariants are enforced.
    """

    author: str
    body: str
    created_utc: int
    source: str
    id: str


@dataclass(frozen=True)
class FieldMap:
    """Names of the JSON fields holding each `Comment` attribute.

    Defaults follow the Pushshift comment dump conventions.
    """

    author: str = "author"
    body: str = "body"
    created_utc: str = "created_utc"
    source: str = "subreddit"
    id: str = "id"

    @classmethod
    def from_mapping(cls, mapping: dict[str, str] | None) -> "FieldMap":
        return cls(**(mapping or {}))


@dataclass(frozen=True, slots=True)
class SkipEntry:
    line: int
    reason: str


@dataclass
class SkipReport:
    """Lines of a dump that could not be parsed."""

    source: str = ""
    entries: list[SkipEntry] = field(default_factory=list)

    def add(self, line: int, reason: str) -> None:
        self.entries.append(SkipEntry(line, reason))

    def extend(self, other: "SkipReport") -> None:
        self.entries.extend(other.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def write(self, path: str | Path, meta: Meta | None = None) -> Path:
        """Write the report as TSV with columns `line` and `reason`."""
        return write_tsv(
            path,
            ((e.line, e.reason) for e in self.entries),
            header=("line", "reason"),
            meta=meta,
        )


def _coerce_timestamp(value: Any) -> int:
    # Note: Some dumps store created_utc as a string or a float
    if value is None or isinstance(value, bool):
        return 0
    try:
        return int(float(value))
    except (TypeError, ValueError, OverflowError):
        return 0


def _coerce_str(value: Any) -> str:
    if value is None:
        return ""
    return value if isinstance(value, str) else str(value)


def record_to_comment(record: dict[str, Any], fields: FieldMap = FieldMap()) -> Comment:
    """Map a decoded JSON object onto a `Comment`; unknown keys are ignored."""
    return Comment(
        author=_coerce_str(record.get(fields.author)),
        body=_coerce_str(record.get(fields.body)),
        created_utc=_coerce_timestamp(record.get(fields.created_utc)),
        source=_coerce_str(record.get(fields.source)),
        id=_coerce_str(record.get(fields.id)),
    )


def parse_ndjson(
    stream: BinaryIO | Iterable[bytes],
    fields: FieldMap = FieldMap(),
    skips: SkipReport | None = None,
    strict: bool = False,
) -> Iterator[Comment]:
    """Parse a newline-delimited JSON comment dump.

    Parameters
    ----------
    stream : BinaryIO | Iterable[bytes]
        Binary lines of the dump (already decompressed).
    fields : FieldMap
        JSON field names to read.
    skips : SkipReport
        Report receiving one entry per malformed line. Ignored in strict mode.
    strict : bool
        If `True`, the first malformed line raises instead of being skipped.

    Yields
    ------
    Comment
        One record per valid, non-empty line, in file order.

    Raises
    ------
    ParseError
        In strict mode, on the first line that is not a JSON object.
    """
    for number, raw in enumerate(stream, start=1):
        if not raw.strip():
            continue

        try:
            record = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            reason = f"invalid json: {e.__class__.__name__}"
            if strict:
                raise ParseError(reason, path=skips.source if skips is not None else None, line=number)
            logger.debug("skipping line %d: %s", number, reason)
            if skips is not None:
                skips.add(number, reason)
            continue

        if not isinstance(record, dict):
            reason = "not a json object"
            if strict:
                raise ParseError(reason, path=skips.source if skips is not None else None, line=number)
            if skips is not None:
                skips.add(number, reason)
            continue

        yield record_to_comment(record, fields)


@dataclass
class RejectionTally:
    """Number of records dropped by `filter_comments`, per reason."""

    deleted_author: int = 0
    deleted_body: int = 0
    missing_timestamp: int = 0
    automoderator: int = 0

    @property
    def total(self) -> int:
        return (
            self.deleted_author
            + self.deleted_body
            + self.missing_timestamp
            + self.automoderator
        )

    def merge(self, other: "RejectionTally") -> "RejectionTally":
        return RejectionTally(
            self.deleted_author + other.deleted_author,
            self.deleted_body + other.deleted_body,
            self.missing_timestamp + other.missing_timestamp,
            self.automoderator + other.automoderator,
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "deleted_author": self.deleted_author,
            "deleted_body": self.deleted_body,
            "missing_timestamp": self.missing_timestamp,
            "automoderator": self.automoderator,
        }


def rejection_reason(comment: Comment, deleted_markers: frozenset[str]) -> str | None:
    """Return the first rule a comment breaks, or `None` if it is retained."""
    if not comment.author or comment.author in deleted_markers:
        return "deleted_author"
    if comment.author == AUTOMODERATOR:
        return "automoderator"
    if not comment.body or comment.body in deleted_markers:
        return "deleted_body"
    if not 0 < comment.created_utc <= MAX_TIMESTAMP:
        return "missing_timestamp"
    return None


def filter_comments(
    records: Iterable[Comment],
    deleted_markers: Iterable[str] = DEFAULT_DELETED_MARKERS,
) -> tuple[list[Comment], RejectionTally]:
    """Drop deleted, bot-authored and undated comments.

    Parameters
    ----------
    records : Iterable[Comment]
        Parsed records.
    deleted_markers : Iterable[str]
        Author/body values that mark deleted content.

    Returns
    -------
    tuple[list[Comment], RejectionTally]
        Retained comments in input order and the count per rejection reason.
        Each rejected record is counted once, under the first rule it breaks.
    """
    markers = frozenset(deleted_markers)
    kept = []
    counts = Counter()
    for comment in records:
        reason = rejection_reason(comment, markers)
        if reason is None:
            kept.append(comment)
        else:
            counts[reason] += 1
    return kept, RejectionTally(**counts)
