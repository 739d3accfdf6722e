# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import json
import logging

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import partial
from itertools import islice
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence

from tqdm import tqdm

from ._artifacts import Meta, SourceFile, iter_data_lines, write_json, write_tsv
from ._clean import CleaningConfig, clean_tokens, extract_ngrams
from ._dominance import MonthlyPanel, panel_from_counts, utc_month
from ._errors import DataError, InvalidArgumentError, ParseError
from ._frequency import FrequencyTable, persist_frequency_table
from ._openers import open_dump
from ._records import (
    DEFAULT_DELETED_MARKERS,
    Comment,
    FieldMap,
    RejectionTally,
    SkipReport,
    filter_comments,
    parse_ndjson,
)
from ._types import Month

logger = logging.getLogger(__name__)

DEFAULT_ORDERS = (1, 2, 3)
DEFAULT_CHUNK_SIZE = 5000


@dataclass(frozen=True, slots=True)
class CommentStat:
    """Per-comment summary kept after ingest: identity, time and length."""

    id: str
    created_utc: int
    source: str
    n_words: int


@dataclass
class SourceStats:
    comments: int = 0
    authors: set[str] = field(default_factory=set)

    def as_dict(self) -> dict[str, Any]:
        n_authors = len(self.authors)
        return {
            "comments": self.comments,
            "authors": n_authors,
            "comments_per_author": self.comments / n_authors if n_authors else 0.0,
        }


@dataclass(frozen=True)
class CorpusManifest:
    """Provenance and totals of one ingested corpus.

    Attributes
    ----------
    label : str
        Corpus label.
    record_count : int
        Retained comments.
    token_count : int
        Tokens over all retained comments after cleaning.
    date_range : tuple[int, int] | None
        Smallest and largest `created_utc` of retained comments.
    sources : list[SourceFile]
        Input files with their digests.
    per_source : dict
        Comments, unique authors and comments per author for each source
        (subreddit) value.
    rejections : dict[str, int]
        Dropped records per rejection reason.
    skipped_lines : int
        Malformed lines over all inputs.
    orders : tuple[int, ...]
        N-gram orders counted.
    """

    label: str
    record_count: int
    token_count: int
    date_range: tuple[int, int] | None
    sources: list[SourceFile]
    per_source: dict[str, dict[str, Any]] = field(default_factory=dict)
    rejections: dict[str, int] = field(default_factory=dict)
    skipped_lines: int = 0
    orders: tuple[int, ...] = DEFAULT_ORDERS

    def as_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "record_count": self.record_count,
            "token_count": self.token_count,
            "date_range": list(self.date_range) if self.date_range else None,
            "orders": list(self.orders),
            "sources": [s.as_dict() for s in self.sources],
            "per_source": self.per_source,
            "rejections": self.rejections,
            "skipped_lines": self.skipped_lines,
        }

    def to_json(self, path: str | Path, meta: Meta | None = None) -> Path:
        return write_json(path, self.as_dict(), meta=meta)

    @classmethod
    def from_json(cls, path: str | Path) -> "CorpusManifest":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise DataError(f"{path}: malformed manifest ({e.__class__.__name__})") from None
        try:
            return cls(
                label=raw["label"],
                record_count=raw["record_count"],
                token_count=raw["token_count"],
                date_range=tuple(raw["date_range"]) if raw["date_range"] else None,
                sources=[SourceFile(s["path"], s["sha256"], s["size"], s.get("url", "")) for s in raw["sources"]],
                per_source=raw.get("per_source", {}),
                rejections=raw.get("rejections", {}),
                skipped_lines=raw.get("skipped_lines", 0),
                orders=tuple(raw.get("orders", DEFAULT_ORDERS)),
            )
        except (KeyError, TypeError) as e:
            raise DataError(f"{path}: malformed manifest ({e})") from None

    def verify(self) -> None:
        """Check every source file still matches its recorded digest.

        Raises
        ------
        DataError
            If a file is missing or its content changed.
        """
        for source in self.sources:
            if not Path(source.path).exists():
                raise DataError(f"source file {source.path} is missing")
            current = SourceFile.from_path(source.path)
            if current.sha256 != source.sha256:
                raise DataError(f"source file {source.path} changed since ingest")


@dataclass
class ChunkCounts:
    orders: dict[int, Counter]
    months: dict[Month, Counter]
    stats: list[CommentStat]


def count_chunk(comments: Sequence[Comment], orders: tuple[int, ...], cleaning: CleaningConfig) -> ChunkCounts:
    """Tokenize a chunk of retained comments and count its n-grams.

    N-grams never span two comments.
    """
    counts = {n: Counter() for n in orders}
    months = defaultdict(Counter)
    stats = []
    for comment in comments:
        tokens = clean_tokens(comment.body, cleaning)
        for n in orders:
            counts[n].update(extract_ngrams(tokens, n))
        months[utc_month(comment.created_utc)].update(tokens)
        stats.append(CommentStat(comment.id, comment.created_utc, comment.source, len(tokens)))
    return ChunkCounts(counts, dict(months), stats)


@dataclass
class IngestResult:
    tables: dict[int, FrequencyTable]
    panel: MonthlyPanel
    comment_stats: list[CommentStat]
    manifest: CorpusManifest
    skips: list[SkipReport]

    def write(self, directory: str | Path, meta: Meta | None = None) -> list[Path]:
        """Write tables, panel, comment stats, manifest and skip report.

        Files are named ``<label>.order<n>.tsv``, ``<label>.panel.tsv``,
        ``<label>.comments.tsv``, ``<label>.manifest.json`` and
        ``<label>.skips.tsv``.
        """
        directory = Path(directory)
        label = self.manifest.label
        paths = [
            persist_frequency_table(table, directory / f"{label}.order{n}.tsv", meta)
            for n, table in sorted(self.tables.items())
        ]
        paths.append(self.panel.write(directory / f"{label}.panel.tsv", meta))
        paths.append(write_comment_stats(self.comment_stats, directory / f"{label}.comments.tsv", meta))
        paths.append(self.manifest.to_json(directory / f"{label}.manifest.json", meta))

        rows = ((report.source, e.line, e.reason) for report in self.skips for e in report.entries)
        paths.append(write_tsv(directory / f"{label}.skips.tsv", rows, header=("file", "line", "reason"), meta=meta))
        return paths


def _chunks(comments: Iterable[Comment], size: int) -> Iterator[list[Comment]]:
    it = iter(comments)
    while chunk := list(islice(it, size)):
        yield chunk


def _check_orders(orders: Iterable[int]) -> tuple[int, ...]:
    orders = tuple(sorted(set(orders)))
    if not orders or any(isinstance(n, bool) or not isinstance(n, int) or n < 1 for n in orders):
        raise InvalidArgumentError(f"orders must be positive integers, got {orders!r}")
    return orders


def ingest_corpus(
    paths: Sequence[str | Path],
    label: str,
    orders: Iterable[int] = DEFAULT_ORDERS,
    cleaning: CleaningConfig = CleaningConfig(),
    fields: FieldMap = FieldMap(),
    deleted_markers: Iterable[str] = DEFAULT_DELETED_MARKERS,
    threads: int = 1,
    strict: bool = False,
    progress: bool = False,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> IngestResult:
    """Parse, filter, clean and count one corpus made of one or more dumps.

    Records are read sequentially; cleaning and counting run over chunks of
    `chunk_size` retained comments, in a process pool when `threads` > 1.
    Chunk results are merged in input order, so tables, panel and stats do
    not depend on `threads`.

    Parameters
    ----------
    paths : Sequence[str | Path]
        Dump files; `.zst`/`.zstd` and `.gz` are decompressed on the fly.
    label : str
        Corpus label given to every table.
    orders : Iterable[int]
        N-gram orders to count.
    cleaning : CleaningConfig
        Token cleaning rules.
    fields : FieldMap
        JSON field names of the dumps.
    deleted_markers : Iterable[str]
        Author/body values that mark deleted content.
    threads : int
        Worker processes.
    strict : bool
        Abort on the first malformed line instead of skipping it.
    progress : bool
        Show a tqdm progress bar of processed comments.
    chunk_size : int
        Comments per work unit.

    Returns
    -------
    IngestResult

    Raises
    ------
    InvalidArgumentError
        On an empty path list, bad orders or a non-positive thread count.
    DataError
        If a dump file does not exist.
    ParseError
        In strict mode, on the first malformed line.
    """
    if not paths:
        raise InvalidArgumentError("at least one dump file is required")
    if threads < 1 or chunk_size < 1:
        raise InvalidArgumentError("threads and chunk_size must be >= 1")
    orders = _check_orders(orders)
    markers = frozenset(deleted_markers)

    paths = [Path(p) for p in paths]
    for path in paths:
        if not path.is_file():
            raise DataError(f"dump file {path} does not exist")

    tally = RejectionTally()
    skips = []
    per_source = defaultdict(SourceStats)

    def retained() -> Iterator[Comment]:
        nonlocal tally
        for path in paths:
            report = SkipReport(source=str(path))
            skips.append(report)
            with open_dump(path) as fh:
                for chunk in _chunks(parse_ndjson(fh, fields, report, strict), chunk_size):
                    kept, rejected = filter_comments(chunk, markers)
                    tally = tally.merge(rejected)
                    for comment in kept:
                        stats = per_source[comment.source]
                        stats.comments += 1
                        stats.authors.add(comment.author)
                    yield from kept
            logger.info("%s: %d malformed line(s) skipped", path, len(report))

    worker = partial(count_chunk, orders=orders, cleaning=cleaning)
    totals = {n: Counter() for n in orders}
    months = defaultdict(Counter)
    comment_stats = []

    with tqdm(desc=f"ingest {label}", unit=" comments", disable=not progress) as bar:

        def merge(result: ChunkCounts) -> None:
            for n in orders:
                totals[n].update(result.orders[n])
            for month, counter in result.months.items():
                months[month].update(counter)
            comment_stats.extend(result.stats)
            bar.update(len(result.stats))

        chunks = _chunks(retained(), chunk_size)
        if threads > 1:
            with Pool(threads) as pool:
                for result in pool.imap(worker, chunks):
                    merge(result)
        else:
            for chunk in chunks:
                merge(worker(chunk))

    tables = {n: FrequencyTable(n, totals[n], label=label) for n in orders}
    times = [s.created_utc for s in comment_stats]

    manifest = CorpusManifest(
        label=label,
        record_count=len(comment_stats),
        token_count=sum(s.n_words for s in comment_stats),
        date_range=(min(times), max(times)) if times else None,
        sources=[SourceFile.from_path(p) for p in paths],
        per_source={src: per_source[src].as_dict() for src in sorted(per_source)},
        rejections=tally.as_dict(),
        skipped_lines=sum(len(r) for r in skips),
        orders=orders,
    )
    logger.info(
        "ingested %s: %d comments, %d tokens, %d rejected",
        label,
        manifest.record_count,
        manifest.token_count,
        tally.total,
    )

    return IngestResult(tables, panel_from_counts(months, label), comment_stats, manifest, skips)


def write_comment_stats(stats: Iterable[CommentStat], path: str | Path, meta: Meta | None = None) -> Path:
    rows = ((s.id, s.created_utc, s.source, s.n_words) for s in stats)
    return write_tsv(path, rows, header=("id", "created_utc", "source", "n_words"), meta=meta)


def load_comment_stats(path: str | Path) -> list[CommentStat]:
    """Read a file written by `write_comment_stats`.

    Raises
    ------
    ParseError
        On a missing header or a malformed row.
    """
    path = str(path)
    stats = []
    lines = iter_data_lines(path)
    header = next(lines, None)
    if header is None or header[1].split("\t") != ["id", "created_utc", "source", "n_words"]:
        raise ParseError("missing comment stats header", path=path, line=header[0] if header else None)

    for number, line in lines:
        parts = line.split("\t")
        if len(parts) != 4:
            raise ParseError(f"expected 4 columns, got {len(parts)}", path=path, line=number)
        try:
            stats.append(CommentStat(parts[0], int(parts[1]), parts[2], int(parts[3])))
        except ValueError:
            raise ParseError("created_utc and n_words must be integers", path=path, line=number) from None
    return stats
