# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from ._artifacts import Meta, iter_data_lines, metadata_lines
from ._errors import InvalidArgumentError, ParseError


@dataclass(frozen=True)
class FrequencyTable:
    """Counts of the n-grams of one order in one corpus (or one month).

    Attributes
    ----------
    order : int
        N-gram order.
    counts : Mapping[str, int]
        Read-only mapping from n-gram to a positive count.
    total : int
        Sum of all counts.
    label : str
        Name of the corpus the table was counted from.
    """

    order: int
    counts: Mapping[str, int] = field(default_factory=dict)
    total: int = -1
    label: str = ""

    def __post_init__(self):
        if isinstance(self.order, bool) or not isinstance(self.order, int) or self.order < 1:
            raise InvalidArgumentError(f"order must be an integer >= 1, got {self.order!r}")

        counts = dict(self.counts)
        total = 0
        for ngram, count in counts.items():
            if count < 1:
                raise InvalidArgumentError(f"count of {ngram!r} must be >= 1, got {count}")
            total += count

        if self.total == -1:
            object.__setattr__(self, "total", total)
        elif self.total != total:
            raise InvalidArgumentError(
                f"total {self.total} does not match the sum of counts {total}"
            )
        object.__setattr__(self, "counts", MappingProxyType(counts))

    def __len__(self) -> int:
        return len(self.counts)

    def __contains__(self, ngram: str) -> bool:
        return ngram in self.counts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        return (
            self.order == other.order
            and self.total == other.total
            and self.label == other.label
            and dict(self.counts) == dict(other.counts)
        )

    def __hash__(self):
        return hash((self.order, self.total, self.label, len(self.counts)))

    def __reduce__(self):
        # Note: MappingProxyType does not pickle, rebuild from a plain dict
        return (FrequencyTable, (self.order, dict(self.counts), self.total, self.label))

    def get(self, ngram: str) -> int:
        return self.counts.get(ngram, 0)

    def sorted_items(self) -> list[tuple[str, int]]:
        """Items by descending count, then lexicographically."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def relabel(self, label: str) -> "FrequencyTable":
        return FrequencyTable(self.order, self.counts, self.total, label)


def count_frequencies(ngrams: Iterable[str], order: int, label: str = "") -> FrequencyTable:
    """Count an n-gram stream into a `FrequencyTable`.

    The total is the length of the stream; an empty stream gives an empty
    table with total 0.
    """
    return FrequencyTable(order, Counter(ngrams), label=label)


def merge_tables(tables: Iterable[FrequencyTable], label: str | None = None) -> FrequencyTable:
    """Sum partial tables of the same order.

    Merging is associative and commutative, so shard tables can be combined
    in any grouping with the same result.

    Raises
    ------
    InvalidArgumentError
        If no tables are given or their orders differ.
    """
    tables = list(tables)
    if not tables:
        raise InvalidArgumentError("at least one table is required to merge")

    order = tables[0].order
    merged = Counter()
    for table in tables:
        if table.order != order:
            raise InvalidArgumentError(
                f"cannot merge tables of orders {order} and {table.order}"
            )
        merged.update(table.counts)

    return FrequencyTable(order, merged, label=tables[0].label if label is None else label)


def _header_line(table: FrequencyTable) -> str:
    return f"order={table.order}\ttotal={table.total}\tlabel={table.label}"


def persist_frequency_table(
    table: FrequencyTable, path: str | Path, meta: Meta | None = None
) -> Path:
    """Write a table as TSV.

    The layout is an optional `#` metadata block, a header line
    `order=<n><TAB>total=<t><TAB>label=<name>`, then one `ngram<TAB>count`
    line per entry sorted by descending count and then lexicographically.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in metadata_lines(meta):
            fh.write(line + "\n")
        fh.write(_header_line(table) + "\n")
        for ngram, count in table.sorted_items():
            fh.write(f"{ngram}\t{count}\n")
    return path


def _parse_header(line: str, path: str, number: int) -> tuple[int, int, str]:
    fields = {}
    for part in line.split("\t"):
        key, sep, value = part.partition("=")
        if not sep:
            raise ParseError(f"malformed header field {part!r}", path, number)
        fields[key] = value

    try:
        order = int(fields["order"])
        total = int(fields["total"])
    except (KeyError, ValueError):
        raise ParseError("header must carry integer order and total", path, number)

    if order < 1:
        raise ParseError(f"header order must be >= 1, got {order}", path, number)

    return order, total, fields.get("label", "")


def load_frequency_table(path: str | Path) -> FrequencyTable:
    """Read a table written by `persist_frequency_table`.

    Raises
    ------
    ParseError
        With the offending line number, if the header is missing or
        malformed, a data line is malformed, an n-gram does not have the
        header's order, an n-gram repeats, or the counts do not add up to
        the header's total.
    """
    path = str(path)
    lines = iter_data_lines(path)

    try:
        number, header = next(lines)
    except StopIteration:
        raise ParseError("missing header line", path)
    order, total, label = _parse_header(header, path, number)

    counts = {}
    running = 0
    for number, line in lines:
        ngram, sep, raw_count = line.rpartition("\t")
        if not sep or not ngram:
            raise ParseError("expected 'ngram<TAB>count'", path, number)

        try:
            count = int(raw_count)
        except ValueError:
            raise ParseError(f"count {raw_count!r} is not an integer", path, number)
        if count < 1:
            raise ParseError(f"count must be >= 1, got {count}", path, number)

        if len(ngram.split(" ")) != order:
            raise ParseError(
                f"n-gram {ngram!r} does not have the header order {order}", path, number
            )
        if ngram in counts:
            raise ParseError(f"duplicate n-gram {ngram!r}", path, number)

        counts[ngram] = count
        running += count

    if running != total:
        raise ParseError(f"counts sum to {running} but header total is {total}", path)

    return FrequencyTable(order, counts, total, label)
