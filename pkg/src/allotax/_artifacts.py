# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import hashlib
import json

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence

from ._errors import ParseError

Meta = Mapping[str, Any]

_CHUNK = 1 << 20


def file_digest(path: str | Path) -> str:
    """Return the hex SHA-256 digest of a file's contents."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        while chunk := fh.read(_CHUNK):
            h.update(chunk)
    return h.hexdigest()


def metadata_lines(meta: Meta | None) -> list[str]:
    """Render a metadata mapping as `# key: value` comment lines.

    Keys are written in insertion order so callers control the layout; the
    CLI always starts with tool, config_digest and seed.
    """
    if not meta:
        return []
    return [f"# {key}: {_format_meta_value(value)}" for key, value in meta.items()]


def _format_meta_value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    return str(value)


def format_float(value: float) -> str:
    # Note: repr round-trips exactly
    return repr(float(value))


def write_tsv(
    path: str | Path,
    rows: Iterable[Sequence[Any]],
    header: Sequence[str] | None = None,
    meta: Meta | None = None,
) -> Path:
    """Write rows as tab-separated text preceded by a metadata block.

    Parameters
    ----------
    path : str | Path
        Destination file. Parent directories are created.
    rows : Iterable[Sequence]
        Rows of already-formattable values; floats are written with `repr`.
    header : Sequence[str]
        Optional column header line.
    meta : Mapping
        Optional metadata written as `#` comment lines.

    Returns
    -------
    Path
        The written path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in metadata_lines(meta):
            fh.write(line + "\n")
        if header is not None:
            fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(_cell(v) for v in row) + "\n")
    return path


def write_text(path: str | Path, text: str, meta: Meta | None = None) -> Path:
    """Write free-form text preceded by the same metadata block as `write_tsv`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in metadata_lines(meta):
            fh.write(line + "\n")
        fh.write(text)
    return path


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_json(path: str | Path, payload: Mapping[str, Any], meta: Meta | None = None) -> Path:
    """Write a JSON document whose first key is a `meta` object."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"meta": dict(meta or {})}
    document.update(payload)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(document, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    return path


def _decode(raw: bytes, path: str | Path, number: int) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not valid UTF-8 at byte {e.start}", path=str(path), line=number) from None


def iter_data_lines(path: str | Path) -> Iterator[tuple[int, str]]:
    """Yield `(line_number, line)` for non-comment, non-blank lines.

    Raises
    ------
    ParseError
        If a line is not valid UTF-8.
    """
    with open(path, "rb") as fh:
        for number, raw in enumerate(fh, start=1):
            line = _decode(raw, path, number).rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            yield number, line


def read_metadata(path: str | Path) -> dict[str, str]:
    """Read the leading `# key: value` block of a file written by `write_tsv`."""
    meta = {}
    with open(path, "rb") as fh:
        for number, raw in enumerate(fh, start=1):
            line = _decode(raw, path, number)
            if not line.startswith("# "):
                break
            key, _, value = line[2:].rstrip("\r\n").partition(": ")
            meta[key] = value
    return meta


@dataclass(frozen=True, slots=True)
class SourceFile:
    """An input file identified by its content digest."""

    path: str
    sha256: str
    size: int
    url: str = ""

    @classmethod
    def from_path(cls, path: str | Path, url: str = "") -> "SourceFile":
        path = Path(path)
        return cls(str(path), file_digest(path), path.stat().st_size, url)

    def as_dict(self) -> dict[str, Any]:
        entry = {"path": self.path, "sha256": self.sha256, "size": self.size}
        if self.url:
            entry["url"] = self.url
        return entry
