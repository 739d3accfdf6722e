# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import gzip
import io

from pathlib import Path
from typing import BinaryIO, Callable

import zstandard as zstd

OPENERS: dict[str, Callable[[Path], BinaryIO]] = {}


def register_opener(*suffixes: str):
    """Decorator to register a binary opener for one or more file suffixes.

    Parameters
    ----------
    *suffixes : str
        Lower-case file suffixes including the dot (e.g. `".zst"`).

    Returns
    -------
    callable
        A decorator that registers the function in the `OPENERS` registry.
    """

    def decorator(func):
        for s in suffixes:
            OPENERS[s] = func
        return func

    return decorator


@register_opener(".zst", ".zstd")
def open_zstd(path: Path) -> BinaryIO:
    # Note: Pushshift archives are compressed with a long window
    fh = open(path, "rb")
    reader = zstd.ZstdDecompressor(max_window_size=2**31).stream_reader(fh, closefd=True)
    return io.BufferedReader(reader)


@register_opener(".gz")
def open_gzip(path: Path) -> BinaryIO:
    return gzip.open(path, "rb")


def open_dump(path: str | Path) -> BinaryIO:
    """Open a newline-delimited JSON dump, decompressing by file extension.

    Unregistered suffixes (e.g. `.ndjson`, `.jsonl`, `.json`) are read as
    plain bytes.
    """
    path = Path(path)
    opener = OPENERS.get(path.suffix.lower())
    if opener is None:
        return open(path, "rb")
    return opener(path)
