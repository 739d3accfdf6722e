# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import json
import logging
import time

from pathlib import Path
from typing import Mapping

import requests

from tqdm import tqdm

from ._artifacts import SourceFile, file_digest
from ._errors import DigestMismatchError, FetchError

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 16
DEFAULT_TIMEOUT = 30.0
DEFAULT_RETRIES = 5
USER_AGENT = "allotax-fetch"


class _Retryable(Exception):
    pass


def _partial_path(dest: Path) -> Path:
    return dest.with_name(dest.name + ".part")


def _validator_path(part: Path) -> Path:
    return part.with_name(part.name + ".json")


def _validators(headers: Mapping[str, str]) -> dict[str, str]:
    found = {}
    if etag := headers.get("ETag"):
        found["etag"] = etag
    if modified := headers.get("Last-Modified"):
        found["last_modified"] = modified
    return found


def _load_validators(part: Path) -> dict[str, str]:
    path = _validator_path(part)
    if not path.exists():
        return {}
    try:
        stored = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError):
        stored = None
    if not isinstance(stored, dict):
        logger.warning("ignoring unreadable %s", path)
        return {}
    return stored


def _if_range(stored: Mapping[str, str]) -> str | None:
    # Note: weak ETags are not allowed in If-Range
    etag = stored.get("etag")
    if etag and not etag.startswith("W/"):
        return etag
    return stored.get("last_modified")


def _discard(part: Path) -> None:
    part.unlink(missing_ok=True)
    _validator_path(part).unlink(missing_ok=True)


def _download_once(url: str, part: Path, timeout: float, progress: bool) -> None:
    """Continue downloading `url` into `part`, resuming from its size.

    The ETag and Last-Modified of the response that started `part` are kept
    in ``<part>.json`` and sent back as ``If-Range`` when resuming, so a
    remote file that changed in between is downloaded again from the start.
    """
    offset = part.stat().st_size if part.exists() else 0
    headers = {"User-Agent": USER_AGENT}
    stored = {}
    if offset:
        headers["Range"] = f"bytes={offset}-"
        stored = _load_validators(part)
        if condition := _if_range(stored):
            headers["If-Range"] = condition

    try:
        response = requests.get(url, headers=headers, stream=True, timeout=timeout)
    except (requests.ConnectionError, requests.Timeout) as e:
        raise _Retryable(str(e)) from e

    with response:
        status = response.status_code
        if status == 416 and offset:
            # Note: the part file already holds the whole resource
            return
        if status >= 500:
            raise _Retryable(f"server error {status}")
        if status == 404:
            raise FetchError("not found (404)", url)
        if status not in (200, 206):
            raise FetchError(f"unexpected status {status}", url)

        received = _validators(response.headers)
        if status == 206:
            changed = [k for k, v in stored.items() if k in received and received[k] != v]
            if changed:
                _discard(part)
                raise DigestMismatchError(
                    f"remote file changed during resume ({changed[0]} {stored[changed[0]]} -> {received[changed[0]]})",
                    url,
                )
        else:
            if offset:
                logger.info("%s did not resume the partial download; restarting", url)
                offset = 0
            _validator_path(part).write_text(json.dumps(received), encoding="utf-8")
        mode = "ab" if status == 206 else "wb"

        total = response.headers.get("Content-Length")
        total = int(total) + offset if total is not None else None

        try:
            with open(part, mode) as fh, tqdm(
                total=total,
                initial=offset,
                unit="B",
                unit_scale=True,
                desc=part.name,
                disable=not progress,
            ) as bar:
                for chunk in response.iter_content(CHUNK_SIZE):
                    fh.write(chunk)
                    bar.update(len(chunk))
        except (requests.ConnectionError, requests.Timeout, requests.exceptions.ChunkedEncodingError) as e:
            raise _Retryable(str(e)) from e

    if total is not None and part.stat().st_size < total:
        raise _Retryable(f"connection closed after {part.stat().st_size} of {total} bytes")


def fetch_dump(
    url: str,
    dest: str | Path,
    expected_sha256: str | None = None,
    max_retries: int = DEFAULT_RETRIES,
    backoff: float = 1.0,
    timeout: float = DEFAULT_TIMEOUT,
    progress: bool = False,
) -> SourceFile:
    """Download a dump, resuming an interrupted transfer where possible.

    Bytes are written to ``<dest>.part``, which is continued with an HTTP
    ``Range`` request on the next attempt (or the next call). Failed
    attempts are retried up to `max_retries` times, sleeping
    ``backoff * 2 ** attempt`` seconds in between. The part file is moved to
    `dest` only once complete and verified. Validators of the first
    response are kept in ``<dest>.part.json`` and sent as ``If-Range``.

    Parameters
    ----------
    url : str
        HTTP(S) location of the dump.
    dest : str | Path
        Final path of the file.
    expected_sha256 : str
        Hex digest the complete file must have.
    max_retries : int
        Retries after the first attempt for network and 5xx failures.
    backoff : float
        Base delay in seconds.
    timeout : float
        Per-request timeout in seconds.
    progress : bool
        Show a tqdm progress bar.

    Returns
    -------
    SourceFile
        Path, digest, size and origin of the downloaded file.

    Raises
    ------
    FetchError
        On a 404 or other client error, or when retries are exhausted.
    DigestMismatchError
        If the completed file does not match `expected_sha256`, or a resumed
        response carries a different ETag or Last-Modified than the one the
        part file was started from. The part file is removed so the next
        call starts over.
    """
    dest = Path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    part = _partial_path(dest)

    for attempt in range(max_retries + 1):
        try:
            _download_once(url, part, timeout, progress)
            break
        except _Retryable as e:
            if attempt == max_retries:
                raise FetchError(f"giving up after {attempt + 1} attempt(s): {e}", url) from None
            delay = backoff * 2**attempt
            logger.warning("fetch %s failed (%s); retrying in %.1fs", url, e, delay)
            time.sleep(delay)

    digest = file_digest(part)
    if expected_sha256 is not None and digest != expected_sha256.lower():
        _discard(part)
        raise DigestMismatchError(f"sha256 {digest} does not match expected {expected_sha256}", url)

    part.replace(dest)
    _validator_path(part).unlink(missing_ok=True)
    logger.info("fetched %s -> %s (%s)", url, dest, digest)
    return SourceFile(str(dest), digest, dest.stat().st_size, url)
