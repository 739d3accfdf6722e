# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License


class AllotaxError(Exception):
    """Base class for every error raised by allotax."""

    pass


class InvalidArgumentError(AllotaxError, ValueError):
    """Raised when a function is called with arguments violating its
    preconditions (e.g. an n-gram order of zero or a rank below one)."""

    pass


class DataError(AllotaxError):
    """Raised when input data on disk or in memory cannot be used."""

    pass


class ParseError(DataError):
    """Raised when a file cannot be parsed.

    Parameters
    ----------
    message : str
        Description of the problem.
    path : str
        File being parsed, if known.
    line : int
        1-based line number where parsing failed, if known.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where = f"{where}{line}:"
        super().__init__(f"{where} {message}" if where else message)


class FetchError(DataError):
    """Raised when a dump cannot be downloaded from `url`."""

    def __init__(self, message: str, url: str):
        self.url = url
        super().__init__(f"{url}: {message}")


class DigestMismatchError(FetchError):
    """Raised when a downloaded file does not match its expected digest."""

    pass


class MissingMonthError(DataError):
    """Raised when a month requested from a panel is not covered by it."""

    def __init__(self, month: tuple[int, int]):
        self.month = month
        super().__init__(f"month {month[0]:04d}-{month[1]:02d} is not in the panel")


class InsufficientSpanError(DataError):
    """Raised when a panel covers too few months for the requested lag."""

    pass
