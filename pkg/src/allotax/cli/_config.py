# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import argparse
import hashlib
import json
import os

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Annotated, Any, Literal, Mapping, get_type_hints

from annotated_types import Ge, Gt, Interval, MinLen

from .. import __version__
from .._clean import DEFAULT_ARTIFACTS, CleaningConfig
from .._errors import DataError, InvalidArgumentError
from .._records import DEFAULT_DELETED_MARKERS, FieldMap
from .._rtd import DEFAULT_ALPHA
from .handlers import check_value

ENV_PREFIX = "ALLOTAX_"

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR"]

# Settings that change how a run executes but never what it writes.
EXECUTION_KEYS = frozenset({"out_dir", "threads", "log_level", "progress"})


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings shared by every subcommand.

    Built by `RunConfig.resolve` from, in increasing precedence, the field
    defaults, a JSON config file, ``ALLOTAX_*`` environment variables and
    command-line flags. Every value passes the same `annotated_types`
    checks as the equivalent flag.
    """

    corpora: dict[str, str] = field(default_factory=dict)
    out_dir: str = "."
    threads: Annotated[int, Ge(1)] = 1
    seed: Annotated[int, Ge(0)] = 0
    log_level: LogLevel = "WARNING"
    progress: bool = False

    orders: Annotated[tuple[int, ...], MinLen(1)] = (1, 2, 3)
    artifacts: tuple[str, ...] = DEFAULT_ARTIFACTS
    deleted_markers: tuple[str, ...] = tuple(sorted(DEFAULT_DELETED_MARKERS))
    split_hyphens: bool = False
    field_map: dict[str, str] = field(default_factory=dict)

    alpha: Annotated[float, Gt(0)] = DEFAULT_ALPHA
    bins_per_decade: Annotated[int, Ge(1)] = 15
    label_min_rank: Annotated[float, Ge(1)] = 100.0
    style: str | None = None

    lags: Annotated[tuple[int, ...], MinLen(1)] = (1, 6, 12)

    bootstrap_samples: Annotated[int, Ge(1)] = 1000
    bootstrap_fraction: Annotated[float, Interval(gt=0, le=1)] = 0.10
    ks_subsample: Annotated[int, Ge(1)] = 1000
    ks_repetitions: Annotated[int, Ge(1)] = 100

    def __post_init__(self):
        hints = get_type_hints(type(self), include_extras=True)
        for f in fields(self):
            try:
                value = check_value(f.name, hints[f.name], getattr(self, f.name))
            except argparse.ArgumentTypeError as e:
                raise InvalidArgumentError(f"config: {e}") from None
            object.__setattr__(self, f.name, value)

        try:
            FieldMap.from_mapping(self.field_map)
        except TypeError:
            raise InvalidArgumentError(f"config: unknown field_map key in {sorted(self.field_map)}") from None

    @classmethod
    def resolve(
        cls,
        path: str | Path | None = None,
        env: Mapping[str, str] | None = None,
        **overrides: Any,
    ) -> "RunConfig":
        """Merge defaults, config file, environment and flag overrides.

        Parameters
        ----------
        path : str | Path
            JSON object whose keys are field names.
        env : Mapping[str, str]
            Environment to read ``ALLOTAX_<FIELD>`` variables from; defaults
            to `os.environ`. Sequence values are comma-separated and mapping
            values are JSON.
        **overrides
            Flag values; `None` means "not given".

        Raises
        ------
        DataError
            If the config file is missing, not a JSON object or has unknown
            keys.
        InvalidArgumentError
            If a value fails its constraint.
        """
        known = {f.name for f in fields(cls)}
        values = {}

        if path is not None:
            values.update(_read_config_file(Path(path), known))

        env = os.environ if env is None else env
        for name in known:
            raw = env.get(ENV_PREFIX + name.upper())
            if raw is None:
                continue
            if name in ("corpora", "field_map"):
                try:
                    raw = json.loads(raw)
                except json.JSONDecodeError:
                    raise InvalidArgumentError(f"{ENV_PREFIX}{name.upper()} must be a JSON object") from None
            values[name] = raw

        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def semantic(self) -> dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if k not in EXECUTION_KEYS}

    def digest(self) -> str:
        """SHA-256 of the canonical JSON of every setting that can change an
        output. Thread count, output directory and logging are excluded."""
        canonical = json.dumps(self.semantic(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def meta(self, **extra: Any) -> dict[str, Any]:
        """Metadata block written at the top of every output file."""
        return {
            "tool": f"allotax {__version__}",
            "config_digest": self.digest(),
            "seed": self.seed,
            **extra,
        }

    def cleaning(self) -> CleaningConfig:
        return CleaningConfig(self.artifacts, self.split_hyphens)

    def fields_map(self) -> FieldMap:
        return FieldMap.from_mapping(self.field_map)

    def output(self, name: str | Path) -> Path:
        """Resolve an output name against `out_dir` (absolute paths are kept)."""
        return Path(self.out_dir) / name

    def corpus_path(self, value: str | Path) -> Path:
        """Map a corpus label from `corpora` to its path; other values are
        taken as paths."""
        return Path(self.corpora.get(str(value), value))

    def check_paths(self) -> None:
        """Fail if a configured corpus or style file does not exist.

        Raises
        ------
        DataError
            Naming the first missing path.
        """
        for label, path in sorted(self.corpora.items()):
            if not Path(path).exists():
                raise DataError(f"corpus {label!r}: {path} does not exist")
        if self.style is not None and not Path(self.style).is_file():
            raise DataError(f"style file {self.style} does not exist")


def _read_config_file(path: Path, known: set[str]) -> dict[str, Any]:
    if not path.is_file():
        raise DataError(f"config file {path} does not exist")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None
    except UnicodeDecodeError:
        raise DataError(f"{path}: config file is not valid UTF-8") from None
    if not isinstance(raw, dict):
        raise DataError(f"{path}: config must be a JSON object")

    unknown = sorted(set(raw) - known)
    if unknown:
        raise DataError(f"{path}: unknown config key(s) {', '.join(unknown)}")
    return raw
