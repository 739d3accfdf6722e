# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

from ._arg import Arg
from ._config import RunConfig
from ._tree import cmd
from . import _commands  # noqa: F401
from ._main import build_parser, main, run

__all__ = ["Arg", "RunConfig", "build_parser", "cmd", "main", "run"]
