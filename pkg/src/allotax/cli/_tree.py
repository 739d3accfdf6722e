# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import argparse
import inspect

from typing import Any, Callable

from ._arg import is_arg
from ._config import RunConfig
from .handlers import get_kwargs

COMMANDS: dict[str, Callable] = {}

GLOBAL_KEYS = ("command", "func", "config", "out_dir", "threads", "seed", "log_level", "progress")


class DuplicateCommandError(Exception):
    """Raised when two functions are registered under the same name."""

    pass


def cmd(name: str) -> Callable:
    """Decorator registering a function as a subcommand.

    Every parameter must be annotated with `Arg[type, help]` and becomes a
    `--flag`; a parameter annotated `RunConfig` instead receives the resolved
    run configuration. The first line of the docstring is the help summary.

    Examples
    --------
    >>> @cmd("zipf")
    ... def zipf(stats: Arg[list[Path], "Comment stats files"], config: RunConfig):
    ...     '''Words-per-comment rank distribution.'''
    """

    def decorator(func):
        if name in COMMANDS:
            raise DuplicateCommandError(f"command {name!r} is already registered")
        COMMANDS[name] = func
        return func

    return decorator


def flag_name(name: str) -> str:
    return "--" + name.replace("_", "-")


def add_arguments(subparser: argparse.ArgumentParser, func: Callable) -> None:
    """Convert the `Arg`-annotated parameters of `func` into flags.

    Raises
    ------
    TypeError
        If a parameter is neither `Arg[...]` nor `RunConfig`.
    """
    for name, param in inspect.signature(func).parameters.items():
        if param.annotation is RunConfig:
            continue
        if not is_arg(param.annotation):
            raise TypeError(
                f"Parameter '{name}' of '{func.__name__}' "
                "must be annotated with `Arg[type, help]` or `RunConfig`."
            )

        help_text = param.annotation.__help_text__
        kwargs = get_kwargs(name, param.annotation.__type_hint__)
        kwargs["help"] = help_text or None
        kwargs["dest"] = name
        kwargs["required"] = param.default is inspect.Parameter.empty

        if param.default is not inspect.Parameter.empty:
            kwargs["default"] = param.default
            if help_text and param.default is not None:
                end = "." if help_text.endswith(".") else ""
                kwargs["help"] = f"{help_text.rstrip('.')} (default: %(default)s){end}"

        subparser.add_argument(flag_name(name), **kwargs)


def register(subparsers: argparse._SubParsersAction, formatter_class=None) -> None:
    """Add one subparser per registered command, in registration order."""
    for name, func in COMMANDS.items():
        doc = inspect.getdoc(func) or ""
        parser_kwargs = {"help": doc.split("\n")[0] or None, "description": doc or None}
        if formatter_class:
            parser_kwargs["formatter_class"] = formatter_class

        sub = subparsers.add_parser(name, **parser_kwargs)
        add_arguments(sub, func)
        sub.set_defaults(func=func)


def runner(args: argparse.Namespace, config: RunConfig) -> Any:
    """Call the selected command with its flags and the run configuration."""
    func = args.func
    func_args = {k: v for k, v in vars(args).items() if k not in GLOBAL_KEYS}

    for name, param in inspect.signature(func).parameters.items():
        if param.annotation is RunConfig:
            func_args[name] = config

    return func(**func_args)
