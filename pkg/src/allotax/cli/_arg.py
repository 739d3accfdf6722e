# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

from typing import Any


class Arg:
    """Type annotation for a subcommand flag with help text.

    Raises
    ------
    TypeError
        If Arg[...] does not hold a type, or a type and a help string.

    Examples
    --------
    >>> Arg[int]                            # no help
    >>> Arg[Path, "Frequency table of A"]   # with help
    """

    def __class_getitem__(cls, params: Any):
        if isinstance(params, tuple) and len(params) == 2:
            type_hint, help_text = params
        elif not isinstance(params, tuple):
            type_hint, help_text = params, ""
        else:
            raise TypeError(
                "Arg[...] takes 1 parameter (type) or 2 parameters (type and help text)"
            )

        if not isinstance(help_text, str):
            raise TypeError("Help text must be a string.")

        return type(
            "ArgType",
            (),
            {
                "__type_hint__": type_hint,
                "__help_text__": help_text,
                "__origin__": cls,
                "__args__": (type_hint, help_text),
            },
        )


def is_arg(annotation: Any) -> bool:
    """Check if a parameter annotation is an `Arg[...]`."""
    return getattr(annotation, "__origin__", None) is Arg
