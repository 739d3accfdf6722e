import argparse
import types

from enum import Enum
from typing import Annotated, Any, Literal, Union, get_args, get_origin

from annotated_types import Len, MaxLen, MinLen

from ._annotated import ANNOTATED_HANDLERS
from ._type import CONTAINER_ORIGINS, TYPE_HANDLERS

LENGTH_TYPES = (MaxLen, MinLen, Len)


def unwrap_optional(arg_type: Any) -> Any:
    """Return `T` for `T | None`, otherwise `arg_type` unchanged."""
    if get_origin(arg_type) in (Union, types.UnionType):
        arms = [a for a in get_args(arg_type) if a is not type(None)]
        if len(arms) == 1:
            return arms[0]
    return arg_type


def _type_handler(arg_type: Any):
    origin = get_origin(arg_type)
    if origin is Literal:
        return TYPE_HANDLERS[Literal]
    if isinstance(arg_type, type) and issubclass(arg_type, Enum):
        return TYPE_HANDLERS[Enum]
    return TYPE_HANDLERS.get(arg_type) or TYPE_HANDLERS.get(origin)


def get_kwargs(name: str, arg_type: Any) -> dict:
    """
    Build argparse keyword arguments for a given parameter.

    Parameters
    ----------
    name : str
        Argument name.
    arg_type : Any
        A base type, container type, `Literal`, `Enum` or `Annotated` type,
        optionally as `T | None`.

    Returns
    -------
    dict
        Keyword arguments to be passed to argparse's add_argument().

    Raises
    ------
    TypeError
        If no suitable handler is registered.
    """
    arg_type = unwrap_optional(arg_type)

    if get_origin(arg_type) is Annotated:
        base_type, *metadata = get_args(arg_type)
        for meta in metadata:
            if handler_cls := ANNOTATED_HANDLERS.get(type(meta)):
                return handler_cls().build(name, unwrap_optional(base_type), meta)

    if handler_cls := _type_handler(arg_type):
        return handler_cls().build(name, arg_type)

    raise TypeError(f"No registered handler for type: {arg_type!r}")


def check_value(name: str, arg_type: Any, value: Any) -> Any:
    """Validate and convert a value that did not come from the command line.

    Applies the same casts and `annotated_types` constraints as flag parsing.
    `None` passes through for optional types.

    Raises
    ------
    argparse.ArgumentTypeError
        If the value is out of range or cannot be converted.
    """
    if value is None and unwrap_optional(arg_type) is not arg_type:
        return None
    arg_type = unwrap_optional(arg_type)

    element_checks, whole_checks = [], []
    if get_origin(arg_type) is Annotated:
        arg_type, *metadata = get_args(arg_type)
        arg_type = unwrap_optional(arg_type)
        for meta in metadata:
            if handler_cls := ANNOTATED_HANDLERS.get(type(meta)):
                handler = handler_cls()
                check = handler.check(name, handler.numeric(name, arg_type, meta), meta)
                (whole_checks if isinstance(meta, LENGTH_TYPES) else element_checks).append(check)

    origin = get_origin(arg_type)
    if origin in CONTAINER_ORIGINS:
        if isinstance(value, str):
            value = [v for v in value.split(",") if v]
        element = get_args(arg_type)[0] if get_args(arg_type) else str
        cast = TYPE_HANDLERS[element].cast if element in TYPE_HANDLERS else element
        try:
            items = [cast(v) for v in value]
        except (TypeError, ValueError) as e:
            raise argparse.ArgumentTypeError(f"{name}: {e}") from None
        for check in element_checks:
            items = [check(v) for v in items]
        for check in whole_checks:
            check(items)
        return items if origin is list else origin(items)

    if origin is dict:
        if not isinstance(value, dict):
            raise argparse.ArgumentTypeError(f"{name} must be a JSON object")
        return {str(k): str(v) for k, v in value.items()}

    handler_cls = _type_handler(arg_type)
    if handler_cls is None:
        raise TypeError(f"No registered handler for type: {arg_type!r}")

    if origin is Literal:
        if value not in get_args(arg_type):
            raise argparse.ArgumentTypeError(f"{name} must be one of {get_args(arg_type)}, got {value!r}")
    elif isinstance(arg_type, type) and issubclass(arg_type, Enum):
        try:
            value = arg_type(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {name}: {value!r}") from None
    else:
        try:
            value = handler_cls.cast(value)
        except (TypeError, ValueError) as e:
            raise argparse.ArgumentTypeError(f"invalid {name}: {e}") from None

    for check in element_checks + whole_checks:
        value = check(value)
    return value


__all__ = ["ANNOTATED_HANDLERS", "TYPE_HANDLERS", "check_value", "get_kwargs", "unwrap_optional"]
