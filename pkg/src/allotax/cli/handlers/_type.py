# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import argparse

from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path
from typing import Any, Literal, get_args, get_origin

from .._action import ContainerCastAction

TYPE_HANDLERS: dict[type, type] = {}

CONTAINER_ORIGINS = (list, tuple, set)


def register_type(*types):
    """Decorator registering a handler class for one or more Python types.

    Parameters
    ----------
    *types : type
        Python types (e.g. `int`, `Path`, `list`) handled by the class.
    """

    def decorator(cls):
        for t in types:
            TYPE_HANDLERS[t] = cls
        return cls

    return decorator


class BaseTypeHandler(ABC):
    """Maps a Python type to `ArgumentParser.add_argument` keyword arguments.

    `cast` converts one string (or one config value) to the type; container
    handlers reuse the element handler's `cast`.
    """

    cast = staticmethod(str)

    @abstractmethod
    def build(self, name: str, annotated_type: type) -> dict[str, Any]:
        pass


@register_type(float)
class FloatHandler(BaseTypeHandler):
    cast = staticmethod(float)

    def build(self, name: str, annotated_type: type) -> dict[str, Any]:
        return {"type": float}


@register_type(int)
class IntHandler(BaseTypeHandler):
    cast = staticmethod(int)

    def build(self, name: str, annotated_type: type) -> dict[str, Any]:
        return {"type": int}


@register_type(str)
class StrHandler(BaseTypeHandler):
    cast = staticmethod(str)

    def build(self, name: str, annotated_type: type) -> dict[str, Any]:
        return {"type": str}


def str_to_bool(value: str | bool) -> bool:
    if isinstance(value, bool):
        return value
    if value.lower() in ("true", "t", "yes", "1"):
        return True
    if value.lower() in ("false", "f", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"invalid boolean value: {value}")


@register_type(bool)
class BoolHandler(BaseTypeHandler):
    """Booleans are `--flag/--no-flag` switches."""

    cast = staticmethod(str_to_bool)

    def build(self, name: str, annotated_type: type) -> dict[str, Any]:
        return {"action": argparse.BooleanOptionalAction}


@register_type(Path)
class PathHandler(BaseTypeHandler):
    cast = staticmethod(Path)

    def build(self, name: str, annotated_type: type) -> dict[str, Any]:
        return {"type": Path}


@register_type(Literal)
class LiteralHandler(BaseTypeHandler):
    """`Literal["a", "b"]` becomes a choice between the listed values."""

    def build(self, name: str, annotated_type: Any) -> dict[str, Any]:
        choices = get_args(annotated_type)
        kinds = {type(c) for c in choices}
        if len(kinds) != 1:
            raise TypeError(f"Literal choices of '{name}' must share one type: {choices}")
        return {"type": kinds.pop(), "choices": choices}


@register_type(Enum)
class EnumHandler(BaseTypeHandler):
    """Enums are chosen by value (e.g. `Direction`: "A" or "B")."""

    def build(self, name: str, annotated_type: type[Enum]) -> dict[str, Any]:
        return {"type": annotated_type, "choices": list(annotated_type)}


class BaseContainerHandler(BaseTypeHandler):
    """Base handler for homogeneous containers such as `tuple[int, ...]`.

    Raises
    ------
    TypeError
        If the element type is missing, heterogeneous or unregistered.
    """

    container_type = list

    def build(self, name: str, annotated_type: Any) -> dict[str, Any]:
        args = get_args(annotated_type)

        if not args:
            raise TypeError(
                f"{self.container_type.__name__} argument '{name}' must specify "
                f"an element type (e.g., {self.container_type.__name__}[int])."
            )
        if get_origin(annotated_type) is not self.container_type:
            raise TypeError(f"Container type for {name} must be {self.container_type.__name__}.")

        element_type = args[0]
        if any(e is not element_type and e is not Ellipsis for e in args):
            raise TypeError(
                f"{self.container_type.__name__} argument '{name}' must have "
                f"homogeneous elements: {annotated_type}"
            )
        if element_type not in TYPE_HANDLERS:
            raise TypeError(f"No registered handler for element type: {element_type}")

        return {
            "nargs": "+",
            "cast": TYPE_HANDLERS[element_type].cast,
            "container_type": self.container_type,
            "action": ContainerCastAction,
        }


@register_type(list)
class ListHandler(BaseContainerHandler):
    container_type = list


@register_type(tuple)
class TupleHandler(BaseContainerHandler):
    container_type = tuple


@register_type(set)
class SetHandler(BaseContainerHandler):
    container_type = set
