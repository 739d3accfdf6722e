# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import argparse
import operator

from abc import ABC, abstractmethod
from typing import Any, Callable, get_args, get_origin

from annotated_types import Ge, Gt, Interval, Le, Len, Lt, MaxLen, MinLen

from .._action import ConstrainedContainerAction
from ._type import CONTAINER_ORIGINS

ANNOTATED_HANDLERS: dict[type, type] = {}

Check = Callable[[Any], Any]


def register_annotated(*meta_types):
    """Register a handler class for `annotated_types` metadata types."""

    def wrapper(cls):
        for m in meta_types:
            ANNOTATED_HANDLERS[m] = cls
        return cls

    return wrapper


class AnnotatedTypeHandler(ABC):
    """Turns an `Annotated[T, constraint]` into add_argument kwargs.

    `check` returns a function casting one value to `T` and raising
    `argparse.ArgumentTypeError` when the constraint fails. It is what flag
    parsing calls on each string and what `RunConfig` calls on values read
    from a config file or the environment.
    """

    @abstractmethod
    def check(self, name: str, element_type: type, metadata: Any) -> Check:
        pass

    def numeric(self, name: str, annotated_type: Any, metadata: Any) -> type:
        origin = get_origin(annotated_type)
        element_type = get_args(annotated_type)[0] if origin in CONTAINER_ORIGINS else annotated_type
        if element_type not in (int, float):
            raise TypeError(
                f"Invalid `Annotated` metadata for {name}. "
                f"`{type(metadata).__name__}` is only valid with `int` or `float`."
            )
        return element_type

    def build(self, name: str, annotated_type: Any, metadata: Any) -> dict[str, Any]:
        element_type = self.numeric(name, annotated_type, metadata)
        check = self.check(name, element_type, metadata)
        origin = get_origin(annotated_type)

        if origin in CONTAINER_ORIGINS:
            return {
                "nargs": "+",
                "action": ConstrainedContainerAction,
                "container_type": origin,
                "cast": check,
            }
        return {"type": check}


class InequalityHandler(AnnotatedTypeHandler):
    """Base handler for a single numeric bound.

    Attributes
    ----------
    metadata_attr : str
        Attribute of the metadata holding the bound (`"gt"`, `"le"`, ...).
    op_func : callable
        Comparison from `operator`.
    op_symbol : str
        Symbol used in error messages.
    """

    metadata_attr: str
    op_func: Callable[[Any, Any], bool]
    op_symbol: str

    def check(self, name: str, element_type: type, metadata: Any) -> Check:
        threshold = getattr(metadata, self.metadata_attr)

        def validate(value):
            try:
                value = element_type(value)
            except (TypeError, ValueError):
                raise argparse.ArgumentTypeError(
                    f"invalid {element_type.__name__} value: {value!r}"
                ) from None
            if not self.op_func(value, threshold):
                raise argparse.ArgumentTypeError(
                    f"{name} must be {self.op_symbol} {threshold}, got {value}"
                )
            return value

        return validate


@register_annotated(Gt)
class GreaterThanHandler(InequalityHandler):
    metadata_attr = "gt"
    op_func = staticmethod(operator.gt)
    op_symbol = ">"


@register_annotated(Ge)
class GreaterEqualHandler(InequalityHandler):
    metadata_attr = "ge"
    op_func = staticmethod(operator.ge)
    op_symbol = ">="


@register_annotated(Lt)
class LessThanHandler(InequalityHandler):
    metadata_attr = "lt"
    op_func = staticmethod(operator.lt)
    op_symbol = "<"


@register_annotated(Le)
class LessEqualHandler(InequalityHandler):
    metadata_attr = "le"
    op_func = staticmethod(operator.le)
    op_symbol = "<="


@register_annotated(Interval)
class IntervalHandler(AnnotatedTypeHandler):
    """Two-sided bounds, each inclusive or exclusive, e.g.
    ``Interval(gt=0, le=1)`` for a resampling fraction."""

    def check(self, name: str, element_type: type, metadata: Interval) -> Check:
        if metadata.gt is not None and metadata.ge is not None:
            raise TypeError("Interval cannot have both 'gt' and 'ge' specified.")
        if metadata.lt is not None and metadata.le is not None:
            raise TypeError("Interval cannot have both 'lt' and 'le' specified.")

        bounds = [
            (op, bound, symbol)
            for op, bound, symbol in (
                (operator.gt, metadata.gt, ">"),
                (operator.ge, metadata.ge, ">="),
                (operator.lt, metadata.lt, "<"),
                (operator.le, metadata.le, "<="),
            )
            if bound is not None
        ]

        def validate(value):
            try:
                value = element_type(value)
            except (TypeError, ValueError):
                raise argparse.ArgumentTypeError(
                    f"invalid {element_type.__name__} value: {value!r}"
                ) from None
            for op, bound, symbol in bounds:
                if not op(value, bound):
                    raise argparse.ArgumentTypeError(f"{name} must be {symbol} {bound}, got {value}")
            return value

        return validate


@register_annotated(MaxLen, MinLen, Len)
class LenHandler(AnnotatedTypeHandler):
    """Element-count bounds on containers, character-count bounds on strings."""

    def numeric(self, name: str, annotated_type: Any, metadata: Any) -> type:
        origin = get_origin(annotated_type)
        if origin in CONTAINER_ORIGINS:
            args = get_args(annotated_type)
            return args[0] if args else str
        if annotated_type is str:
            return str
        raise TypeError(
            f"Invalid `Annotated` metadata for '{name}'. `MaxLen`, `MinLen`, or "
            "`Len` can only be used with list, tuple, set, or str types."
        )

    def check(self, name: str, element_type: type, metadata: Any) -> Check:
        min_len = getattr(metadata, "min_length", None)
        max_len = getattr(metadata, "max_length", None)

        def validate(value):
            if min_len is not None and len(value) < min_len:
                raise argparse.ArgumentTypeError(f"{name} must have length >= {min_len}")
            if max_len is not None and len(value) > max_len:
                raise argparse.ArgumentTypeError(f"{name} must have length <= {max_len}")
            return value

        return validate

    def build(self, name: str, annotated_type: Any, metadata: Any) -> dict[str, Any]:
        element_type = self.numeric(name, annotated_type, metadata)
        origin = get_origin(annotated_type)

        if origin in CONTAINER_ORIGINS:
            return {
                "nargs": "+",
                "action": ConstrainedContainerAction,
                "container_type": origin,
                "cast": element_type,
                "min_len": getattr(metadata, "min_length", None),
                "max_len": getattr(metadata, "max_length", None),
            }
        return {"type": self.check(name, element_type, metadata)}
