# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import argparse


class ContainerCastAction(argparse.Action):
    """An argparse action that casts each element and wraps the result.

    Parameters
    ----------
    container_type : type
        The container class of the final value (`list`, `set`, `tuple`).
    cast : callable
        Conversion applied to each string element.
    **kwargs
        Additional keyword arguments passed to `argparse.Action`.

    Examples
    --------
    >>> parser = argparse.ArgumentParser()
    >>> parser.add_argument(
    ...     "--orders",
    ...     nargs="+",
    ...     action=ContainerCastAction,
    ...     container_type=tuple,
    ...     cast=int
    ... )
    """

    def __init__(self, container_type, cast, **kwargs):
        self.container_type = container_type
        self.cast = cast
        super().__init__(**kwargs)

    def __call__(self, parser, namespace, values, option_string=None):
        try:
            casted = [self.cast(v) for v in values]
        except (TypeError, ValueError, argparse.ArgumentTypeError) as e:
            raise argparse.ArgumentError(self, str(e)) from None
        setattr(namespace, self.dest, self.container_type(casted))


class ConstrainedContainerAction(ContainerCastAction):
    """A `ContainerCastAction` that also checks element count and values.

    Parameters
    ----------
    validate : callable
        Called with the list of cast elements; raises
        `argparse.ArgumentTypeError` if one is out of range.
    min_len, max_len : int
        Bounds on the number of elements; ``None`` disables a bound.

    Raises
    ------
    argparse.ArgumentError
        On a count or value violation, so argparse prints usage and exits.
    """

    def __init__(self, container_type, cast, validate=None, min_len=None, max_len=None, **kwargs):
        self.validate = validate
        self.min_len = min_len
        self.max_len = max_len
        super().__init__(container_type, cast, **kwargs)

    def __call__(self, parser, namespace, values, option_string=None):
        if self.min_len is not None and len(values) < self.min_len:
            raise argparse.ArgumentError(
                self, f"expected at least {self.min_len} elements, got {len(values)}"
            )
        if self.max_len is not None and len(values) > self.max_len:
            raise argparse.ArgumentError(
                self, f"expected at most {self.max_len} elements, got {len(values)}"
            )

        try:
            casted = [self.cast(v) for v in values]
            if self.validate:
                self.validate(casted)
        except (TypeError, ValueError, argparse.ArgumentTypeError) as e:
            raise argparse.ArgumentError(self, str(e)) from None

        setattr(namespace, self.dest, self.container_type(casted))
