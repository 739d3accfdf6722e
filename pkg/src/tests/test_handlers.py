import inspect
import argparse
import pytest

from enum import Enum
from pathlib import Path
from typing import Annotated, Literal, get_args

from annotated_types import Gt, Ge, Lt, Le, Interval, MaxLen, MinLen, Len

from allotax.cli.handlers import check_value, get_kwargs
from allotax.cli.handlers._type import (
    FloatHandler,
    IntHandler,
    StrHandler,
    BoolHandler,
    PathHandler,
    LiteralHandler,
    EnumHandler,
    ListHandler,
    TupleHandler,
    SetHandler
)

from allotax.cli.handlers._annotated import (
    GreaterThanHandler,
    GreaterEqualHandler,
    LessThanHandler,
    LessEqualHandler,
    IntervalHandler,
    LenHandler
)


class Side(str, Enum):
    A = "A"
    B = "B"


def get_type_params(func: callable):
    params = inspect.signature(func).parameters
    name, parameter = list(params.items())[0]
    return name, parameter.annotation


def get_annotated_params(func: callable):
    params = inspect.signature(func).parameters
    name, parameter = list(params.items())[0]
    annotated_type, metadata = get_args(parameter.annotation)
    return name, annotated_type, metadata


def parse_flag(*values, **kwargs):
    parser = argparse.ArgumentParser()
    parser.add_argument("--test", **kwargs)
    return parser.parse_args(["--test", *values]).test


class TestTypeHandlers:
    def test_float(self):
        def _func(alpha: float):
            return alpha

        kwargs = FloatHandler().build(*get_type_params(_func))
        assert parse_flag("0.25", **kwargs) == 0.25

        with pytest.raises(SystemExit):
            parse_flag("third", **kwargs)

    def test_int(self):
        def _func(k: int):
            return k

        kwargs = IntHandler().build(*get_type_params(_func))
        assert parse_flag("40", **kwargs) == 40

        with pytest.raises(SystemExit):
            parse_flag("4.5", **kwargs)

    def test_str(self):
        def _func(label: str):
            return label

        kwargs = StrHandler().build(*get_type_params(_func))
        assert parse_flag("12", **kwargs) == "12"

    def test_bool_switch(self):
        def _func(strict: bool):
            return strict

        kwargs = BoolHandler().build(*get_type_params(_func))
        parser = argparse.ArgumentParser()
        parser.add_argument("--strict", default=False, **kwargs)
        assert parser.parse_args(["--strict"]).strict is True
        assert parser.parse_args(["--no-strict"]).strict is False
        assert parser.parse_args([]).strict is False

    def test_bool_cast(self):
        for t in ["True", "T", "yes", "1"]:
            assert BoolHandler.cast(t) is True
        for f in ["False", "F", "no", "0"]:
            assert BoolHandler.cast(f) is False
        with pytest.raises(argparse.ArgumentTypeError):
            BoolHandler.cast("maybe")

    def test_path(self):
        def _func(panel: Path):
            return panel

        kwargs = PathHandler().build(*get_type_params(_func))
        assert parse_flag("corpus.panel.tsv", **kwargs) == Path("corpus.panel.tsv")

    def test_literal(self):
        def _func(order: Literal[2, 3]):
            return order

        kwargs = LiteralHandler().build(*get_type_params(_func))
        assert parse_flag("3", **kwargs) == 3

        with pytest.raises(SystemExit):
            parse_flag("1", **kwargs)

    def test_literal_mixed_types(self):
        def _func(mode: Literal["c", 2]):
            return mode

        with pytest.raises(TypeError):
            LiteralHandler().build(*get_type_params(_func))

    def test_enum(self):
        def _func(target: Side):
            return target

        kwargs = EnumHandler().build(*get_type_params(_func))
        assert parse_flag("B", **kwargs) is Side.B

        with pytest.raises(SystemExit):
            parse_flag("C", **kwargs)

    def test_optional_unwrapped(self):
        assert get_kwargs("alpha", float | None) == {"type": float}

    def test_unregistered(self):
        with pytest.raises(TypeError):
            get_kwargs("payload", bytes)


class TestContainerHandlers:
    def test_list(self):
        for type_ in [int, float, str]:
            def _func(lags: list[type_]):
                return lags

            kwargs = ListHandler().build(*get_type_params(_func))
            result = parse_flag("1", "6", "12", **kwargs)
            assert isinstance(result, list)
            assert result == [type_(v) for v in ("1", "6", "12")]

    def test_tuple(self):
        def _func(orders: tuple[int, ...]):
            return orders

        kwargs = TupleHandler().build(*get_type_params(_func))
        assert parse_flag("1", "2", "3", **kwargs) == (1, 2, 3)

    def test_set(self):
        def _func(x: set[int]):
            return x

        kwargs = SetHandler().build(*get_type_params(_func))
        assert parse_flag("2", "3", "2", **kwargs) == {2, 3}

    def test_bad_element(self):
        def _func(lags: list[int]):
            return lags

        kwargs = ListHandler().build(*get_type_params(_func))
        with pytest.raises(SystemExit):
            parse_flag("1", "six", **kwargs)

    def test_missing_element_type(self):
        def _func(lags: list):
            return lags

        with pytest.raises(TypeError):
            ListHandler().build(*get_type_params(_func))


class TestAnnotatedHandlers:
    def test_inequality_scalar(self):
        for type_ in (int, float):
            inequalities = [
                (GreaterThanHandler, Gt(10), 11, 10),
                (GreaterEqualHandler, Ge(10), 10, 9),
                (LessThanHandler, Lt(10), 9, 10),
                (LessEqualHandler, Le(10), 10, 11),
            ]

            for (handler, inequality, success, failure) in inequalities:
                def _func(x: Annotated[type_, inequality]):
                    return x

                kwargs = handler().build(*get_annotated_params(_func))
                assert parse_flag(str(success), **kwargs) == success, \
                    f"{handler.__name__} {type_.__name__} failure."

                with pytest.raises(SystemExit):
                    parse_flag(str(failure), **kwargs)

    def test_inequality_container(self):
        for container in (list, tuple, set):
            for (handler, inequality, success, failure) in [
                (GreaterThanHandler, Gt(0), [1, 6], [0, 6]),
                (GreaterEqualHandler, Ge(1), [1, 12], [0, 12]),
                (LessThanHandler, Lt(10), [8, 9], [9, 10]),
                (LessEqualHandler, Le(10), [9, 10], [10, 11]),
            ]:
                def _func(x: Annotated[container[int], inequality]):
                    return x

                kwargs = handler().build(*get_annotated_params(_func))
                assert parse_flag(*map(str, success), **kwargs) == container(success)

                with pytest.raises(SystemExit):
                    parse_flag(*map(str, failure), **kwargs)

    def test_inequality_invalid(self):
        for handler, inequality in [
            (GreaterThanHandler, Gt),
            (GreaterEqualHandler, Ge),
            (LessThanHandler, Lt),
            (LessEqualHandler, Le)
        ]:
            def _func(x: Annotated[str, inequality(10)]):
                return x

            with pytest.raises(TypeError):
                handler().build(*get_annotated_params(_func))

    def test_interval_half_open(self):
        def _func(fraction: Annotated[float, Interval(gt=0, le=1)]):
            return fraction

        kwargs = IntervalHandler().build(*get_annotated_params(_func))
        assert parse_flag("1", **kwargs) == 1.0
        assert parse_flag("0.1", **kwargs) == 0.1

        for bad in ("0", "1.5", "-0.1"):
            with pytest.raises(SystemExit):
                parse_flag(bad, **kwargs)

    def test_interval_container(self):
        for container in (list, tuple, set):
            def _func(x: Annotated[container[float], Interval(ge=10, le=20)]):
                return x

            kwargs = IntervalHandler().build(*get_annotated_params(_func))
            assert parse_flag("10", "20", **kwargs) == container([10.0, 20.0])

            with pytest.raises(SystemExit):
                parse_flag("9", "21", **kwargs)

    def test_interval_conflicting_bounds(self):
        def _func(x: Annotated[float, Interval(gt=0, ge=0)]):
            return x

        with pytest.raises(TypeError):
            IntervalHandler().build(*get_annotated_params(_func))

    def test_len_str(self):
        for meta, success, failure in [
            (MaxLen(3), "abc", "abcd"),
            (MinLen(3), "abc", "ab"),
            (Len(min_length=3, max_length=3), "abc", "abcd")
        ]:
            def _func(x: Annotated[str, meta]):
                return x

            kwargs = LenHandler().build(*get_annotated_params(_func))
            assert parse_flag(success, **kwargs) == success

            with pytest.raises(SystemExit):
                parse_flag(failure, **kwargs)

    def test_len_container(self):
        for container in (list, tuple, set):
            for meta, success, failure in [
                (MaxLen(3), [1, 2, 3], [1, 2, 3, 4]),
                (MinLen(2), [1, 2], [1]),
                (Len(min_length=3, max_length=3), [1, 2, 3], [1, 2])
            ]:
                def _func(x: Annotated[container[int], meta]):
                    return x

                kwargs = LenHandler().build(*get_annotated_params(_func))
                assert parse_flag(*map(str, success), **kwargs) == container(success)

                with pytest.raises(SystemExit):
                    parse_flag(*map(str, failure), **kwargs)

    def test_len_invalid(self):
        def _func(x: Annotated[int, MinLen(1)]):
            return x

        with pytest.raises(TypeError):
            LenHandler().build(*get_annotated_params(_func))


class TestCheckValue:
    def test_scalar_constraint(self):
        assert check_value("alpha", Annotated[float, Gt(0)], "0.5") == 0.5
        with pytest.raises(argparse.ArgumentTypeError):
            check_value("alpha", Annotated[float, Gt(0)], 0)

    def test_comma_separated_container(self):
        assert check_value("lags", tuple[int, ...], "1,6,12") == (1, 6, 12)

    def test_container_length(self):
        orders = Annotated[tuple[int, ...], MinLen(1)]
        assert check_value("orders", orders, [2, 3]) == (2, 3)
        with pytest.raises(argparse.ArgumentTypeError):
            check_value("orders", orders, [])

    def test_container_elements(self):
        lags = Annotated[list[int], Ge(1)]
        with pytest.raises(argparse.ArgumentTypeError):
            check_value("lags", lags, [1, 0])

    def test_optional(self):
        assert check_value("style", str | None, None) is None
        assert check_value("style", str | None, "style.json") == "style.json"

    def test_literal(self):
        level = Literal["DEBUG", "INFO"]
        assert check_value("log_level", level, "INFO") == "INFO"
        with pytest.raises(argparse.ArgumentTypeError):
            check_value("log_level", level, "LOUD")

    def test_enum(self):
        assert check_value("target", Side, "A") is Side.A
        with pytest.raises(argparse.ArgumentTypeError):
            check_value("target", Side, "none")

    def test_mapping(self):
        assert check_value("corpora", dict[str, str], {"a": 1}) == {"a": "1"}
        with pytest.raises(argparse.ArgumentTypeError):
            check_value("corpora", dict[str, str], ["a"])

    def test_bool(self):
        assert check_value("progress", bool, "yes") is True
