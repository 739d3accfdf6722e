# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import json
import math

from dataclasses import dataclass, fields
from pathlib import Path

import regex
import svgwrite

from ._allotax import AllotaxSpec
from ._artifacts import Meta, metadata_lines
from ._errors import DataError, InvalidArgumentError
from ._types import Direction

DEFAULT_COLORS = ("#f3e9f4", "#d7b5d8", "#df65b0", "#dd1c77", "#980043")

_HEX = regex.compile(r"^#[0-9a-fA-F]{6}$")


@dataclass(frozen=True)
class StyleConfig:
    """Visual settings of an allotaxonograph.

    `colors` is the density ramp from the sparsest to the densest cell. When
    `seed` is set it overrides the run seed for bin label selection.
    """

    width: int = 1200
    height: int = 720
    margin: int = 40
    font_family: str = "Helvetica, Arial, sans-serif"
    font_size: float = 10.0
    colors: tuple[str, ...] = DEFAULT_COLORS
    background: str = "#ffffff"
    text_color: str = "#222222"
    bar_color_a: str = "#4c6eb1"
    bar_color_b: str = "#b15a4c"
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if self.width < 200 or self.height < 200:
            raise InvalidArgumentError("style width and height must be >= 200")
        if self.margin < 0 or 2 * self.margin >= min(self.width, self.height):
            raise InvalidArgumentError(f"invalid margin {self.margin}")
        if self.font_size <= 0:
            raise InvalidArgumentError("font_size must be > 0")
        if len(self.colors) < 2:
            raise InvalidArgumentError("at least two ramp colors are required")
        for color in (*self.colors, self.background, self.text_color, self.bar_color_a, self.bar_color_b):
            if not _HEX.match(color):
                raise InvalidArgumentError(f"color {color!r} is not of the form #rrggbb")

    @classmethod
    def from_json(cls, path: str | Path) -> "StyleConfig":
        """Load a style from a JSON object; missing keys keep their defaults.

        Raises
        ------
        DataError
            If the file is not a JSON object or names an unknown key.
        """
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as e:
            raise DataError(f"{path}: invalid style JSON ({e.msg})") from None
        except UnicodeDecodeError:
            raise DataError(f"{path}: style file is not valid UTF-8") from None
        if not isinstance(raw, dict):
            raise DataError(f"{path}: style must be a JSON object")

        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise DataError(f"{path}: unknown style key(s) {', '.join(unknown)}")
        return cls(**raw)


def _rgb(color: str) -> tuple[int, int, int]:
    return int(color[1:3], 16), int(color[3:5], 16), int(color[5:7], 16)


def ramp_color(t: float, colors: tuple[str, ...]) -> str:
    """Piecewise-linear interpolation of `colors` at `t` in [0, 1]."""
    t = min(max(t, 0.0), 1.0)
    position = t * (len(colors) - 1)
    lo = min(int(position), len(colors) - 2)
    frac = position - lo
    a, b = _rgb(colors[lo]), _rgb(colors[lo + 1])
    mixed = (round(x + (y - x) * frac) for x, y in zip(a, b))
    return "#" + "".join(f"{c:02x}" for c in mixed)


def density_color(count: int, max_count: int, colors: tuple[str, ...]) -> str:
    """Color of a cell on a logarithmic density scale."""
    if max_count <= 1:
        return colors[-1]
    return ramp_color(math.log10(count) / math.log10(max_count), colors)


def _r(value: float) -> float:
    return round(value, 2)


def _comment_text(meta: Meta | None) -> str:
    text = "; ".join(line[2:] for line in metadata_lines(meta))
    # XML comments may not contain a double hyphen
    return text.replace("--", "- -")


def _draw_histogram(dwg, spec: AllotaxSpec, style: StyleConfig, box: tuple[float, float, float, float]):
    x0, y0, w, h = box
    grid = spec.grid
    n = grid.n_bins
    d = min(w, h) / (2 * n)
    cx = x0 + w / 2
    top = y0 + (h - 2 * n * d) / 2

    group = dwg.g(id="histogram")

    outline = [(cx, top), (cx + n * d, top + n * d), (cx, top + 2 * n * d), (cx - n * d, top + n * d)]
    group.add(dwg.polygon([(_r(x), _r(y)) for x, y in outline], fill="none", stroke="#cccccc"))
    group.add(dwg.line((_r(cx), _r(top)), (_r(cx), _r(top + 2 * n * d)), stroke="#999999", stroke_dasharray="2,2"))

    cells = grid.nonempty()
    max_count = max((count for _, count in cells), default=1)
    for (i, j), count in cells:
        corners = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)]
        points = [(_r(cx + (v - u) * d), _r(top + (u + v) * d)) for u, v in corners]
        group.add(dwg.polygon(points, fill=density_color(count, max_count, style.colors)))

    for (i, j), label in spec.bin_labels:
        x = cx + (j - i) * d
        y = top + (i + j + 1) * d
        anchor = "start" if j > i else "end"
        offset = d if j > i else -d
        group.add(
            dwg.text(
                label,
                insert=(_r(x + offset), _r(y)),
                font_size=_r(style.font_size * 0.8),
                text_anchor=anchor,
                fill=style.text_color,
            )
        )

    group.add(dwg.text(spec.label_b, insert=(_r(x0), _r(y0 + style.font_size)), fill=style.text_color))
    group.add(
        dwg.text(
            spec.label_a,
            insert=(_r(x0 + w), _r(y0 + style.font_size)),
            text_anchor="end",
            fill=style.text_color,
        )
    )
    dwg.add(group)


def _draw_balance(dwg, spec: AllotaxSpec, style: StyleConfig, box: tuple[float, float, float, float]):
    x0, y0, w, h = box
    cx = x0 + w / 2
    half = w / 2 - 4
    row = min(h / 4, 3 * style.font_size)

    group = dwg.g(id="balance")
    for k, (name, share_a, share_b) in enumerate(spec.balance.as_rows()):
        y = y0 + (k + 1) * row
        group.add(dwg.text(name.replace("_", " "), insert=(_r(cx), _r(y - 4)), text_anchor="middle", fill=style.text_color))
        group.add(dwg.rect((_r(cx - half * share_b / 100), _r(y)), (_r(half * share_b / 100), _r(row / 3)), fill=style.bar_color_b))
        group.add(dwg.rect((_r(cx), _r(y)), (_r(half * share_a / 100), _r(row / 3)), fill=style.bar_color_a))
    dwg.add(group)


def _draw_shift(dwg, spec: AllotaxSpec, style: StyleConfig, box: tuple[float, float, float, float]):
    x0, y0, w, h = box
    cx = x0 + w / 2
    row = h / max(len(spec.shift), 1)
    peak = max((e.contribution for e in spec.shift), default=0.0)
    scale = (w / 2 - 8 * style.font_size) / peak if peak > 0 else 0.0

    group = dwg.g(id="shift")
    group.add(dwg.line((_r(cx), _r(y0)), (_r(cx), _r(y0 + h)), stroke="#999999"))
    for k, entry in enumerate(spec.shift):
        y = y0 + k * row
        length = entry.contribution * scale
        if entry.direction is Direction.B:
            bar_x, color, text_x, anchor = cx - length, style.bar_color_b, cx - length - 3, "end"
        else:
            bar_x, color, text_x, anchor = cx, style.bar_color_a, cx + length + 3, "start"
        group.add(dwg.rect((_r(bar_x), _r(y + row * 0.15)), (_r(length), _r(row * 0.7)), fill=color))
        group.add(
            dwg.text(
                entry.type,
                insert=(_r(text_x), _r(y + row * 0.75)),
                font_size=_r(min(style.font_size, row * 0.8)),
                text_anchor=anchor,
                fill=style.text_color,
            )
        )
    dwg.add(group)


def render_svg(spec: AllotaxSpec, style: StyleConfig = StyleConfig(), meta: Meta | None = None) -> bytes:
    """Render an allotaxonograph as a standalone SVG document.

    The histogram diamond fills the left half: types biased toward system A
    (lower rank in A) lie right of the vertical center line, those biased
    toward B lie left of it. The balance bars sit between the diamond and
    the shift list of the right half. Coordinates are rounded to two
    decimals and no element carries a generated id, so identical inputs
    render to identical bytes.
    """
    dwg = svgwrite.Drawing(size=(style.width, style.height), profile="full", debug=False)
    dwg.add(dwg.rect((0, 0), (style.width, style.height), fill=style.background))
    dwg.attribs["font-family"] = style.font_family
    dwg.attribs["font-size"] = _r(style.font_size)

    m = style.margin
    inner_w = style.width - 2 * m
    inner_h = style.height - 2 * m
    hist_w = inner_w * 0.5
    bars_w = inner_w * 0.14

    _draw_histogram(dwg, spec, style, (m, m, hist_w, inner_h))
    _draw_balance(dwg, spec, style, (m + hist_w, m, bars_w, inner_h))
    _draw_shift(dwg, spec, style, (m + hist_w + bars_w, m, inner_w - hist_w - bars_w, inner_h))

    head = '<?xml version="1.0" encoding="utf-8" ?>\n'
    comment = _comment_text(meta)
    if comment:
        head += f"<!-- {comment} -->\n"
    return (head + dwg.tostring() + "\n").encode("utf-8")


def write_svg(path: str | Path, spec: AllotaxSpec, style: StyleConfig = StyleConfig(), meta: Meta | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(render_svg(spec, style, meta))
    return path
