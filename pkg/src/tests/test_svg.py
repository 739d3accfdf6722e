import json
import pytest

from xml.etree import ElementTree

from allotax import DataError, FrequencyTable, InvalidArgumentError, StyleConfig, build_allotax_spec, render_svg, write_svg
from allotax._svg import density_color, ramp_color

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def spec():
    a = FrequencyTable(1, {f"w{i}": 500 // (i + 1) + 1 for i in range(400)}, label="alpha")
    b = FrequencyTable(1, {f"w{i}": 300 // (i + 2) + 1 for i in range(0, 400, 2)} | {f"v{i}": 2 for i in range(120)}, label="beta")
    return build_allotax_spec(a, b, seed=1)


class TestRamp:
    def test_endpoints(self):
        colors = ("#000000", "#ffffff")
        assert ramp_color(0.0, colors) == "#000000"
        assert ramp_color(1.0, colors) == "#ffffff"
        assert ramp_color(0.5, colors) == "#808080"
        assert ramp_color(7.0, colors) == "#ffffff"

    def test_density_log_scale(self):
        colors = ("#000000", "#ffffff")
        assert density_color(1, 100, colors) == "#000000"
        assert density_color(10, 100, colors) == "#808080"
        assert density_color(1, 1, colors) == "#ffffff"


class TestStyleConfig:
    def test_from_json(self, tmp_path):
        path = tmp_path / "style.json"
        path.write_text(json.dumps({"width": 800, "colors": ["#000000", "#ff0000"], "seed": 9}))
        style = StyleConfig.from_json(path)
        assert style.width == 800
        assert style.colors == ("#000000", "#ff0000")
        assert style.seed == 9

    @pytest.mark.parametrize("body", ["{", "[]", '{"size": 3}'])
    def test_bad_file(self, tmp_path, body):
        path = tmp_path / "style.json"
        path.write_text(body)
        with pytest.raises(DataError):
            StyleConfig.from_json(path)

    @pytest.mark.parametrize("kwargs", [
        dict(width=100),
        dict(colors=("#000000",)),
        dict(background="white"),
        dict(margin=400),
        dict(font_size=0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidArgumentError):
            StyleConfig(**kwargs)


class TestRenderSvg:
    def test_deterministic(self, spec):
        meta = {"tool": "allotax 0.1.0", "seed": 1}
        assert render_svg(spec, meta=meta) == render_svg(spec, meta=meta)

    def test_structure(self, spec):
        document = render_svg(spec)
        assert document.startswith(b'<?xml version="1.0" encoding="utf-8" ?>\n<svg')
        root = ElementTree.fromstring(document)
        groups = {g.get("id"): g for g in root.iter(f"{SVG}g")}
        assert set(groups) == {"histogram", "balance", "shift"}

        cells = [p for p in groups["histogram"].iter(f"{SVG}polygon")][1:]
        assert len(cells) == len(spec.grid.nonempty())

        shift_labels = [t.text for t in groups["shift"].iter(f"{SVG}text")]
        assert shift_labels == [e.type for e in spec.shift]

        texts = [t.text for t in groups["histogram"].iter(f"{SVG}text")]
        assert "alpha" in texts and "beta" in texts
        for _, label in spec.bin_labels:
            assert label in texts

    def test_metadata_comment(self, spec):
        document = render_svg(spec, meta={"tool": "allotax 0.1.0", "note": "a--b"}).decode()
        second = document.splitlines()[1]
        assert second == "<!-- tool: allotax 0.1.0; note: a- -b -->"

    def test_bias_side(self, spec):
        root = ElementTree.fromstring(render_svg(spec))
        histogram = next(g for g in root.iter(f"{SVG}g") if g.get("id") == "histogram")
        axis = next(histogram.iter(f"{SVG}line"))
        cx = float(axis.get("x1"))
        for text in histogram.iter(f"{SVG}text"):
            cell = next((c for c, label in spec.bin_labels if label == text.text), None)
            if cell is None:
                continue
            i, j = cell
            x = float(text.get("x"))
            assert (x > cx) == (j > i)

    def test_style_changes_output(self, spec):
        assert render_svg(spec) != render_svg(spec, StyleConfig(colors=("#000000", "#00ff00")))

    def test_write(self, spec, tmp_path):
        path = write_svg(tmp_path / "out" / "plot.svg", spec)
        assert path.read_bytes() == render_svg(spec)
