import numpy as np
import pytest

from allotax import (
    DivergenceConfig,
    FrequencyTable,
    InvalidArgumentError,
    balance_bars,
    build_allotax_spec,
    build_histogram,
    outer_cells,
    rank_pair,
    select_bin_labels,
)
from allotax._allotax import SHIFT_SIZE, rank_bin
from allotax._artifacts import iter_data_lines


def zipf_table(rng, size, label, prefix="w"):
    counts = {f"{prefix}{i}": int(1000 // (i + 1)) + int(rng.integers(0, 3)) for i in range(size)}
    return FrequencyTable(1, counts, label=label)


@pytest.fixture
def pair():
    rng = np.random.default_rng(11)
    a = zipf_table(rng, 600, "A")
    b_counts = dict(zipf_table(rng, 400, "B").counts)
    b_counts.update({f"only_b{i}": 2 for i in range(150)})
    return a, FrequencyTable(1, b_counts, label="B")


class TestHistogram:
    def test_rank_bin(self):
        assert rank_bin(1, 15) == 0
        assert rank_bin(10, 15) == 15
        assert list(rank_bin(np.array([1.0, 9.99, 100.0]), 1)) == [0, 0, 2]

    def test_mass_equals_lexicon(self, pair):
        ranked_a, ranked_b = rank_pair(*pair)
        grid = build_histogram(ranked_a, ranked_b)
        assert grid.total == len(ranked_a)
        assert sum(len(m) for m in grid.members.values()) == len(ranked_a)

    def test_identical_on_diagonal(self):
        table = FrequencyTable(1, {f"w{i}": i + 1 for i in range(300)})
        grid = build_histogram(*rank_pair(table, table))
        assert grid.total == 300
        assert np.trace(grid.counts) == 300

    def test_grid_covers_max_rank(self, pair):
        ranked_a, ranked_b = rank_pair(*pair)
        grid = build_histogram(ranked_a, ranked_b, bins_per_decade=5)
        assert grid.n_bins == int(rank_bin(grid.max_rank, 5)) + 1
        assert grid.counts.shape == (grid.n_bins, grid.n_bins)

    def test_empty(self):
        grid = build_histogram(*rank_pair(FrequencyTable(1, {}), FrequencyTable(1, {})))
        assert grid.total == 0
        assert grid.counts.shape == (1, 1)

    @pytest.mark.parametrize("bins", [0, -3, 1.5, True])
    def test_invalid_bins(self, pair, bins):
        with pytest.raises(InvalidArgumentError):
            build_histogram(*rank_pair(*pair), bins_per_decade=bins)

    def test_read_only(self, pair):
        grid = build_histogram(*rank_pair(*pair))
        with pytest.raises(ValueError):
            grid.counts[0, 0] = 1


class TestBinLabels:
    def test_outer_cells_off_diagonal(self, pair):
        grid = build_histogram(*rank_pair(*pair))
        cells = outer_cells(grid)
        assert cells
        for i, j in cells:
            assert i != j
            assert grid.counts[i, j] > 0
            assert max(grid.bin_floor(i), grid.bin_floor(j)) > 100

    def test_one_cell_per_band_and_side(self, pair):
        grid = build_histogram(*rank_pair(*pair))
        keys = [(i + j, j > i) for i, j in outer_cells(grid)]
        assert len(keys) == len(set(keys))

    def test_labels_seeded(self, pair):
        grid = build_histogram(*rank_pair(*pair))
        first = select_bin_labels(grid, seed=5)
        assert first == select_bin_labels(grid, seed=5)
        for cell, label in first:
            assert label in grid.members[cell]

    def test_labels_differ_by_seed(self, pair):
        grid = build_histogram(*rank_pair(*pair))
        draws = {tuple(select_bin_labels(grid, seed=s)) for s in range(10)}
        assert len(draws) > 1

    def test_min_rank_excludes_all(self, pair):
        grid = build_histogram(*rank_pair(*pair))
        assert select_bin_labels(grid, min_rank=1e9) == []


class TestBalanceBars:
    def test_example(self):
        bars = balance_bars(FrequencyTable(1, {"a": 3}), FrequencyTable(1, {"a": 1, "b": 2}))
        assert bars.word_count == (50.0, 50.0)
        assert bars.lexicon == (50.0, 100.0)
        assert bars.exclusive == (0.0, 50.0)

    def test_word_count_sums_to_100(self, pair):
        bars = balance_bars(*pair)
        assert sum(bars.word_count) == pytest.approx(100.0)

    def test_empty_side(self):
        bars = balance_bars(FrequencyTable(1, {}), FrequencyTable(1, {"a": 2}))
        assert bars.word_count == (0.0, 100.0)
        assert bars.exclusive == (0.0, 100.0)

    def test_both_empty(self):
        with pytest.raises(InvalidArgumentError):
            balance_bars(FrequencyTable(1, {}), FrequencyTable(1, {}))

    def test_mixed_orders(self):
        with pytest.raises(InvalidArgumentError):
            balance_bars(FrequencyTable(1, {"a": 1}), FrequencyTable(2, {"a b": 1}))


class TestAllotaxSpec:
    def test_shift_list(self, pair):
        spec = build_allotax_spec(*pair, DivergenceConfig(1 / 3), seed=3)
        assert len(spec.shift) == SHIFT_SIZE
        assert [e.type for e in spec.shift] == [e.type for e in spec.report.entries[:SHIFT_SIZE]]
        assert spec.label_a == "A" and spec.label_b == "B"

    def test_bundle(self, pair, tmp_path):
        spec = build_allotax_spec(*pair, seed=3)
        paths = spec.write_bundle(tmp_path, "plot", meta={"seed": 3})
        names = sorted(p.name for p in paths)
        assert names == [
            "plot.balance.tsv",
            "plot.divergence.json",
            "plot.grid.tsv",
            "plot.labels.tsv",
            "plot.shift.tsv",
        ]
        grid_rows = [line.split("\t") for _, line in iter_data_lines(tmp_path / "plot.grid.tsv")][1:]
        assert sum(int(count) for _, _, count in grid_rows) == spec.grid.total
        balance = [line for _, line in iter_data_lines(tmp_path / "plot.balance.tsv")]
        assert balance[0] == "bar\tA\tB"
