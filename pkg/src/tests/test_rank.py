import numpy as np
import pytest

from allotax import (
    Comment,
    FrequencyTable,
    InvalidArgumentError,
    combined_lexicon,
    comments_per_day,
    rank_pair,
    tie_averaged_ranks,
    zipf_distribution,
)
from allotax._rank import write_ranked_lexicon
from allotax._artifacts import iter_data_lines


def naive_ranks(frequencies):
    order = sorted(range(len(frequencies)), key=lambda i: -frequencies[i])
    ranks = [0.0] * len(frequencies)
    position = 0
    while position < len(order):
        end = position
        while end + 1 < len(order) and frequencies[order[end + 1]] == frequencies[order[position]]:
            end += 1
        for k in range(position, end + 1):
            ranks[order[k]] = (position + 1 + end + 1) / 2
        position = end + 1
    return ranks


def random_table(rng, size, label=""):
    counts = {f"t{i}": int(c) for i, c in enumerate(rng.integers(1, 6, size=size))}
    return FrequencyTable(1, counts, label=label)


class TestCombinedLexicon:
    def test_union_order(self):
        a = FrequencyTable(1, {"x": 1, "y": 3})
        b = FrequencyTable(1, {"z": 5, "x": 2})
        assert combined_lexicon(a, b) == ("y", "x", "z")

    def test_mixed_orders(self):
        with pytest.raises(InvalidArgumentError):
            combined_lexicon(FrequencyTable(1, {"a": 1}), FrequencyTable(2, {"a b": 1}))


class TestTieAveragedRanks:
    def test_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            a = random_table(rng, int(rng.integers(1, 30)))
            b = FrequencyTable(1, {f"t{i + 10}": int(c) for i, c in enumerate(rng.integers(1, 6, size=int(rng.integers(0, 30))))})
            lexicon = combined_lexicon(a, b)
            ranked = tie_averaged_ranks(a, lexicon)
            expected = naive_ranks([a.get(t) for t in lexicon])
            assert np.allclose(ranked.ranks, expected)

    def test_rank_sum(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            a = random_table(rng, int(rng.integers(1, 40)))
            b = random_table(rng, int(rng.integers(1, 40)))
            for ranked in rank_pair(a, b):
                w = len(ranked)
                assert ranked.ranks.sum() == pytest.approx(w * (w + 1) / 2)

    def test_exclusive_rank(self):
        rng = np.random.default_rng(2)
        for w in range(1, 51):
            k = int(rng.integers(0, w + 1))
            table = FrequencyTable(1, {f"t{i}": int(rng.integers(1, 4)) for i in range(k)})
            lexicon = [f"t{i}" for i in range(w)]
            ranked = tie_averaged_ranks(table, lexicon)
            for t in lexicon[k:]:
                assert ranked.rank(t) == k + (w - k + 1) / 2
                assert ranked.frequency(t) == 0

    def test_example(self):
        table = FrequencyTable(1, {"a": 5, "b": 3, "c": 3, "d": 1})
        ranked = tie_averaged_ranks(table, ["a", "b", "c", "d", "e", "f"])
        assert [ranked.rank(t) for t in "abcdef"] == [1.0, 2.5, 2.5, 4.0, 5.5, 5.5]

    def test_empty(self):
        ranked = tie_averaged_ranks(FrequencyTable(1, {}), [])
        assert len(ranked) == 0

    def test_missing_type(self):
        with pytest.raises(InvalidArgumentError):
            tie_averaged_ranks(FrequencyTable(1, {"a": 1, "b": 1}), ["a"])

    def test_duplicate_type(self):
        with pytest.raises(InvalidArgumentError):
            tie_averaged_ranks(FrequencyTable(1, {"a": 1}), ["a", "a"])

    def test_align(self):
        a, b = rank_pair(FrequencyTable(1, {"x": 2, "y": 1}), FrequencyTable(1, {"y": 2}))
        assert list(b.align(a.types)) == [b.rank("x"), b.rank("y")]

    def test_write(self, tmp_path):
        ranked, _ = rank_pair(FrequencyTable(1, {"b": 1, "a": 1, "c": 4}), FrequencyTable(1, {"d": 1}))
        path = write_ranked_lexicon(ranked, tmp_path / "r.tsv")
        rows = [line for _, line in iter_data_lines(path)]
        assert rows == ["type\tfrequency\trank", "c\t4\t1.0", "a\t1\t2.5", "b\t1\t2.5", "d\t0\t4.0"]


class TestZipfAndDaily:
    def test_zipf(self):
        assert zipf_distribution([3, 10, 3, 1]) == [(1, 10), (2, 3), (3, 3), (4, 1)]

    @pytest.mark.parametrize("values", [[3, 0, 1], [2, -1]])
    def test_zipf_non_positive(self, values):
        with pytest.raises(InvalidArgumentError):
            zipf_distribution(values)

    def test_zipf_empty(self):
        with pytest.raises(InvalidArgumentError):
            zipf_distribution([])

    def test_daily_fills_gaps(self):
        day = 86400
        start = 1610668800
        comments = [
            Comment("x", "hi", start + 10, "s", "1"),
            Comment("x", "hi", start + 20, "s", "2"),
            Comment("x", "hi", start + 3 * day, "s", "3"),
        ]
        series = comments_per_day(comments)
        assert list(series.values()) == [2, 0, 0, 1]
        assert [d.isoformat() for d in series] == ["2021-01-15", "2021-01-16", "2021-01-17", "2021-01-18"]

    def test_daily_timestamps(self):
        assert sum(comments_per_day([1610668800, 1610668801]).values()) == 2
        assert comments_per_day([]) == {}
