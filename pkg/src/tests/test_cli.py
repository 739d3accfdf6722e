import json

import pytest

from allotax import __version__, load_frequency_table, read_metadata
from allotax._artifacts import iter_data_lines
from allotax.cli import main

from conftest import FEB_2021, JAN_2021, comment


def rows(path):
    return [line.split("\t") for _, line in iter_data_lines(path)]


@pytest.fixture
def corpora(write_dump):
    incels = [
        comment(f"the incel forum post {i} about femoids", author=f"i{i % 4}", created_utc=JAN_2021 + i)
        for i in range(30)
    ] + [
        comment(f"blackpill incel talk {i}", author=f"i{i % 4}", created_utc=FEB_2021 + i)
        for i in range(30)
    ]
    random = [
        comment(f"the cat sat on mat {i}", author=f"r{i % 5}", created_utc=JAN_2021 + i, subreddit="cats")
        for i in range(40)
    ] + [
        comment(f"a dog ran in park {i} and the incel left", author=f"r{i % 5}", created_utc=FEB_2021 + i, subreddit="dogs")
        for i in range(10)
    ]
    return write_dump("incels.ndjson.zst", incels), write_dump("random.ndjson.gz", random)


@pytest.fixture
def ingested(corpora, tmp_path):
    out = tmp_path / "out"
    for path, label in zip(corpora, ("incels", "random")):
        assert main(["--out-dir", str(out), "ingest", "--inputs", str(path), "--label", label]) == 0
    return out


class TestUsage:
    def test_version(self, capsys):
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_missing_command(self, capsys):
        assert main([]) == 1
        assert "usage:" in capsys.readouterr().err

    def test_unknown_command(self):
        assert main(["plot"]) == 1

    def test_missing_required_flag(self):
        assert main(["divergence", "--a", "x.tsv"]) == 1

    def test_constraint_violation(self, capsys):
        assert main(["divergence", "--a", "x.tsv", "--b", "y.tsv", "--alpha", "0"]) == 1
        assert "--alpha" in capsys.readouterr().err

    def test_container_constraint(self):
        assert main(["ks", "--stats", "only.tsv"]) == 1

    def test_invalid_global_value(self, capsys):
        assert main(["--threads", "0", "zipf", "--stats", "x.tsv"]) == 1
        assert "threads" in capsys.readouterr().err

    def test_unknown_literal(self):
        assert main(["ngrams", "--a", "x", "--b", "y", "--term", "incel", "--order", "4"]) == 1


class TestDataErrors:
    def test_missing_input(self, tmp_path, capsys):
        code = main(["--out-dir", str(tmp_path), "divergence", "--a", str(tmp_path / "a.tsv"), "--b", str(tmp_path / "b.tsv")])
        assert code == 2
        err = capsys.readouterr().err
        assert err.startswith("allotax divergence: error:")
        assert len(err.strip().splitlines()) == 1

    def test_malformed_table(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("not a table\n")
        assert main(["--out-dir", str(tmp_path), "rank", "--a", str(bad), "--b", str(bad)]) == 2

    def test_missing_config(self, tmp_path):
        assert main(["--config", str(tmp_path / "none.json"), "zipf", "--stats", "x"]) == 2

    def test_not_utf8_table(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_bytes(b"\xff\xfe\n")
        assert main(["--out-dir", str(tmp_path), "divergence", "--a", str(bad), "--b", str(bad)]) == 2
        assert "UTF-8" in capsys.readouterr().err

    def test_not_utf8_config(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_bytes(b"\xff\xfe")
        assert main(["--config", str(config), "zipf", "--stats", "x"]) == 2

    def test_insufficient_span(self, ingested):
        panel = ingested / "incels.panel.tsv"
        assert main(["--out-dir", str(ingested), "dominance", "--panel", str(panel), "--lag", "12"]) == 2


class TestPipeline:
    def test_ingest_outputs(self, ingested):
        names = sorted(p.name for p in ingested.iterdir())
        assert "incels.order1.tsv" in names
        assert "random.manifest.json" in names
        meta = read_metadata(ingested / "incels.order1.tsv")
        assert meta["tool"] == f"allotax {__version__}"
        assert meta["seed"] == "0"
        assert meta["label"] == "incels"
        assert load_frequency_table(ingested / "incels.order1.tsv").label == "incels"

    def test_divergence(self, ingested):
        a, b = ingested / "incels.order1.tsv", ingested / "random.order1.tsv"
        assert main(["--out-dir", str(ingested), "divergence", "--a", str(a), "--b", str(b), "--out", "d"]) == 0

        table = rows(ingested / "d.tsv")
        assert table[0][0] == "type"
        with open(ingested / "d.json") as fh:
            report = json.load(fh)
        assert report
        assert read_metadata(ingested / "d.tsv")["alpha"] == repr(1 / 3)

    def test_corpus_labels_from_config(self, ingested, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({
            "corpora": {
                "inc": str(ingested / "incels.order1.tsv"),
                "rand": str(ingested / "random.order1.tsv"),
            },
            "alpha": 0.5,
        }))
        code = main(["--config", str(config), "--out-dir", str(ingested), "divergence", "--a", "inc", "--b", "rand"])
        assert code == 0
        assert read_metadata(ingested / "divergence.tsv")["alpha"] == "0.5"

    def test_allotax(self, ingested):
        a, b = ingested / "incels.order1.tsv", ingested / "random.order1.tsv"
        argv = ["--out-dir", str(ingested), "allotax", "--a", str(a), "--b", str(b), "--out", "fig.svg"]
        assert main(argv) == 0

        svg = (ingested / "fig.svg").read_text()
        assert "<svg" in svg
        assert (ingested / "fig.divergence.json").exists()
        bundle = [p for p in ingested.iterdir() if p.name.startswith("fig.") and p.suffix == ".tsv"]
        assert len(bundle) == 4

        assert main(argv) == 0
        assert (ingested / "fig.svg").read_text() == svg

    def test_outputs_independent_of_threads(self, corpora, tmp_path):
        for threads in ("1", "2"):
            out = tmp_path / threads
            code = main(["--out-dir", str(out), "--threads", threads, "ingest", "--inputs", *map(str, corpora), "--label", "both"])
            assert code == 0
        assert (tmp_path / "1" / "both.order2.tsv").read_bytes() == (tmp_path / "2" / "both.order2.tsv").read_bytes()

    def test_ngrams(self, ingested):
        argv = [
            "--out-dir", str(ingested), "ngrams",
            "--a", str(ingested / "incels.order2.tsv"),
            "--b", str(ingested / "random.order2.tsv"),
            "--term", "incel",
            "--k", "3",
        ]
        assert main(argv) == 0
        table = rows(ingested / "ngrams.tsv")
        assert table[0] == ["term", "order", "position", "ngram", "rank_a", "rank_b", "contribution"]
        assert 1 <= len(table) - 1 <= 3
        assert all("incel" in row[3].split() for row in table[1:])

    def test_dominance(self, ingested):
        panel = ingested / "incels.panel.tsv"
        assert main(["--out-dir", str(ingested), "dominance", "--panel", str(panel), "--lag", "1"]) == 0
        table = rows(ingested / "dominance.lag1.tsv")
        assert len(table) == 2
        assert (ingested / "dominance.lag1.txt").read_text().startswith("# ")

    def test_series(self, ingested):
        panel = ingested / "incels.panel.tsv"
        argv = ["--out-dir", str(ingested), "series", "--panel", str(panel), "--term", "incel", "blackpill"]
        assert main(argv) == 0
        table = rows(ingested / "series.tsv")
        assert table[0] == ["term", "month", "relative_frequency"]
        assert len(table) == 5

    def test_comment_stats_commands(self, ingested):
        stats = [str(ingested / "incels.comments.tsv"), str(ingested / "random.comments.tsv")]
        base = ["--out-dir", str(ingested)]

        assert main([*base, "ks", "--stats", *stats]) == 0
        ks = rows(ingested / "ks.tsv")
        assert ks[1][:4] == ["incels", "random", "60", "50"]

        assert main([*base, "bootstrap", "--stats", *stats, "--samples", "5"]) == 0
        assert len(rows(ingested / "bootstrap.tsv")) == 1 + 2 * 5

        assert main([*base, "zipf", "--stats", *stats]) == 0
        assert main([*base, "daily", "--stats", stats[0]]) == 0
        daily = rows(ingested / "daily.tsv")
        assert daily[1] == ["incels", "2021-01-15", "30"]
        assert daily[-1] == ["incels", "2021-02-15", "30"]
        assert len(daily) == 1 + 32

    def test_daily_by_source(self, ingested):
        stats = str(ingested / "random.comments.tsv")
        assert main(["--out-dir", str(ingested), "daily", "--stats", stats, "--by-source", "--out", "subs.tsv"]) == 0
        assert rows(ingested / "subs.tsv") == [
            ["label", "source", "date", "count"],
            ["random", "cats", "2021-01-15", "40"],
            ["random", "dogs", "2021-02-15", "10"],
        ]
        assert read_metadata(ingested / "subs.tsv")["by_source"] == "True"

    def test_zipf_skips_wordless_comments(self, tmp_path):
        stats = tmp_path / "small.comments.tsv"
        stats.write_text(
            "id\tcreated_utc\tsource\tn_words\n"
            f"a\t{JAN_2021}\ts\t3\nb\t{JAN_2021}\ts\t0\nc\t{JAN_2021}\ts\t5\n"
        )
        assert main(["--out-dir", str(tmp_path), "zipf", "--stats", str(stats)]) == 0
        assert rows(tmp_path / "zipf.tsv")[1:] == [["small", "1", "5"], ["small", "2", "3"]]

    def test_adf_calibrate(self, tmp_path):
        argv = ["--out-dir", str(tmp_path), "adf-calibrate", "--generator", "white-noise", "--trials", "20", "--length", "200"]
        assert main(argv) == 0
        (row,) = rows(tmp_path / "adf_calibration.tsv")[1:]
        assert row[0] == "white-noise"
        assert float(row[-1]) == 1.0

    def test_seed_recorded(self, ingested):
        stats = str(ingested / "incels.comments.tsv")
        assert main(["--out-dir", str(ingested), "--seed", "7", "bootstrap", "--stats", stats, "--samples", "2"]) == 0
        assert read_metadata(ingested / "bootstrap.tsv")["seed"] == "7"
