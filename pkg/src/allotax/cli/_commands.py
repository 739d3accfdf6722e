# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import logging

from collections import defaultdict
from itertools import combinations
from pathlib import Path
from typing import Annotated, Literal

from annotated_types import Ge, Gt, Interval, MinLen

from .._allotax import build_allotax_spec
from .._artifacts import read_metadata, write_json, write_text, write_tsv
from .._dominance import DOMINANCE_MODES, dominance_table, load_panel, relative_frequency_series, write_series
from .._errors import DataError, InvalidArgumentError
from .._fetch import fetch_dump
from .._frequency import FrequencyTable, load_frequency_table
from .._ingest import CommentStat, ingest_corpus, load_comment_stats
from .._ngram_bias import BiasQuery, top_biased
from .._rank import comments_per_day, rank_pair, write_ranked_lexicon, zipf_distribution
from .._rtd import DivergenceConfig, divergence_report
from .._svg import StyleConfig, write_svg
from .._types import Direction, as_term_set, month_label
from ..stats import GENERATORS, adf_test, bootstrap_means, ks_two_sample, rejection_rate
from ._arg import Arg
from ._config import RunConfig
from ._tree import cmd

logger = logging.getLogger(__name__)

Alpha = Annotated[float, Gt(0)]
Regression = Literal["c", "ct"]


def _table(config: RunConfig, value: str | Path) -> FrequencyTable:
    path = config.corpus_path(value)
    table = load_frequency_table(path)
    if not table.label:
        table = table.relabel(path.name.split(".")[0])
    return table


def _stats_label(path: Path) -> str:
    return read_metadata(path).get("label") or path.name.split(".")[0]


def _load_stats(config: RunConfig, values: list[Path]) -> list[tuple[str, list[CommentStat]]]:
    loaded = []
    for value in values:
        path = config.corpus_path(value)
        loaded.append((_stats_label(path), load_comment_stats(path)))
    return loaded


def _written(paths: list[Path]) -> None:
    for path in paths:
        logger.info("wrote %s", path)


@cmd("fetch")
def fetch(
    url: Arg[str, "HTTP(S) location of a dump"],
    dest: Arg[Path, "Local path of the downloaded file"],
    config: RunConfig,
    sha256: Arg[str | None, "Expected SHA-256 hex digest"] = None,
    retries: Arg[Annotated[int, Ge(0)], "Retries on network and server errors"] = 5,
):
    """Download a dump, resuming an interrupted transfer."""
    dest = config.output(dest)
    source = fetch_dump(url, dest, sha256, max_retries=retries, progress=config.progress)
    _written([dest, write_json(dest.with_name(dest.name + ".source.json"), source.as_dict(), config.meta())])


@cmd("ingest")
def ingest(
    inputs: Arg[list[Path], "Comment dumps of one corpus (.ndjson, .zst, .gz)"],
    label: Arg[str, "Corpus label"],
    config: RunConfig,
    orders: Arg[Annotated[tuple[int, ...], MinLen(1)] | None, "N-gram orders (default: from config)"] = None,
    strict: Arg[bool, "Abort on the first malformed line"] = False,
):
    """Clean and count a corpus into frequency tables, a monthly panel and comment stats."""
    result = ingest_corpus(
        [config.corpus_path(p) for p in inputs],
        label,
        orders=orders or config.orders,
        cleaning=config.cleaning(),
        fields=config.fields_map(),
        deleted_markers=config.deleted_markers,
        threads=config.threads,
        strict=strict,
        progress=config.progress,
    )
    _written(result.write(config.output(""), config.meta(label=label)))


@cmd("rank")
def rank(
    a: Arg[str, "Frequency table (or corpus label) of system A"],
    b: Arg[str, "Frequency table (or corpus label) of system B"],
    config: RunConfig,
    prefix: Arg[str, "Output prefix"] = "rank",
):
    """Tie-averaged ranks of two systems over their combined lexicon."""
    ranked_a, ranked_b = rank_pair(_table(config, a), _table(config, b))
    _written([
        write_ranked_lexicon(ranked_a, config.output(f"{prefix}.a.tsv"), config.meta(label=ranked_a.label)),
        write_ranked_lexicon(ranked_b, config.output(f"{prefix}.b.tsv"), config.meta(label=ranked_b.label)),
    ])


@cmd("divergence")
def divergence(
    a: Arg[str, "Frequency table (or corpus label) of system A"],
    b: Arg[str, "Frequency table (or corpus label) of system B"],
    config: RunConfig,
    alpha: Arg[Alpha | None, "Divergence tuning (default: from config)"] = None,
    out: Arg[str, "Output stem"] = "divergence",
):
    """Per-type rank-turbulence divergence between two systems."""
    alpha = config.alpha if alpha is None else alpha
    ranked_a, ranked_b = rank_pair(_table(config, a), _table(config, b))
    report = divergence_report(ranked_a, ranked_b, DivergenceConfig(alpha))
    meta = config.meta(alpha=alpha, label_a=report.label_a, label_b=report.label_b)
    logger.info("divergence %s vs %s: total %.6g over %d types", report.label_a, report.label_b, report.total, len(report))
    _written([
        report.to_tsv(config.output(f"{out}.tsv"), meta),
        report.to_json(config.output(f"{out}.json"), meta),
    ])


@cmd("allotax")
def allotax(
    a: Arg[str, "Frequency table (or corpus label) of system A"],
    b: Arg[str, "Frequency table (or corpus label) of system B"],
    config: RunConfig,
    alpha: Arg[Alpha | None, "Divergence tuning (default: from config)"] = None,
    bins: Arg[Annotated[int, Ge(1)] | None, "Bins per decade of rank (default: from config)"] = None,
    out: Arg[str, "SVG output path"] = "allotax.svg",
    style: Arg[Path | None, "JSON style file (default: from config)"] = None,
):
    """Render an allotaxonograph and write its data bundle."""
    alpha = config.alpha if alpha is None else alpha
    style_path = style if style is not None else config.style
    style_config = StyleConfig.from_json(style_path) if style_path is not None else StyleConfig()
    seed = style_config.seed if style_config.seed is not None else config.seed

    spec = build_allotax_spec(
        _table(config, a),
        _table(config, b),
        DivergenceConfig(alpha),
        bins_per_decade=bins or config.bins_per_decade,
        seed=seed,
        label_min_rank=config.label_min_rank,
    )
    meta = config.meta(alpha=alpha, label_a=spec.label_a, label_b=spec.label_b, label_seed=seed)

    svg = config.output(out)
    stem = svg.name.removesuffix(".svg")
    _written([write_svg(svg, spec, style_config, meta), *spec.write_bundle(svg.parent, stem, meta)])


@cmd("ngrams")
def ngrams(
    a: Arg[list[str], "Order-2 and/or order-3 tables of system A"],
    b: Arg[list[str], "Tables of system B, same orders as --a"],
    term: Arg[list[str], "Terms; a comma-separated group counts as one term"],
    config: RunConfig,
    order: Arg[Literal[2, 3] | None, "Only this order (default: every order given)"] = None,
    k: Arg[Annotated[int, Ge(1)], "N-grams per term and order"] = 10,
    scope: Arg[Literal["filtered", "full"], "Rank over matching n-grams only, or over full tables"] = "filtered",
    target: Arg[Direction, "System the n-grams must be biased toward"] = Direction.A,
    alpha: Arg[Alpha | None, "Divergence tuning (default: from config)"] = None,
    out: Arg[str, "Output path"] = "ngrams.tsv",
):
    """Top n-grams containing each term that are biased toward one system."""
    alpha = config.alpha if alpha is None else alpha
    tables_a = {t.order: t for t in (_table(config, v) for v in a)}
    tables_b = {t.order: t for t in (_table(config, v) for v in b)}
    if set(tables_a) != set(tables_b):
        raise InvalidArgumentError(
            f"--a holds orders {sorted(tables_a)} but --b holds orders {sorted(tables_b)}"
        )

    orders = [order] if order is not None else sorted(tables_a)
    for n in orders:
        if n not in tables_a:
            raise InvalidArgumentError(f"no order-{n} tables given")

    rows = []
    for group in term:
        name = ",".join(sorted(as_term_set(group)))
        for n in orders:
            query = BiasQuery(group, order=n, k=k, alpha=alpha, target=target, scope=scope)
            entries = top_biased(tables_a[n], tables_b[n], query)
            if len(entries) < k:
                logger.info("%s: only %d order-%d n-gram(s) biased toward %s", name, len(entries), n, target.value)
            for position, e in enumerate(entries, start=1):
                rows.append((name, n, position, e.ngram, e.rank_a, e.rank_b, e.contribution))

    meta = config.meta(alpha=alpha, target=target.value, scope=scope)
    _written([
        write_tsv(
            config.output(out),
            rows,
            header=("term", "order", "position", "ngram", "rank_a", "rank_b", "contribution"),
            meta=meta,
        )
    ])


@cmd("dominance")
def dominance(
    panel: Arg[str, "Monthly panel (or corpus label)"],
    config: RunConfig,
    lag: Arg[Annotated[list[int], MinLen(1)] | None, "Lags in months (default: from config)"] = None,
    mode: Arg[Literal[tuple(DOMINANCE_MODES)], "Scoring of rising terms"] = "divergence",
    alpha: Arg[Alpha | None, "Divergence tuning (default: from config)"] = None,
    out: Arg[str, "Output stem"] = "dominance",
):
    """Narratively dominant term of each month against a lagged month."""
    alpha = config.alpha if alpha is None else alpha
    monthly = load_panel(config.corpus_path(panel))
    if monthly.empty_months:
        logger.warning("panel has %d empty month(s)", len(monthly.empty_months))

    paths = []
    for lag_months in lag or config.lags:
        table = dominance_table(monthly, lag_months, mode, alpha)
        meta = config.meta(label=monthly.label, lag_months=lag_months, mode=mode, alpha=alpha)
        paths.append(table.to_tsv(config.output(f"{out}.lag{lag_months}.tsv"), meta))

        paths.append(write_text(config.output(f"{out}.lag{lag_months}.txt"), table.to_text(), meta))
    _written(paths)


@cmd("series")
def series(
    panel: Arg[str, "Monthly panel (or corpus label)"],
    term: Arg[list[str], "Terms; a comma-separated group is summed"],
    config: RunConfig,
    out: Arg[str, "Output path"] = "series.tsv",
):
    """Monthly relative frequency of one or more terms."""
    monthly = load_panel(config.corpus_path(panel))
    if len(term) == 1:
        path = write_series(
            relative_frequency_series(monthly, term[0]),
            config.output(out),
            config.meta(label=monthly.label, term=term[0]),
        )
        _written([path])
        return

    rows = (
        (",".join(sorted(as_term_set(group))), month_label(month), value)
        for group in term
        for month, value in relative_frequency_series(monthly, group)
    )
    _written([
        write_tsv(
            config.output(out),
            rows,
            header=("term", "month", "relative_frequency"),
            meta=config.meta(label=monthly.label),
        )
    ])


@cmd("adf")
def adf(
    panel: Arg[str, "Monthly panel (or corpus label)"],
    terms: Arg[list[str], "Terms; a comma-separated group is summed"],
    config: RunConfig,
    max_lags: Arg[Annotated[int, Ge(0)] | None, "Largest lag order (default: Schwert rule)"] = None,
    regression: Arg[Regression, "Deterministic terms: constant, or constant and trend"] = "c",
    out: Arg[str, "Output path"] = "adf.tsv",
):
    """Augmented Dickey-Fuller test on monthly term frequencies."""
    monthly = load_panel(config.corpus_path(panel))
    rows = []
    for group in terms:
        values = [v for _, v in relative_frequency_series(monthly, group)]
        result = adf_test(values, max_lags, regression)
        crit = result.critical_values
        rows.append((
            ",".join(sorted(as_term_set(group))),
            result.statistic,
            result.p_value,
            result.stars(),
            result.lags_used,
            result.n_obs,
            crit["1%"],
            crit["5%"],
            crit["10%"],
        ))

    header = ("term", "statistic", "p_value", "stars", "lags_used", "n_obs", "crit_1", "crit_5", "crit_10")
    meta = config.meta(label=monthly.label, regression=regression)
    _written([write_tsv(config.output(out), rows, header=header, meta=meta)])


@cmd("adf-calibrate")
def adf_calibrate(
    config: RunConfig,
    generator: Arg[Literal[tuple(GENERATORS)], "Simulated process"] = "random-walk",
    trials: Arg[Annotated[int, Ge(1)], "Monte Carlo trials"] = 2000,
    length: Arg[Annotated[int, Ge(10)], "Observations per series"] = 500,
    level: Arg[Annotated[float, Interval(gt=0, lt=1)], "Significance level"] = 0.05,
    regression: Arg[Regression, "Deterministic terms"] = "c",
    out: Arg[str, "Output path"] = "adf_calibration.tsv",
):
    """Rejection rate of the ADF test on simulated series."""
    rate = rejection_rate(
        generator,
        n_trials=trials,
        n=length,
        level=level,
        seed=config.seed,
        threads=config.threads,
        regression=regression,
    )
    logger.info("%s: rejected in %.2f%% of %d trials", generator, 100 * rate, trials)
    row = (generator, trials, length, level, regression, rate)
    header = ("generator", "trials", "length", "level", "regression", "rejection_rate")
    _written([write_tsv(config.output(out), [row], header=header, meta=config.meta())])


@cmd("ks")
def ks(
    stats: Arg[Annotated[list[Path], MinLen(2)], "Comment stats files of two or more corpora"],
    config: RunConfig,
    mode: Arg[Literal["asymptotic", "subsampled"], "p-value computation"] = "subsampled",
    out: Arg[str, "Output path"] = "ks.tsv",
):
    """Pairwise two-sample KS tests of words per comment."""
    loaded = _load_stats(config, stats)
    rows = []
    for (label_x, x), (label_y, y) in combinations(loaded, 2):
        result = ks_two_sample(
            [s.n_words for s in x],
            [s.n_words for s in y],
            mode=mode,
            subsample_size=config.ks_subsample,
            repetitions=config.ks_repetitions,
            seed=config.seed,
        )
        rows.append((label_x, label_y, result.n, result.m, result.statistic, result.p_value))

    header = ("corpus_a", "corpus_b", "n_a", "n_b", "statistic", "p_value")
    _written([write_tsv(config.output(out), rows, header=header, meta=config.meta(mode=mode))])


@cmd("bootstrap")
def bootstrap(
    stats: Arg[Annotated[list[Path], MinLen(1)], "Comment stats files"],
    config: RunConfig,
    samples: Arg[Annotated[int, Ge(1)] | None, "Resamples per corpus (default: from config)"] = None,
    fraction: Arg[Annotated[float, Interval(gt=0, le=1)] | None, "Resample size as a fraction of the corpus"] = None,
    out: Arg[str, "Output path"] = "bootstrap.tsv",
):
    """Bootstrap means of words per comment."""
    samples = samples or config.bootstrap_samples
    fraction = fraction or config.bootstrap_fraction

    rows = []
    for label, values in _load_stats(config, stats):
        result = bootstrap_means([s.n_words for s in values], samples, fraction, config.seed)
        logger.info("%s: mean %.3f (sd %.3f)", label, result.center, result.spread)
        rows.extend((label, i, mean) for i, mean in enumerate(result.means, start=1))

    meta = config.meta(samples=samples, fraction=fraction)
    _written([write_tsv(config.output(out), rows, header=("label", "sample", "mean"), meta=meta)])


@cmd("zipf")
def zipf(
    stats: Arg[Annotated[list[Path], MinLen(1)], "Comment stats files"],
    config: RunConfig,
    out: Arg[str, "Output path"] = "zipf.tsv",
):
    """Rank distribution of words per comment.

    Comments left without words after cleaning are skipped.
    """
    rows = []
    for label, values in _load_stats(config, stats):
        counts = [s.n_words for s in values if s.n_words > 0]
        if len(counts) < len(values):
            logger.info("%s: skipping %d comment(s) without words", label, len(values) - len(counts))
        if not counts:
            raise DataError(f"{label}: no comment has any words")
        rows.extend((label, rank, value) for rank, value in zipf_distribution(counts))
    _written([write_tsv(config.output(out), rows, header=("label", "rank", "n_words"), meta=config.meta())])


@cmd("daily")
def daily(
    stats: Arg[Annotated[list[Path], MinLen(1)], "Comment stats files"],
    config: RunConfig,
    by_source: Arg[bool, "Give every subreddit of a corpus its own series"] = False,
    out: Arg[str, "Output path"] = "daily.tsv",
):
    """Comments per UTC day, with zero-count days filled in.

    With `--by-source` each (corpus, subreddit) pair is counted on its own
    date range, so a subreddit that went quiet (e.g. quarantined) shows as a
    run of zeros instead of being hidden by its neighbours.
    """
    rows = []
    for label, values in _load_stats(config, stats):
        groups = {None: values}
        if by_source:
            groups = defaultdict(list)
            for s in values:
                groups[s.source].append(s)
        for source in sorted(groups, key=str):
            prefix = (label, source) if by_source else (label,)
            for day, count in comments_per_day(s.created_utc for s in groups[source]).items():
                rows.append((*prefix, day.isoformat(), count))

    header = ("label", "source", "date", "count") if by_source else ("label", "date", "count")
    _written([write_tsv(config.output(out), rows, header=header, meta=config.meta(by_source=by_source))])

