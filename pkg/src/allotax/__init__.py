# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

__version__ = "0.1.0"

from ._allotax import (
    AllotaxSpec,
    BalanceBars,
    HistogramGrid,
    balance_bars,
    build_allotax_spec,
    build_histogram,
    outer_cells,
    select_bin_labels,
)
from ._artifacts import SourceFile, file_digest, read_metadata
from ._clean import CleaningConfig, TokenStream, clean_text, clean_tokens, extract_ngrams
from ._dominance import (
    DOMINANCE_MODES,
    DominanceEntry,
    DominanceTable,
    MonthlyPanel,
    dominance_table,
    dominant_term,
    load_panel,
    monthly_panels,
    register_mode,
    relative_frequency_series,
)
from ._errors import (
    AllotaxError,
    DataError,
    DigestMismatchError,
    FetchError,
    InsufficientSpanError,
    InvalidArgumentError,
    MissingMonthError,
    ParseError,
)
from ._fetch import fetch_dump
from ._frequency import FrequencyTable, count_frequencies, load_frequency_table, merge_tables, persist_frequency_table
from ._ingest import CommentStat, CorpusManifest, IngestResult, ingest_corpus, load_comment_stats
from ._ngram_bias import BiasEntry, BiasQuery, filter_ngrams_containing, top_biased
from ._openers import open_dump, register_opener
from ._rank import RankedLexicon, combined_lexicon, comments_per_day, rank_pair, tie_averaged_ranks, zipf_distribution
from ._records import Comment, FieldMap, SkipReport, filter_comments, parse_ndjson
from ._rtd import DEFAULT_ALPHA, DivergenceConfig, DivergenceEntry, DivergenceReport, contribution, divergence_report, top_contributors
from ._svg import StyleConfig, render_svg, write_svg
from ._types import Direction, Month

__all__ = [
    "DEFAULT_ALPHA",
    "DOMINANCE_MODES",
    "AllotaxError",
    "AllotaxSpec",
    "BalanceBars",
    "BiasEntry",
    "BiasQuery",
    "CleaningConfig",
    "Comment",
    "CommentStat",
    "CorpusManifest",
    "DataError",
    "DigestMismatchError",
    "Direction",
    "DivergenceConfig",
    "DivergenceEntry",
    "DivergenceReport",
    "DominanceEntry",
    "DominanceTable",
    "FetchError",
    "FieldMap",
    "FrequencyTable",
    "HistogramGrid",
    "IngestResult",
    "InsufficientSpanError",
    "InvalidArgumentError",
    "MissingMonthError",
    "Month",
    "MonthlyPanel",
    "ParseError",
    "RankedLexicon",
    "SkipReport",
    "SourceFile",
    "StyleConfig",
    "TokenStream",
    "balance_bars",
    "build_allotax_spec",
    "build_histogram",
    "clean_text",
    "clean_tokens",
    "combined_lexicon",
    "comments_per_day",
    "contribution",
    "count_frequencies",
    "divergence_report",
    "dominance_table",
    "dominant_term",
    "extract_ngrams",
    "fetch_dump",
    "file_digest",
    "filter_comments",
    "filter_ngrams_containing",
    "ingest_corpus",
    "load_comment_stats",
    "load_frequency_table",
    "load_panel",
    "merge_tables",
    "monthly_panels",
    "open_dump",
    "outer_cells",
    "parse_ndjson",
    "persist_frequency_table",
    "rank_pair",
    "read_metadata",
    "register_mode",
    "register_opener",
    "relative_frequency_series",
    "render_svg",
    "select_bin_labels",
    "tie_averaged_ranks",
    "top_biased",
    "top_contributors",
    "write_svg",
    "zipf_distribution",
]
