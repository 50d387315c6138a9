"""Enriched word co-occurrence networks: construction, metrics and shuffle statistics."""

from ._core import (
    ConetError,
    ConfigError,
    ConvergenceError,
    CoocNetwork,
    Document,
    EdgeCandidate,
    EmbeddingTable,
    FormatError,
    NormalizedMetric,
    PreconditionError,
    Strategy,
    __version__,
    avg_shortest_path,
    betweenness,
    build_cooc,
    candidates,
    closeness,
    clustering,
    coefficient_of_variation,
    compute_metrics,
    cosine,
    disparity_alpha,
    eigenvector,
    enrich_global,
    enrich_local,
    informativeness,
    load_vectors,
    make_shuffles,
    normalize,
    pagerank,
    preprocess,
    run_pipeline,
    synthetic_table,
    tokenize,
    top_words,
    truncate,
    variability_ratio,
    virtual_edge_budget,
    write_vectors,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
