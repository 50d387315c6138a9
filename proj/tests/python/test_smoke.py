import math
import os
from pathlib import Path

import pytest

import conet

MINICORPUS = Path(os.environ.get("CONET_MINICORPUS", Path(__file__).resolve().parents[2] / "data" / "minicorpus"))

TEXT = (
    "It was the best of times, it was the worst of times, it was the age of wisdom, "
    "it was the age of foolishness, it was the epoch of belief, it was the epoch of incredulity."
)


def test_tokenize_and_preprocess():
    assert conet.tokenize("Hello, World! It's 2024.") == ["hello", "world", "it", "s"]
    doc = conet.preprocess(TEXT, "en", text_id="dickens")
    assert doc.text_id == "dickens"
    assert doc.tokens[:4] == ["it", "was", "the", "best"]
    filtered = conet.preprocess(TEXT, "en", filter_stopwords=True)
    assert "the" not in filtered.tokens and filtered.stopwords_filtered
    short = conet.truncate(doc, 500)
    assert short.short_document and len(short) == len(doc)


def test_shuffles_are_deterministic_permutations():
    doc = conet.preprocess(TEXT, "en", text_id="dickens")
    a = conet.make_shuffles(doc, 5, seed=42)
    b = conet.make_shuffles(doc, 5, seed=42)
    assert [r.tokens for r in a] == [r.tokens for r in b]
    for r in a:
        assert sorted(r.tokens) == sorted(doc.tokens)


def test_network_enrichment_and_metrics():
    doc = conet.preprocess(TEXT, "en")
    net = conet.build_cooc(doc)
    assert net.node_count == len(set(doc.tokens))
    table = conet.synthetic_table(net.words, 50, 0)
    assert table.source_id == "synthetic:0"
    cands = conet.candidates(net, table)
    weights = [c.weight for c in cands]
    assert weights == sorted(weights, reverse=True)
    k = conet.virtual_edge_budget(net.cooc_edge_count, 50)
    g = conet.enrich_global(net, cands, 50)
    l = conet.enrich_local(net, cands, 50)
    assert len(g.virtual_edges) == len(l.virtual_edges) == min(k, len(cands))
    assert [e[:2] for e in g.virtual_edges] == sorted(c.pair for c in cands[:k])

    pr = conet.pagerank(g)
    assert math.isclose(sum(pr), 1.0, rel_tol=1e-9)
    m = conet.compute_metrics(g)
    assert len(m) == 12
    assert m[("avg_shortest_path", "all_nodes")] == pytest.approx(conet.avg_shortest_path(g))
    assert len(conet.top_words(net, 3)) == 3


def test_stats():
    m = conet.normalize(1.2, [0.9, 1.0, 1.1, 1.0])
    assert m.d == pytest.approx(2.3570226039551585, rel=1e-12)
    assert m.informative
    assert conet.informativeness([m, conet.normalize(1.0, [0.9, 1.1])]) == 50.0
    assert conet.coefficient_of_variation([1, 3]) == pytest.approx(0.5)
    assert conet.variability_ratio([0.8, 1.2], [0.9, 1.1]) == pytest.approx(2.0)
    assert conet.disparity_alpha(1.0, 2.0, 3) == pytest.approx(0.25)
    with pytest.raises(conet.PreconditionError):
        conet.coefficient_of_variation([4.0])


def test_errors_map_to_python(tmp_path):
    bad = tmp_path / "bad.vec"
    bad.write_text("2 2\nfoo 1 2\nbar 1\n")
    with pytest.raises(conet.FormatError):
        conet.load_vectors(bad)
    with pytest.raises(ValueError):
        conet.load_vectors(bad)


def test_run_pipeline(tmp_path):
    summary = conet.run_pipeline(
        str(MINICORPUS / "mini.cfg"),
        {
            "out": str(tmp_path / "out"),
            "sizes": "200",
            "stopwords": "keep",
            "strategies": "global",
            "fractions": "0,100",
            "replicas": "3",
            "embedding_dim": "32",
            "workers": "2",
        },
    )
    assert summary["records"] == 10 * 2 * 12
    assert not summary["failures"]
    header = (tmp_path / "out" / "records.csv").read_text().splitlines()[0]
    assert header.startswith("text_id,")
    assert (tmp_path / "out" / "informativeness.csv").exists()
