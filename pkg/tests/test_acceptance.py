"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints one PASS line when its criterion holds (run with
``pytest tests/test_acceptance.py -v -s``). Expected values marked as
derived were computed with the independent brute-force implementations in
oracles.py, never copied from the code under test.
"""

import json
import random
import statistics
import time

import pytest

import oracles
from stylesearch import (
    CatalogStore,
    ClusterIndex,
    FixtureProviders,
    ScoringParams,
    classes,
    classify,
    load_default_taxonomy,
    match_detections,
    precision_recall_f1,
    pr_curve,
    recommend,
    result_to_dict,
    split_counts,
)
from stylesearch.cli import EXIT_OK, main
from stylesearch.geometry import BoundingBox, iou
from stylesearch.index import snapshot_load, snapshot_save
from stylesearch.metrics import MatchCounts
from stylesearch.providers import Detection, Embedding
from stylesearch.synth import _COLORS, _FITS, _MATERIALS, _PATTERNS, generate_catalog_lines

PARAMS = ScoringParams()


def test_bm25_oracle_equivalence_1000_trials():
    """search scores/ranking == direct-formula oracle, 1e-9, < 10 s."""
    rng = random.Random(220401)
    vocab = [f"t{i:02d}" for i in range(20)]
    started = time.perf_counter()
    for trial in range(1000):
        n_docs = rng.randint(1, 30)
        docs = {
            f"doc{i:02d}": [rng.choice(vocab) for _ in range(rng.randint(0, 12))]
            for i in range(n_docs)
        }
        index = ClusterIndex("trial")
        for doc_id, tokens in docs.items():
            index.add(doc_id, " ".join(tokens))
        query_tokens = [
            rng.choice(vocab + ["novel1", "novel2"]) for _ in range(rng.randint(1, 6))
        ]
        expected = oracles.bm25_ranking(docs, query_tokens, n_docs)
        hits = index.search(PARAMS, " ".join(query_tokens), n_docs)
        oracles.assert_rankings_match(
            [(h.doc_id, h.score) for h in hits], expected, tol=1e-9
        )
        for hit in hits:
            direct = index.bm25_score(PARAMS, query_tokens, hit.doc_id)
            assert abs(hit.score - direct) <= 1e-9
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    print(f"\nPASS bm25-oracle-equivalence (1000 trials in {elapsed:.2f}s)")


def test_bm25_worked_example():
    """3-doc corpus: score(d1) within 1e-3 of 1.0155; ranking == oracle ranking."""
    index = ClusterIndex("demo")
    corpus = {
        "d1": "blue denim trousers",
        "d2": "black cotton trousers slim fit",
        "d3": "blue floral dress",
    }
    for doc_id, text in corpus.items():
        index.add(doc_id, text)
    docs = {d: t.split() for d, t in corpus.items()}
    oracle_d1 = oracles.bm25_score(docs, "d1", ["blue", "trousers"])
    got_d1 = index.bm25_score(PARAMS, ["blue", "trousers"], "d1")
    assert abs(got_d1 - oracle_d1) <= 1e-3  # oracle agreement at stated tolerance
    assert abs(got_d1 - oracle_d1) <= 1e-9  # and in fact exact to formula precision
    assert abs(got_d1 - 1.0155) <= 1e-3

    hits = index.search(PARAMS, "blue trousers", 10)
    expected = oracles.bm25_ranking(docs, ["blue", "trousers"], 10)
    assert [h.doc_id for h in hits] == [d for d, _ in expected] == ["d1", "d3", "d2"]
    assert {h.doc_id for h in hits} == {"d1", "d2", "d3"}
    assert hits[0].doc_id == "d1"
    print(f"\nPASS bm25-worked-example (score(d1)={got_d1:.6f}, ranking {[h.doc_id for h in hits]})")


def test_ranking_contracts_500_cases():
    """Zero-match exclusion, top_k truncation, deterministic ties; 500 seeded cases."""
    rng = random.Random(55077)
    vocab = [f"w{i:02d}" for i in range(18)]
    for case in range(500):
        n_docs = rng.randint(2, 25)
        docs = {}
        for i in range(n_docs):
            docs[f"doc{i:02d}"] = [rng.choice(vocab) for _ in range(rng.randint(0, 10))]
        # a pair of identical documents to exercise the tie rule
        twin = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
        docs["twin_b"] = twin
        docs["twin_a"] = twin
        index = ClusterIndex("case")
        for doc_id, tokens in docs.items():
            index.add(doc_id, " ".join(tokens))
        query_tokens = [rng.choice(vocab + ["absent"]) for _ in range(rng.randint(1, 5))]
        top_k = rng.randint(1, 8)
        hits = index.search(PARAMS, " ".join(query_tokens), top_k)
        # truncation
        matching = {
            d for d, toks in docs.items() if any(t in toks for t in query_tokens)
        }
        assert len(hits) == min(top_k, len(matching))
        # zero-match exclusion
        for hit in hits:
            assert hit.doc_id in matching
        # determinism
        rerun = index.search(PARAMS, " ".join(query_tokens), top_k)
        assert [(h.doc_id, h.score) for h in hits] == [(h.doc_id, h.score) for h in rerun]
        # tie rule: twins adjacent with twin_a first whenever both returned
        ids = [h.doc_id for h in hits]
        if "twin_a" in ids and "twin_b" in ids:
            assert ids.index("twin_a") + 1 == ids.index("twin_b")
        scores = [h.score for h in hits]
        assert scores == sorted(scores, reverse=True)
    print("\nPASS ranking-contracts (500 cases)")


def test_zero_shot_oracle_equivalence_1000():
    """classify == brute-force cosine+sort on 1000 instances incl. exact ties."""
    rng = random.Random(90210)
    for trial in range(1000):
        dim = rng.randint(2, 64)
        image = [rng.uniform(-1, 1) for _ in range(dim)]
        if not any(image):
            image[0] = 0.5
        count = rng.randint(1, 50)
        candidates = []
        for i in range(count):
            vec = [rng.uniform(-1, 1) for _ in range(dim)]
            if not any(vec):
                vec[0] = 0.3
            candidates.append((f"label{i:02d}", vec))
        if trial % 4 == 0 and count >= 3:  # engineered exact ties
            candidates[2] = (candidates[2][0], list(candidates[0][1]))
            candidates[1] = (candidates[1][0], list(candidates[0][1]))
        expected = oracles.classify_ranking(image, candidates)
        result = classify(
            Embedding(tuple(image)),
            [(lab, Embedding(tuple(vec))) for lab, vec in candidates],
        )
        assert [lab for lab, _ in result.ranked] == [lab for lab, _ in expected], f"trial {trial}"
        assert result.label == expected[0][0]
        for (_, got), (_, want) in zip(result.ranked, expected):
            assert abs(got - want) <= 1e-12
    print("\nPASS zero-shot-oracle-equivalence (1000 instances)")


def test_zero_shot_scale_invariance_1000():
    """Ranked order invariant under positive scaling; 1000 trials, 0 violations."""
    rng = random.Random(31337)
    violations = 0
    for _ in range(1000):
        dim = rng.randint(2, 32)
        image = [rng.uniform(-1, 1) for _ in range(dim)]
        if not any(image):
            image[0] = 1.0
        count = rng.randint(2, 20)
        candidates = []
        for i in range(count):
            vec = [rng.uniform(-1, 1) for _ in range(dim)]
            if not any(vec):
                vec[0] = 1.0
            candidates.append((f"l{i:02d}", vec))
        base = classify(
            Embedding(tuple(image)),
            [(lab, Embedding(tuple(vec))) for lab, vec in candidates],
        )
        image_scale = rng.uniform(1e-3, 1e3)
        scaled = []
        for lab, vec in candidates:
            s = rng.uniform(1e-3, 1e3)
            scaled.append((lab, Embedding(tuple(x * s for x in vec))))
        result = classify(Embedding(tuple(x * image_scale for x in image)), scaled)
        if [l for l, _ in result.ranked] != [l for l, _ in base.ranked]:
            violations += 1
    assert violations == 0
    print("\nPASS zero-shot-scale-invariance (1000 trials, 0 violations)")


def test_metrics_oracle_200_instances():
    """iou / matching / PRF1 / PR curve vs brute force, 1e-9; headline F1 exact."""
    rng = random.Random(7240)
    class_pool = classes()
    for trial in range(200):
        preds, truths = [], []
        for _ in range(rng.randint(0, 20)):
            x, y = rng.uniform(0, 70), rng.uniform(0, 70)
            w, h = rng.uniform(2, 28), rng.uniform(2, 28)
            preds.append(Detection(
                garment_class=rng.choice(class_pool),
                confidence=round(rng.random(), 3),
                box=BoundingBox(x, y, x + w, y + h),
            ))
        for _ in range(rng.randint(0, 20)):
            x, y = rng.uniform(0, 70), rng.uniform(0, 70)
            w, h = rng.uniform(2, 28), rng.uniform(2, 28)
            truths.append((rng.choice(class_pool), BoundingBox(x, y, x + w, y + h)))
        for cls, tbox in truths[: rng.randint(0, len(truths))]:
            jx, jy = min(1.0, tbox.width / 4), min(1.0, tbox.height / 4)
            preds.append(Detection(
                garment_class=cls, confidence=round(rng.random(), 3),
                box=BoundingBox(
                    tbox.x1 + rng.uniform(-jx, jx), tbox.y1 + rng.uniform(-jy, jy),
                    tbox.x2 + rng.uniform(-jx, jx), tbox.y2 + rng.uniform(-jy, jy),
                ),
            ))
        # iou
        for a in preds[:5]:
            for b in preds[:5]:
                want = oracles.iou(tuple(a.box.as_list()), tuple(b.box.as_list()))
                assert abs(iou(a.box, b.box) - want) <= 1e-9
        # matching counts
        got = match_detections(preds, truths, 0.5)
        want_counts = oracles.match_counts(
            [(p.garment_class, p.confidence, tuple(p.box.as_list())) for p in preds],
            [(c, tuple(b.as_list())) for c, b in truths],
            0.5,
        )
        assert (got.tp, got.fp, got.fn) == want_counts, f"trial {trial}"
        # P/R/F1
        got_prf = precision_recall_f1(got)
        want_prf = oracles.prf1(*want_counts)
        assert all(abs(g - w) <= 1e-9 for g, w in zip(got_prf, want_prf))
        # PR curve
        curve = pr_curve(preds, truths, 0.5)
        thresholds = sorted({p.confidence for p in preds}, reverse=True)
        assert [pt.threshold for pt in curve] == thresholds
        for pt in curve:
            kept = [p for p in preds if p.confidence >= pt.threshold]
            counts = oracles.match_counts(
                [(p.garment_class, p.confidence, tuple(p.box.as_list())) for p in kept],
                [(c, tuple(b.as_list())) for c, b in truths],
                0.5,
            )
            p_want, r_want, _ = oracles.prf1(*counts)
            assert abs(pt.precision - p_want) <= 1e-9
            assert abs(pt.recall - r_want) <= 1e-9
        recalls = [pt.recall for pt in curve]
        assert recalls == sorted(recalls)

    precision, recall, f1 = precision_recall_f1(MatchCounts(tp=97, fp=3, fn=3))
    assert (precision, recall) == (0.97, 0.97)
    assert f1 == 0.97  # exact in IEEE doubles
    print("\nPASS metrics-oracle (200 instances; F1(97,3,3) == 0.97 exactly)")


def test_end_to_end_fixture_scenario(fixtures_dir, relevance, tmp_path, capsys):
    """10 images, >= 15 detections: planted products in top-3; precision@3 = 1.0; < 5 s."""
    taxonomy = load_default_taxonomy()
    providers = FixtureProviders(fixtures_dir)
    store = CatalogStore()
    report = store.ingest_file(fixtures_dir / "catalog.ndjson")
    assert report.accepted >= 60
    labels = {store.get(pid).label for pid in [e["primary"] for e in relevance]}
    by_class = {cls: [] for cls in classes()}
    for cls in classes():
        by_class[cls] = [l for l in labels if l in taxonomy.subcategories(cls)]
    assert all(by_class[cls] for cls in classes())  # catalog spans all five classes

    images = sorted({e["image"] for e in relevance})
    assert len(images) == 10
    assert len(relevance) >= 15

    started = time.perf_counter()
    runs_lines = []
    outputs = {}
    for image in images:
        result = recommend(providers.image_ref(image), providers, taxonomy, store)
        outputs[image] = json.dumps(result_to_dict(result), sort_keys=True)
        groups = {g.crop_key: g for g in result.groups}
        for entry in [e for e in relevance if e["image"] == image]:
            group = groups[entry["crop_key"]]
            assert group.error is None
            assert group.assigned_label == entry["label"]
            hit_ids = [rp.product.id for rp in group.hits]
            assert entry["primary"] in hit_ids[:3], (entry["crop_key"], hit_ids[:3])
            assert set(hit_ids[:3]) == set(entry["planted"])
            runs_lines.append(json.dumps({
                "query": entry["crop_key"],
                "hits": hit_ids,
                "relevant": entry["planted"],
            }))
    # byte-identical on a second pass
    for image in images:
        result = recommend(providers.image_ref(image), providers, taxonomy, store)
        assert json.dumps(result_to_dict(result), sort_keys=True) == outputs[image]
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"took {elapsed:.2f}s"

    runs_path = tmp_path / "runs.ndjson"
    runs_path.write_text("\n".join(runs_lines) + "\n")
    code = main(["eval", "retrieval", "--runs", str(runs_path), "-k", "3"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    retrieval = json.loads(out)
    assert retrieval["queries"] == len(relevance)
    assert retrieval["precision_at_3"] == pytest.approx(1.0, abs=1e-12)
    assert retrieval["recall_at_3"] == pytest.approx(1.0, abs=1e-12)
    print(f"\nPASS end-to-end-fixtures ({len(relevance)} detections over 10 images, "
          f"precision@3={retrieval['precision_at_3']}, {elapsed:.2f}s, deterministic)")


def test_scale_and_performance(tmp_path):
    """100k synthetic products: ingest < 60 s, p50 search < 50 ms, exact snapshot."""
    lines = list(generate_catalog_lines(100_000))
    assert len(lines) == 100_000
    store = CatalogStore()
    started = time.perf_counter()
    report = store.ingest_lines(lines)
    ingest_seconds = time.perf_counter() - started
    assert report.accepted == 100_000
    assert not report.rejected
    assert ingest_seconds < 60.0, f"ingest took {ingest_seconds:.1f}s"

    cluster_name, doc_count = max(store.list_clusters(), key=lambda nc: nc[1])
    rng = random.Random(5150)
    queries = [
        f"{rng.choice(_COLORS)} {rng.choice(_PATTERNS)} {rng.choice(_FITS)} {rng.choice(_MATERIALS)}"
        for _ in range(101)
    ]
    durations = []
    for query in queries:
        t0 = time.perf_counter()
        store.search_cluster(cluster_name, query, 10)
        durations.append(time.perf_counter() - t0)
    p50 = statistics.median(durations)
    assert p50 < 0.050, f"p50 {p50 * 1000:.2f}ms"

    index = store.cluster(cluster_name)
    path = tmp_path / "cluster.snapshot.json"
    snapshot_save(index, store.params, path)
    loaded, params = snapshot_load(path)
    for query in queries[:25]:
        original = [(h.doc_id, h.score) for h in index.search(store.params, query, 10)]
        restored = [(h.doc_id, h.score) for h in loaded.search(params, query, 10)]
        assert original == restored  # exact, including float equality
    print(f"\nPASS scale-perf (ingest {ingest_seconds:.1f}s, p50 {p50 * 1000:.2f}ms on "
          f"'{cluster_name}' [{doc_count} docs], snapshot exact)")


def test_split_counts_dataset_arithmetic():
    """Train/holdout split of the documented corpus size."""
    assert split_counts(111824, 0.9) == (100641, 11183)
    print("\nPASS split-counts (111824 -> 100641/11183)")
