#!/usr/bin/env python3
"""Regenerate the demo/test fixtures in this directory.

Deterministic: same inputs, byte-identical outputs. The script verifies its
own output with self-contained brute-force checks (argmax cosine for the
classifier, direct-formula BM25 for the ranking) before writing anything,
so the committed fixtures are guaranteed to satisfy the planted-ranking
design: per detection, three planted products share >= 4 content tokens
with the caption body and occupy the top-3 ranks of the routed cluster,
while every other product in that cluster shares <= 1.

Run: python3 fixtures/make_fixtures.py
"""

from __future__ import annotations

import json
import math
import random
import re
from pathlib import Path

HERE = Path(__file__).parent
DIM = 8
SEED = 77041

TAXONOMY = json.loads(
    (HERE.parent / "src/stylesearch/data/default_taxonomy.json").read_text("utf-8")
)

# One column per detection; values never repeat across detections, so any
# two captions share zero content tokens.
COLORS = ["indigo", "scarlet", "emerald", "cobalt", "amber", "plum", "coral",
          "sage", "maroon", "turquoise", "bronze", "lilac", "ochre", "magenta",
          "cinnamon", "pearl"]
MATERIALS = ["denim", "corduroy", "flannel", "linen", "cashmere", "tweed",
             "velvet", "chambray", "moleskin", "seersucker", "gabardine",
             "terry", "poplin", "jacquard", "boucle", "ripstop"]
FITS = ["tapered", "relaxed", "boxy", "slouchy", "athletic", "cropped",
        "longline", "slim", "roomy", "fitted", "draped", "structured",
        "breezy", "snug", "flowy", "angular"]
PATTERNS = ["pinstripe", "windowpane", "ombre", "tiedye", "colorblock",
            "marled", "speckled", "quilted", "ribbed", "cableknit",
            "honeycomb", "basketweave", "herringbone", "gingham", "batik",
            "camo"]
DETAILS = ["stonewash", "selvedge", "drawcord", "snapbutton", "kangaroo",
           "epaulets", "cuffed", "distressed", "embroidered", "patchwork",
           "zippered", "toggled", "laceup", "fringed", "studded", "piped"]

# Words allowed in product copy but never in caption bodies, and vice versa.
CAPTION_SCAFFOLD = {"this", "features", "a", "design", "in", "with", "accents"}
PRODUCT_FILLER = {"of", "plus", "trim", "tone", "and", "finish", "style",
                  "weave", "classic", "wardrobe", "staple"}

DISTRACTOR_WORDS = ["onyx", "ivory", "taupe", "heather", "graphite", "sand",
                    "clay", "moss", "fog", "ash", "midnight", "dove",
                    "walnut", "caramel", "espresso", "smoke", "frost",
                    "storm", "petal", "dusk", "ebony", "chalk", "fawn",
                    "mint"]

# (image, class, label, confidence, box); grouped per image in
# confidence-descending order so crop indexes read off directly.
DETECTIONS = [
    ("img_001", "trousers", "jeans", 0.92, [120, 520, 360, 940]),
    ("img_001", "short_sleeve_top", "t shirt", 0.88, [140, 120, 380, 500]),
    ("img_002", "long_sleeve_outerwear", "denim jacket", 0.91, [80, 100, 420, 560]),
    ("img_002", "trousers", "chinos", 0.84, [130, 560, 350, 950]),
    ("img_003", "long_sleeve_top", "sweater", 0.89, [150, 130, 420, 520]),
    ("img_004", "shorts", "denim shorts", 0.87, [160, 500, 400, 780]),
    ("img_004", "short_sleeve_top", "polo shirt", 0.82, [150, 100, 400, 480]),
    ("img_005", "long_sleeve_outerwear", "parka", 0.93, [60, 80, 430, 640]),
    ("img_005", "long_sleeve_top", "hoodie", 0.78, [160, 640, 380, 900]),
    ("img_006", "trousers", "joggers", 0.86, [140, 500, 360, 930]),
    ("img_007", "short_sleeve_top", "jersey", 0.90, [130, 110, 390, 490]),
    ("img_007", "shorts", "athletic shorts", 0.83, [150, 500, 390, 760]),
    ("img_008", "long_sleeve_top", "cardigan", 0.88, [120, 120, 400, 540]),
    ("img_008", "trousers", "dress trousers", 0.81, [140, 540, 340, 950]),
    ("img_009", "shorts", "cargo shorts", 0.85, [150, 480, 400, 770]),
    ("img_010", "long_sleeve_outerwear", "trench coat", 0.94, [70, 90, 440, 700]),
]

IMAGE_SIZE = (512, 1024)

# Clusters that get distractors only (no detection routes to them).
EXTRA_DISTRACTOR_LABELS = ["cargo trousers", "chino shorts", "swim shorts",
                           "bomber jacket", "raincoat", "overcoat",
                           "flannel shirt", "turtleneck", "henley",
                           "camp collar shirt", "baseball tee"]


def tokenize(text: str) -> list[str]:
    return re.findall(r"[^\W_]+", text.lower())


def cluster_of(label: str) -> str:
    return "_".join(tokenize(label))


def unit_vector(rng: random.Random) -> list[float]:
    v = [rng.gauss(0.0, 1.0) for _ in range(DIM)]
    norm = math.sqrt(sum(x * x for x in v))
    return [round(x / norm, 6) for x in v]


def main() -> None:
    rng = random.Random(SEED)

    all_labels = [label for labels in TAXONOMY.values() for label in labels]
    vectors: dict[str, list[float]] = {label: unit_vector(rng) for label in all_labels}

    detections_docs: dict[str, dict] = {}
    captions: dict[str, str] = {}
    catalog: list[dict] = []
    relevance: list[dict] = []

    per_image_counter: dict[str, int] = {}
    for k, (image, cls, label, conf, box) in enumerate(DETECTIONS):
        doc = detections_docs.setdefault(
            image,
            {"image": image, "width": IMAGE_SIZE[0], "height": IMAGE_SIZE[1],
             "detections": []},
        )
        doc["detections"].append({"class": cls, "confidence": conf, "box": box})
        crop_index = per_image_counter.get(image, 0)
        per_image_counter[image] = crop_index + 1
        crop_key = f"{image}_crop{crop_index}"

        # Crop embedding == target label embedding: cosine is exactly 1.0.
        vectors[crop_key] = list(vectors[label])

        color, material = COLORS[k], MATERIALS[k]
        fit, pattern, detail = FITS[k], PATTERNS[k], DETAILS[k]
        captions[crop_key] = (
            f"this {label} features a {fit} {pattern} design "
            f"in {color} {material} with {detail} accents"
        )

        planted = [
            {
                "id": f"plant_{k:02d}a",
                "label": label,
                "title": f"{color} {pattern} {label}",
                "description": f"{fit} {label} of {color} {material} plus {detail} trim",
            },
            {
                "id": f"plant_{k:02d}b",
                "label": label,
                "title": f"{fit} {material} {label}",
                "description": f"{pattern} {color} tone and {detail} finish",
            },
            {
                "id": f"plant_{k:02d}c",
                "label": label,
                "title": f"{detail} {label}",
                "description": f"{color} {fit} style {pattern} {material} weave",
            },
        ]
        for j, product in enumerate(planted):
            product["image_uri"] = f"https://img.example/{product['id']}.jpg"
            product["retailer"] = f"retailer_{(k + j) % 7:02d}"
            product["price"] = round(19.0 + 7.3 * k + 3.1 * j, 2)
        catalog.extend(planted)
        relevance.append({
            "image": image,
            "crop_key": crop_key,
            "label": label,
            "cluster": cluster_of(label),
            "planted": [p["id"] for p in planted],
            "primary": planted[0]["id"],
        })

    # img_011: a single sub-threshold detection -> NoDetections downstream.
    detections_docs["img_011"] = {
        "image": "img_011", "width": IMAGE_SIZE[0], "height": IMAGE_SIZE[1],
        "detections": [
            {"class": "trousers", "confidence": 0.10, "box": [100, 500, 300, 900]}
        ],
    }

    # Distractors: two per detection cluster plus singletons elsewhere.
    word = iter(DISTRACTOR_WORDS * 4)
    dist_count = 0
    for entry in relevance:
        for _ in range(2):
            w1, w2 = next(word), next(word)
            dist_count += 1
            catalog.append({
                "id": f"dist_{dist_count:03d}",
                "label": entry["label"],
                "title": f"{w1} {entry['label']}",
                "description": f"classic {w2} {entry['label']} wardrobe staple",
                "image_uri": f"https://img.example/dist_{dist_count:03d}.jpg",
                "retailer": f"retailer_{dist_count % 5:02d}",
                "price": round(24.0 + 2.7 * dist_count, 2),
            })
    for label in EXTRA_DISTRACTOR_LABELS:
        w1, w2 = next(word), next(word)
        dist_count += 1
        catalog.append({
            "id": f"dist_{dist_count:03d}",
            "label": label,
            "title": f"{w1} {label}",
            "description": f"classic {w2} {label} wardrobe staple",
            "image_uri": f"https://img.example/dist_{dist_count:03d}.jpg",
            "retailer": f"retailer_{dist_count % 5:02d}",
            "price": round(24.0 + 2.7 * dist_count, 2),
        })

    verify(vectors, captions, catalog, relevance)

    (HERE / "detections.json").write_text(
        json.dumps([detections_docs[k] for k in sorted(detections_docs)], indent=2) + "\n",
        encoding="utf-8",
    )
    (HERE / "embeddings.json").write_text(
        json.dumps({"dim": DIM, "vectors": vectors}, indent=2) + "\n", encoding="utf-8"
    )
    (HERE / "captions.json").write_text(
        json.dumps(captions, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (HERE / "catalog.ndjson").write_text(
        "".join(json.dumps(p) + "\n" for p in catalog), encoding="utf-8"
    )
    (HERE / "relevance.json").write_text(
        json.dumps(relevance, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote fixtures: {len(catalog)} products, {len(DETECTIONS)} detections, "
          f"{len(detections_docs)} images")


# -- self-contained verification (no stylesearch imports) --------------------


def verify(vectors, captions, catalog, relevance) -> None:
    # Scaffold/filler vocabularies must stay disjoint.
    assert not CAPTION_SCAFFOLD & PRODUCT_FILLER

    # Classifier: the crop vector must win argmax cosine within its class.
    for entry in relevance:
        crop = vectors[entry["crop_key"]]
        class_labels = [
            labels for labels in TAXONOMY.values() if entry["label"] in labels
        ][0]
        def cos(a, b):
            num = sum(x * y for x, y in zip(a, b))
            na = math.sqrt(sum(x * x for x in a))
            nb = math.sqrt(sum(x * x for x in b))
            return num / (na * nb)
        best = max(class_labels, key=lambda lab: (cos(crop, vectors[lab]), ))
        assert best == entry["label"], (entry["crop_key"], best)

    # Token-overlap constraints and brute-force BM25 top-3.
    by_cluster: dict[str, list[dict]] = {}
    for product in catalog:
        by_cluster.setdefault(cluster_of(product["label"]), []).append(product)

    for entry in relevance:
        caption = captions[entry["crop_key"]]
        prompt = f"this {entry['label']} features"
        body = caption[len(prompt):].strip()
        body_tokens = set(tokenize(body))
        label_tokens = set(tokenize(entry["label"]))
        content = body_tokens - CAPTION_SCAFFOLD - label_tokens
        planted_ids = set(entry["planted"])
        cluster_docs = by_cluster[entry["cluster"]]
        for product in cluster_docs:
            doc_tokens = set(tokenize(product["title"] + " " + product["description"]))
            shared = len(content & doc_tokens)
            if product["id"] in planted_ids:
                assert shared >= 4, (entry["crop_key"], product["id"], shared)
            else:
                assert shared <= 1, (entry["crop_key"], product["id"], shared)

        # Direct BM25 over the cluster for query = label + body.
        query = tokenize(entry["label"] + " " + body)
        docs = {
            p["id"]: tokenize(p["title"] + " " + p["description"]) for p in cluster_docs
        }
        N = len(docs)
        avgdl = sum(len(t) for t in docs.values()) / N
        def bm25(doc_tokens):
            score = 0.0
            for term in dict.fromkeys(query):
                tf = doc_tokens.count(term)
                if not tf:
                    continue
                n = sum(1 for t in docs.values() if term in t)
                idf = math.log((N - n + 0.5) / (n + 0.5) + 1)
                score += idf * tf * 2.2 / (tf + 1.2 * (0.25 + 0.75 * len(doc_tokens) / avgdl))
            return score
        ranked = sorted(docs, key=lambda d: (-bm25(docs[d]), d))
        top3 = set(ranked[:3])
        assert top3 == planted_ids, (entry["crop_key"], ranked[:5])
        assert entry["primary"] in top3

    assert len(catalog) >= 60, len(catalog)
    assert len({p["id"] for p in catalog}) == len(catalog)
    print(f"fixture verification passed: {len(relevance)} queries, "
          f"{len(by_cluster)} clusters")


if __name__ == "__main__":
    main()
