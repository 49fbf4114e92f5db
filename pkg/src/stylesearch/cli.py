"""Operator CLI.

Commands: ingest, search, recommend, eval detect, eval retrieval, serve,
snapshot save/load. Exit codes: 0 success, 1 usage error, 2 data error,
3 remote error. Configuration precedence: flags > environment (STYLESEARCH_*)
> --config file > defaults.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .catalog import (
    CatalogStore,
    iter_ndjson,
    store_snapshot_load,
    store_snapshot_save,
)
from .config import AppConfig, load_config
from .errors import (
    CorruptSnapshotError,
    RemoteUnavailableError,
    StyleSearchError,
)
from .geometry import BoundingBox
from .metrics import evaluate_detections, evaluate_retrieval
from .pipeline import recommend, result_to_dict
from .providers import Detection, FixtureProviders
from .service import build_runtime, create_app
from .taxonomy import load_default_taxonomy, load_taxonomy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_REMOTE = 3


def _cfg(ctx: click.Context, **overrides) -> AppConfig:
    params = dict(ctx.obj or {})
    params.update({k: v for k, v in overrides.items() if v is not None})
    config_file = params.pop("config_file", None)
    return load_config(config_file, overrides=params)


def _load_store(cfg: AppConfig) -> CatalogStore:
    store_dir = Path(cfg.store_dir)
    if store_dir.exists():
        return CatalogStore.load(store_dir)
    return CatalogStore(cfg.scoring)


def _taxonomy(cfg: AppConfig):
    return load_taxonomy(cfg.taxonomy_path) if cfg.taxonomy_path else load_default_taxonomy()


@click.group()
@click.option("--store", "store_dir", type=click.Path(), default=None,
              help="Store directory (default ./store).")
@click.option("--config", "config_file", type=click.Path(exists=True), default=None,
              help="JSON config file.")
@click.pass_context
def cli(ctx: click.Context, store_dir: str | None, config_file: str | None):
    """Visually-aware product search over label-sharded BM25 clusters."""
    ctx.obj = {"store_dir": store_dir, "config_file": config_file}


@cli.command()
@click.argument("catalog_file", type=click.Path(exists=True))
@click.pass_context
def ingest(ctx, catalog_file: str):
    """Ingest an NDJSON catalog file into the store."""
    cfg = _cfg(ctx)
    store = _load_store(cfg)
    report = store.ingest_file(catalog_file)
    store.save(cfg.store_dir)
    click.echo(json.dumps(report.to_dict(), indent=2))


@cli.command()
@click.option("--cluster", required=True, help="Cluster (normalized label) to search.")
@click.option("--query", "-q", required=True, help="Match query text.")
@click.option("-k", "top_k", type=int, default=10, show_default=True)
@click.option("--fallback/--no-fallback", default=False,
              help="Search all clusters when the cluster is unknown.")
@click.pass_context
def search(ctx, cluster: str, query: str, top_k: int, fallback: bool):
    """Rank products in one cluster for a match query."""
    cfg = _cfg(ctx)
    store = _load_store(cfg)
    hits, used_fallback = store.search_routed(cluster, query, top_k, fallback=fallback)
    out = {
        "cluster": cluster,
        "fallback": used_fallback,
        "hits": [
            {"id": h.doc_id, "score": h.score, "title": store.get(h.doc_id).title}
            for h in hits
        ],
    }
    click.echo(json.dumps(out, indent=2))


@cli.command("recommend")
@click.option("--image", "image_id", required=True, help="Fixture image id, e.g. img_001.")
@click.option("--fixtures", "fixtures_dir", required=True, type=click.Path(exists=True))
@click.option("--taxonomy", "taxonomy_path", type=click.Path(exists=True), default=None)
@click.option("--top-k", type=int, default=None)
@click.option("--output", type=click.Path(), default=None, help="Write JSON here instead of stdout.")
@click.pass_context
def recommend_cmd(ctx, image_id, fixtures_dir, taxonomy_path, top_k, output):
    """Run the full pipeline on a fixture image."""
    cfg = _cfg(ctx, fixtures_dir=fixtures_dir, taxonomy_path=taxonomy_path, top_k=top_k)
    store = _load_store(cfg)
    providers = FixtureProviders(fixtures_dir, confidence_threshold=cfg.confidence_threshold)
    img = providers.image_ref(image_id)
    result = recommend(img, providers, _taxonomy(cfg), store, cfg.pipeline)
    text = json.dumps(result_to_dict(result), indent=2)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


@cli.group()
def eval():
    """Evaluation commands."""


@eval.command("detect")
@click.option("--pred", "pred_file", required=True, type=click.Path(exists=True))
@click.option("--truth", "truth_file", required=True, type=click.Path(exists=True))
@click.option("--iou", "iou_threshold", type=float, default=0.5, show_default=True)
def eval_detect(pred_file, truth_file, iou_threshold):
    """Detection P/R/F1 and PR curve against ground truth.

    PRED holds detection documents ({image, width, height, detections});
    TRUTH holds {image, truths: [{class, box}]} documents. Either file may
    be a JSON array or NDJSON.
    """
    preds_by_image: dict[str, list[Detection]] = {}
    for doc in _load_docs(pred_file):
        preds_by_image[doc["image"]] = [
            Detection(
                garment_class=d["class"],
                confidence=float(d["confidence"]),
                box=BoundingBox(*[float(v) for v in d["box"]]),
            )
            for d in doc["detections"]
        ]
    truths_by_image = {
        doc["image"]: [
            (t["class"], BoundingBox(*[float(v) for v in t["box"]]))
            for t in doc["truths"]
        ]
        for doc in _load_docs(truth_file)
    }
    report = evaluate_detections(preds_by_image, truths_by_image, iou_threshold)
    click.echo(json.dumps(report, indent=2))


@eval.command("retrieval")
@click.option("--runs", "runs_file", required=True, type=click.Path(exists=True),
              help="NDJSON: one {hits: [...], relevant: [...]} object per query.")
@click.option("-k", "ks", type=int, multiple=True, default=(1, 3, 5, 10), show_default=True)
def eval_retrieval(runs_file, ks):
    """precision@k / recall@k / MRR for ranked retrieval runs."""
    runs = [
        (list(doc["hits"]), set(doc["relevant"]))
        for doc in iter_ndjson(runs_file)
    ]
    click.echo(json.dumps(evaluate_retrieval(runs, ks=list(ks)), indent=2))


@cli.command()
@click.option("--port", type=int, default=None)
@click.option("--fixtures", "fixtures_dir", type=click.Path(exists=True), default=None)
@click.option("--remote", "remote_url", default=None)
@click.option("--ui-dist", type=click.Path(), default=None,
              help="Serve a built web UI from this directory at /ui.")
@click.pass_context
def serve(ctx, port, fixtures_dir, remote_url, ui_dist):
    """Start the HTTP API (fixture mode or remote mode)."""
    if fixtures_dir and remote_url:
        raise click.UsageError("--fixtures and --remote are mutually exclusive")
    cfg = _cfg(ctx, port=port, fixtures_dir=fixtures_dir, remote_url=remote_url)
    store, providers, taxonomy = build_runtime(cfg)
    app = create_app(store, providers, taxonomy, cfg, ui_dist=ui_dist)
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=cfg.port, log_level="warning")


@cli.group()
def snapshot():
    """Whole-store snapshot files."""


@snapshot.command("save")
@click.argument("path", type=click.Path())
@click.pass_context
def snapshot_save_cmd(ctx, path):
    """Write the store to a single checksummed snapshot file."""
    cfg = _cfg(ctx)
    store_snapshot_save(_load_store(cfg), path)
    click.echo(f"saved store snapshot to {path}")


@snapshot.command("load")
@click.argument("path", type=click.Path(exists=True))
@click.pass_context
def snapshot_load_cmd(ctx, path):
    """Replace the store directory contents from a snapshot file."""
    cfg = _cfg(ctx)
    store = store_snapshot_load(path)
    store.save(cfg.store_dir)
    click.echo(f"loaded store snapshot into {cfg.store_dir}")


def _load_docs(path: str) -> list[dict]:
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("["):
        return json.loads(text)
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except RemoteUnavailableError as exc:
        click.echo(f"remote error: {exc}", err=True)
        return EXIT_REMOTE
    except (StyleSearchError, CorruptSnapshotError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())
