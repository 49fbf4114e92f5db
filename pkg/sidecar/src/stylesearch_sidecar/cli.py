"""Startup flags for the sidecar."""

from __future__ import annotations

import argparse
import json

from .app import create_app
from .config import SidecarConfig


def parse_args(argv: list[str] | None = None) -> SidecarConfig:
    parser = argparse.ArgumentParser(
        prog="stylesearch-sidecar",
        description="Serve detection/embedding/captioning over the provider wire contract.",
    )
    parser.add_argument("--port", type=int, default=9000)
    parser.add_argument("--backend", choices=["stub", "transformers"], default="stub")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--dim", type=int, default=16, help="stub embedding dimension")
    parser.add_argument("--detector", default=SidecarConfig.detector_id)
    parser.add_argument("--embedder", default=SidecarConfig.embedder_id)
    parser.add_argument("--captioner", default=SidecarConfig.captioner_id)
    parser.add_argument("--class-map", default=None,
                        help="JSON file mapping detector class names to garment classes")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    class_map = {}
    if args.class_map:
        with open(args.class_map, "r", encoding="utf-8") as handle:
            class_map = json.load(handle)
    return SidecarConfig(
        port=args.port,
        backend=args.backend,
        device=args.device,
        embedding_dim=args.dim,
        detector_id=args.detector,
        embedder_id=args.embedder,
        captioner_id=args.captioner,
        class_map=class_map,
        seed=args.seed,
    )


def main(argv: list[str] | None = None) -> None:
    config = parse_args(argv)
    app = create_app(config)
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
