import argparse

import uvicorn

from .app import create_app
from .config import ServerConfig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="model-server")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--mode", choices=["echo", "transformers"], default="echo")
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--max-batch", type=int, default=64)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--embedder-model", default="bert-base-uncased")
    parser.add_argument("--tagger-model", default="")
    parser.add_argument("--classifier-model", default="")
    parser.add_argument("--reformulator-model", default="")
    args = parser.parse_args(argv)

    config = ServerConfig(
        host=args.host,
        port=args.port,
        mode=args.mode,
        dim=args.dim,
        max_batch=args.max_batch,
        device=args.device,
        embedder_model=args.embedder_model,
        tagger_model=args.tagger_model,
        classifier_model=args.classifier_model,
        reformulator_model=args.reformulator_model,
    )
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
