import argparse
import logging
import os
import sys


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="kilm_scorer",
        description="Serve scorer protocol requests from an encoder-decoder model",
    )
    parser.add_argument("--model", required=True, help="model directory or hub identifier")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--max-length", dest="max_length", type=int, default=1024)
    parser.add_argument("--batch-size", dest="batch_size", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    os.environ.setdefault("TRANSFORMERS_VERBOSITY", "error")
    os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING)

    from .adapter import Adapter, AdapterConfig, serve

    try:
        adapter = Adapter(
            AdapterConfig(
                model=args.model,
                device=args.device,
                max_length=args.max_length,
                batch_size=args.batch_size,
                seed=args.seed,
            )
        )
    except Exception as exc:
        # fail before touching stdin so the client sees a clean launch error
        print(f"kilm_scorer: cannot load model {args.model!r}: {exc}", file=sys.stderr)
        return 2

    serve(adapter)
    return 0


if __name__ == "__main__":
    sys.exit(main())
