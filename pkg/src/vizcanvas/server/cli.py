"""Command-line entry point: `vizcanvas-server` or `python -m vizcanvas.server`."""

from __future__ import annotations

import argparse

import uvicorn

from vizcanvas.server.app import create_app
from vizcanvas.server.config import ServerConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vizcanvas-server",
                                     description="Hypothesis-to-chart canvas service")
    parser.add_argument("--listen", default=None, help="host:port to bind (default 127.0.0.1:8600)")
    parser.add_argument("--data-dir", default=None, help="persistence directory")
    parser.add_argument("--provider", default=None,
                        help="default model provider name (rules, mock, http)")
    parser.add_argument("--max-jobs", type=int, default=None,
                        help="concurrent generation jobs (default 4)")
    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    config = ServerConfig.from_env(
        listen=args.listen,
        data_dir=args.data_dir,
        default_provider=args.provider,
        max_jobs=args.max_jobs,
    )
    host, _, port = config.listen.rpartition(":")
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")


if __name__ == "__main__":
    main()
