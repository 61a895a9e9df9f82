"""Entry point for `python -m poissonnet`."""

from __future__ import annotations

from poissonnet.cli.app import app

if __name__ == "__main__":
    app()
