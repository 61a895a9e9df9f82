"""Command-line interface for poissonnet.

This module provides the Typer-based CLI with commands for:
- simulate: One seeded trial with per-round readout
- montecarlo: Monte Carlo statistics of the estimators
- figure: Data behind the figures
- theory: Closed-form predictions
- check-connectivity: Joint connectivity of a schedule
"""

from __future__ import annotations

from poissonnet.cli.app import app

__all__ = ["app"]
