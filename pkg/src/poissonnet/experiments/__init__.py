"""Monte Carlo harness, figure pipelines, single-trial simulation and artifacts."""

from __future__ import annotations

from poissonnet.experiments.figures import FIGURES, FigureResult, figure
from poissonnet.experiments.montecarlo import MonteCarloResult, Series, run_montecarlo
from poissonnet.experiments.report import theory_for_config, theory_inputs
from poissonnet.experiments.simulate import RunSummary, SimulationResult, simulate
from poissonnet.experiments.stats import SampleStats

__all__ = [
    "FIGURES",
    "FigureResult",
    "MonteCarloResult",
    "RunSummary",
    "SampleStats",
    "Series",
    "SimulationResult",
    "figure",
    "run_montecarlo",
    "simulate",
    "theory_for_config",
    "theory_inputs",
]
