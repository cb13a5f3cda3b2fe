"""Bayesian observer models and interpretable-behavior planning on small grids."""

from .core import (
    M0,
    Action,
    BeliefDistribution,
    Cell,
    GridModel,
    GridSpec,
    HypothesisSet,
    Objective,
    Scenario,
    Trace,
    WeightProfile,
)

__all__ = [
    "M0",
    "Action",
    "BeliefDistribution",
    "Cell",
    "GridModel",
    "GridSpec",
    "HypothesisSet",
    "Objective",
    "Scenario",
    "Trace",
    "WeightProfile",
]
