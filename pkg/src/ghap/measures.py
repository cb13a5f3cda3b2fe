"""Interpretability and adversarial scores over observer posteriors, and the generalized cost."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

from .core import (
    M0,
    Action,
    GridModel,
    HypothesisSet,
    Scenario,
    Trace,
    WeightProfile,
    key_cost,
    validate_trace,
)
from .dynamics import enumerate_complete_traces
from .observer import Observer, belief_entropy, get_observer

MEASURES = ("explicability", "legibility", "predictability", "deception", "obfuscation")


@dataclass(frozen=True)
class ScoreReport:
    measure: str
    prefix_length: int
    value: float
    per_step: tuple[float, ...] | None = None


# -- per-prefix scores on an Observer, keyed by action string ----------------

def _explicability(obs: Observer, key: str) -> float:
    return 1.0 - obs.posterior_vector(key)[-1]


def _theta_mask(hs: HypothesisSet, theta_key: str, theta_value: Any) -> tuple[bool, ...]:
    mask = []
    for m in hs.explicit_models:
        if theta_key not in m.params:
            raise KeyError(f"model {m.id} has no parameter {theta_key!r}")
        mask.append(m.params[theta_key] == theta_value)
    return tuple(mask)


def _legibility(obs: Observer, key: str, mask: Sequence[bool]) -> float:
    post = obs.posterior_vector(key)
    return math.fsum(p for p, hit in zip(post, mask) if hit)


def _predictability(obs: Observer, pre: str, full: str, mode: str) -> float:
    weights = obs.prior if mode == "prior" else obs.posterior_vector(pre)
    terms = []
    for w, table in zip(weights, obs.tables):
        denom = table.prefix_mass.get(pre, 0.0)
        if w == 0.0 or denom == 0.0:
            continue
        terms.append(w * min(1.0, table.probs.get(full, 0.0) / denom))
    return min(1.0, math.fsum(terms))


def _deception(obs: Observer, key: str, agent_id: str) -> float:
    if agent_id not in obs.ids[:-1]:
        return 1.0
    return 1.0 - obs.posterior_vector(key)[obs.ids.index(agent_id)]


def _obfuscation(obs: Observer, key: str) -> float:
    return belief_entropy(obs.posterior_vector(key))


# -- public API ---------------------------------------------------------------

def _observer(hs: HypothesisSet, prefix: Trace) -> Observer:
    obs = get_observer(hs)
    obs.check_prefix(prefix)
    return obs


def explicability(hs: HypothesisSet, prefix: Trace) -> float:
    """Posterior mass kept on the explicit models, i.e. ``1 - P(M0 | prefix)``."""
    return _explicability(_observer(hs, prefix), prefix.key)


def legibility(hs: HypothesisSet, prefix: Trace, theta_key: str, theta_value: Any) -> float:
    """Posterior mass on explicit models whose ``theta_key`` parameter equals ``theta_value``."""
    obs = _observer(hs, prefix)
    return _legibility(obs, prefix.key, _theta_mask(hs, theta_key, theta_value))


def predictability(
    hs: HypothesisSet, prefix: Trace, postfix: Sequence[Action], marginal: str = "posterior"
) -> float:
    """Probability the observer assigns to ``postfix`` being the rest of the behavior.

    ``marginal="posterior"`` weights each model by ``P(M | prefix)``;
    ``marginal="prior"`` uses the prior weights instead.
    """
    if marginal not in ("prior", "posterior"):
        raise ValueError(f"unknown marginal {marginal!r}")
    full = prefix.extend(postfix)
    bad = validate_trace(hs.grid, full)
    if bad is not None:
        raise ValueError(f"prefix + postfix is not a valid trace: {bad}")
    obs = _observer(hs, prefix)
    return _predictability(obs, prefix.key, full.key, marginal)


def deception(hs: HypothesisSet, agent_model_id: str, prefix: Trace) -> float:
    """``1 - P(agent model | prefix)``; 1 when the agent's model is not a hypothesis."""
    return _deception(_observer(hs, prefix), prefix.key, agent_model_id)


def obfuscation(hs: HypothesisSet, prefix: Trace) -> float:
    """Entropy of the posterior, in nats."""
    return _obfuscation(_observer(hs, prefix), prefix.key)


def distance_explicability_oracle(model: GridModel, trace: Trace) -> float:
    """Cost gap between ``trace`` and the model's optimal complete trace."""
    bad = validate_trace(model.grid, trace, model.blocked_cells)
    if bad is not None:
        raise ValueError(f"trace invalid in model {model.id}: {bad}")
    return key_cost(model, trace.key) - _optimal_cost(model)


@lru_cache(maxsize=64)
def _optimal_cost(model: GridModel) -> float:
    complete = enumerate_complete_traces(model)
    if len(complete) == 0:
        raise ValueError(f"model {model.id} has no complete traces")
    return min(key_cost(model, k) for k in complete.keys)


# -- generalized cost ----------------------------------------------------------

def check_complete(model: GridModel, trace: Trace) -> None:
    if trace.start != model.start:
        raise ValueError(f"trace starts at {tuple(trace.start)}, model {model.id} at {tuple(model.start)}")
    bad = validate_trace(model.grid, trace, model.blocked_cells)
    if bad is not None:
        raise ValueError(f"trace invalid in model {model.id}: {bad}")
    cells = trace.cells()
    if cells[-1] != model.goal or model.goal in cells[:-1]:
        raise ValueError(f"trace is not a complete behavior of model {model.id}")


def effective_weights(scenario: Scenario) -> WeightProfile:
    obj = scenario.objective
    if obj is not None and obj.kind == "k_predictable":
        return WeightProfile.kronecker(obj.k)
    return scenario.weight_profile


def step_scorer(scenario: Scenario, measure: str | None = None, theta_key=None, theta_value=None):
    """Return ``f(key, i)`` scoring the i-step prefix of the trace ``key``.

    Without ``measure`` the scenario objective picks it.
    """
    hs = scenario.hypothesis_set
    obs = get_observer(hs)
    obj = scenario.objective
    if measure is None:
        if obj is None:
            raise ValueError("scenario has no objective")
        measure = OBJECTIVE_MEASURE[obj.kind]
        theta_key, theta_value = obj.theta_key, obj.theta_value
    if measure == "explicability":
        return lambda key, i: _explicability(obs, key[:i])
    if measure == "legibility":
        theta_key = theta_key or "goal"
        if theta_value is None:
            theta_value = scenario.agent_model.params[theta_key]
        mask = _theta_mask(hs, theta_key, theta_value)
        return lambda key, i: _legibility(obs, key[:i], mask)
    if measure == "predictability":
        mode = scenario.predictability_mode
        return lambda key, i: _predictability(obs, key[:i], key, mode)
    if measure == "deception":
        agent = scenario.agent_model_id
        return lambda key, i: _deception(obs, key[:i], agent)
    if measure == "obfuscation":
        return lambda key, i: _obfuscation(obs, key[:i])
    raise ValueError(f"unknown measure {measure!r}")


OBJECTIVE_MEASURE = {
    "explicable": "explicability",
    "legible": "legibility",
    "predictable": "predictability",
    "k_predictable": "predictability",
    "deceptive": "deception",
    "obfuscating": "obfuscation",
}


def step_costs(scenario: Scenario, trace: Trace) -> list[float]:
    """Per-step terms of the generalized cost, before weighting."""
    if scenario.objective is None:
        raise ValueError("scenario has no objective")
    terms = _TERMS[scenario.objective.kind](scenario)
    return [terms(trace.key, i) for i in range(len(trace) + 1)]


def generalized_cost(scenario: Scenario, trace: Trace) -> float:
    """Weighted sum over prefixes i = 0..n of the objective's per-step cost."""
    check_complete(scenario.agent_model, trace)
    obj = scenario.objective
    if obj is None:
        raise ValueError("scenario has no objective")
    alphas = effective_weights(scenario).materialize(len(trace))
    key = trace.key
    # only evaluate steps with positive weight; sum in ascending i
    total = 0.0
    terms = _TERMS[obj.kind](scenario)
    for i, a in enumerate(alphas):
        if a > 0.0:
            total += a * terms(key, i)
    return total


def _explicable_term(scenario):
    obs = get_observer(scenario.hypothesis_set)
    return lambda key, i: obs.posterior_vector(key[:i])[-1]


def _complement_term(scenario):
    score = step_scorer(scenario)
    return lambda key, i: 1.0 - score(key, i)


def _obfuscating_term(scenario):
    score = step_scorer(scenario)
    log_n = math.log(len(scenario.hypothesis_set.ids))
    return lambda key, i: 1.0 - score(key, i) / log_n


_TERMS = {
    "explicable": _explicable_term,
    "legible": _complement_term,
    "predictable": _complement_term,
    "k_predictable": _complement_term,
    "deceptive": _complement_term,
    "obfuscating": _obfuscating_term,
}


def score_trace(scenario: Scenario, trace: Trace, measure: str | None = None, theta_key=None, theta_value=None) -> ScoreReport:
    """Score every prefix of ``trace``; ``value`` holds the full-trace score."""
    obs = get_observer(scenario.hypothesis_set)
    obs.check_prefix(trace)
    score = step_scorer(scenario, measure, theta_key, theta_value)
    name = measure or OBJECTIVE_MEASURE[scenario.objective.kind]
    per_step = tuple(score(trace.key, i) for i in range(len(trace) + 1))
    return ScoreReport(name, len(trace), per_step[-1], per_step)
