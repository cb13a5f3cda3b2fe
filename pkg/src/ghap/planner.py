"""Exhaustive search for the agent behavior minimizing the generalized cost."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .core import Objective, Scenario, Trace, WeightProfile, key_cost
from .dynamics import enumerate_complete_traces
from .measures import ScoreReport, effective_weights, generalized_cost, score_trace
from .observer import get_observer


class PlanningError(ValueError):
    pass


@dataclass(frozen=True)
class PlanResult:
    chosen: Trace
    objective_cost: float
    agent_cost: float
    per_step_scores: tuple[ScoreReport, ...]
    candidates_evaluated: int


def candidate_traces(scenario: Scenario, restrict_optimal: bool = False, min_length: int = 0) -> list[Trace]:
    """Complete traces of the agent model in deterministic order, optionally filtered."""
    agent = scenario.agent_model
    keys = enumerate_complete_traces(agent).keys
    if restrict_optimal and keys:
        best = min(key_cost(agent, k) for k in keys)
        keys = [k for k in keys if key_cost(agent, k) == best]
    return [Trace.from_string(agent.start, k) for k in keys if len(k) >= min_length]


def _evaluate(scenario: Scenario, traces: list[Trace], workers: int) -> list[float]:
    if workers <= 1 or len(traces) < 2:
        return [generalized_cost(scenario, t) for t in traces]
    chunk = -(-len(traces) // workers)
    parts = [traces[i : i + chunk] for i in range(0, len(traces), chunk)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = pool.map(lambda part: [generalized_cost(scenario, t) for t in part], parts)
    return [c for part in results for c in part]


def solve(
    scenario: Scenario,
    restrict_optimal: bool = False,
    lam: float | None = None,
    workers: int = 1,
) -> PlanResult:
    """Minimize ``C_H + lam * C`` over the agent model's complete traces.

    Ties go to the lower agent cost, then to the earlier trace in enumeration
    order, so the answer does not depend on ``workers``.
    """
    if scenario.objective is None:
        raise PlanningError("scenario has no objective")
    lam = scenario.lam if lam is None else lam
    if lam < 0:
        raise PlanningError("lambda must be non-negative")

    weights = effective_weights(scenario)
    min_length = weights.k if weights.kind == "kronecker" else 0
    candidates = candidate_traces(scenario, restrict_optimal, min_length)
    if not candidates:
        if min_length and candidate_traces(scenario, restrict_optimal):
            raise PlanningError(f"no candidate trace has length >= {min_length}")
        raise PlanningError(f"agent model {scenario.agent_model_id} has no candidate traces")

    get_observer(scenario.hypothesis_set)  # build tables before any worker threads start
    objective = _evaluate(scenario, candidates, workers)
    agent = scenario.agent_model
    agent_costs = [key_cost(agent, t.key) for t in candidates]
    best = min(range(len(candidates)), key=lambda j: (objective[j] + lam * agent_costs[j], agent_costs[j], j))

    chosen = candidates[best]
    report = score_trace(scenario, chosen)
    per_step = tuple(ScoreReport(report.measure, i, v) for i, v in enumerate(report.per_step))
    return PlanResult(chosen, objective[best], agent_costs[best], per_step, len(candidates))


def k_step_predictable_plan(scenario: Scenario, k: int | None = None, **kwargs) -> PlanResult:
    """Plan for predictability judged only at step ``k``."""
    obj = scenario.objective
    if k is None:
        if obj is None or obj.kind != "k_predictable":
            raise PlanningError("need a k_predictable objective or an explicit k")
        k = obj.k
    sc = scenario.with_(objective=Objective.k_predictable(k), weight_profile=WeightProfile.kronecker(k))
    return solve(sc, **kwargs)


def restricted_explicable_plan(scenario: Scenario, **kwargs) -> PlanResult:
    """Among the agent's optimal traces, pick the one most explicable to the observer."""
    sc = scenario if scenario.objective is not None else scenario.with_(objective=Objective.explicable())
    if sc.objective.kind != "explicable":
        raise PlanningError("restricted planning expects an explicable objective")
    return solve(sc, restrict_optimal=True, **kwargs)
