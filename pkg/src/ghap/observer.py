"""The observer's inference: Boltzmann trace likelihoods, prefix marginals, posteriors."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .core import (
    M0,
    BeliefDistribution,
    GridModel,
    HypothesisSet,
    Trace,
    key_cost,
    validate_trace,
)
from .dynamics import TraceSet, enumerate_complete_traces, universal_trace_set


class NoExplanationError(ValueError):
    """No hypothesis with positive prior can produce the observed prefix."""


@dataclass(frozen=True)
class LikelihoodTable:
    """Probability of each complete trace (keyed by action string) under one model.

    ``prefix_mass`` maps every prefix of a member to the summed probability of
    the members extending it.
    """

    model_id: str
    probs: Mapping[str, float] = field(hash=False)
    prefix_mass: Mapping[str, float] = field(hash=False, repr=False)

    def __len__(self) -> int:
        return len(self.probs)

    def prob(self, trace: Trace | str) -> float:
        key = trace if isinstance(trace, str) else trace.key
        return self.probs.get(key, 0.0)

    def total(self) -> float:
        return math.fsum(self.probs.values())


def _prefix_masses(probs: Mapping[str, float]) -> dict[str, float]:
    # Accumulate each member into its own node, then push mass up one level at
    # a time, deepest first; iteration order is fixed so sums are reproducible.
    mass: dict[str, float] = defaultdict(float)
    levels: dict[int, list[str]] = defaultdict(list)
    for key, p in probs.items():
        if key not in mass:
            levels[len(key)].append(key)
        mass[key] += p
    depth = max(levels, default=-1)
    while depth > 0:
        for key in levels.get(depth, ()):
            parent = key[:-1]
            if parent not in mass:
                levels[depth - 1].append(parent)
            mass[parent] += mass[key]
        depth -= 1
    return dict(mass)


def _table(model_id: str, keys: Sequence[str], weights: Sequence[float]) -> LikelihoodTable:
    z = math.fsum(weights)
    probs = {k: w / z for k, w in zip(keys, weights)}
    return LikelihoodTable(model_id, probs, _prefix_masses(probs))


def trace_likelihood(model: GridModel, trace_set: TraceSet) -> LikelihoodTable:
    """Boltzmann likelihood ``exp(-beta * (C - C_min)) / Z`` over the model's traces."""
    if len(trace_set) == 0:
        return LikelihoodTable(model.id, {}, {})
    costs = [key_cost(model, k) for k in trace_set.keys]
    c_min = min(costs)
    weights = [math.exp(-model.beta * (c - c_min)) for c in costs]
    return _table(model.id, trace_set.keys, weights)


def m0_likelihood(universal: TraceSet, model_id: str = M0) -> LikelihoodTable:
    if len(universal) == 0:
        raise ValueError("universal trace set is empty")
    return _table(model_id, universal.keys, [1.0] * len(universal))


def prefix_likelihood(table: LikelihoodTable, prefix: Trace | str) -> float:
    """Probability that a trace drawn from the model begins with ``prefix``."""
    key = prefix if isinstance(prefix, str) else prefix.key
    return table.prefix_mass.get(key, 0.0)


def belief_entropy(b: BeliefDistribution | Mapping[str, float] | Sequence[float]) -> float:
    """Shannon entropy in nats, clipped to the exact bounds [0, ln n]."""
    if isinstance(b, BeliefDistribution):
        values = list(b.entries.values())
    elif isinstance(b, Mapping):
        values = list(b.values())
    else:
        values = list(b)
    h = -math.fsum(p * math.log(p) for p in values if p > 0)
    return min(max(0.0, h), math.log(len(values)))


class Observer:
    """Likelihood tables for every hypothesis in a set, plus memoized posteriors.

    Tables are built eagerly; the posterior memo only ever receives
    deterministic values, so concurrent readers see consistent results.
    """

    def __init__(self, hs: HypothesisSet):
        self.hs = hs
        self.ids = hs.ids
        self.trace_sets: dict[str, TraceSet] = {}
        tables = []
        for m in hs.explicit_models:
            ts = enumerate_complete_traces(m)
            self.trace_sets[m.id] = ts
            tables.append(trace_likelihood(m, ts))
        universal = universal_trace_set(hs.grid, hs.start, hs.m0_horizon)
        self.trace_sets[M0] = universal
        tables.append(m0_likelihood(universal))
        self.tables: tuple[LikelihoodTable, ...] = tuple(tables)
        self.prior: tuple[float, ...] = tuple(hs.prior[i] for i in self.ids)
        self._memo: dict[str, tuple[float, ...]] = {}

    def table(self, model_id: str) -> LikelihoodTable:
        return self.tables[self.ids.index(model_id)]

    def check_prefix(self, prefix: Trace) -> None:
        if prefix.start != self.hs.start:
            raise ValueError(f"prefix starts at {tuple(prefix.start)}, expected {tuple(self.hs.start)}")
        bad = validate_trace(self.hs.grid, prefix)
        if bad is not None:
            raise ValueError(f"invalid prefix: {bad}")

    def posterior_vector(self, key: str) -> tuple[float, ...]:
        """Posterior over ``self.ids`` after observing the prefix ``key``."""
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        unnorm = [p * t.prefix_mass.get(key, 0.0) for p, t in zip(self.prior, self.tables)]
        z = math.fsum(unnorm)
        if z <= 0.0:
            raise NoExplanationError(f"no hypothesis explains prefix {key!r}")
        post = tuple(u / z for u in unnorm)
        return self._memo.setdefault(key, post)

    def posterior(self, prefix: Trace) -> BeliefDistribution:
        self.check_prefix(prefix)
        return BeliefDistribution(dict(zip(self.ids, self.posterior_vector(prefix.key))))


@lru_cache(maxsize=32)
def get_observer(hs: HypothesisSet) -> Observer:
    return Observer(hs)


def posterior(hs: HypothesisSet, prefix: Trace) -> BeliefDistribution:
    return get_observer(hs).posterior(prefix)


def posterior_trajectory(hs: HypothesisSet, trace: Trace) -> list[BeliefDistribution]:
    obs = get_observer(hs)
    obs.check_prefix(trace)
    out = []
    for i in range(len(trace) + 1):
        try:
            vec = obs.posterior_vector(trace.key[:i])
        except NoExplanationError as exc:
            raise NoExplanationError(f"step {i}: {exc}") from exc
        out.append(BeliefDistribution(dict(zip(obs.ids, vec))))
    return out
