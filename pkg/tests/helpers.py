"""Random scenario generation shared by the property and acceptance tests."""

import random

from ghap.core import BeliefDistribution, Cell, GridModel, GridSpec, HypothesisSet, Trace, key_cost
from ghap.measures import generalized_cost

from oracles import model_traces


def random_hypothesis_set(rng: random.Random, max_side=5, max_models=4, m0_range=(0.01, 0.5), beta_range=(0.0, 10.0)):
    w, h = rng.randint(1, max_side), rng.randint(1, max_side)
    start = Cell(rng.randrange(w), rng.randrange(h))
    cells = [Cell(c, r) for c in range(w) for r in range(h) if (c, r) != start]
    blocked = frozenset(c for c in cells if rng.random() < 0.15)
    free = [start] + [c for c in cells if c not in blocked]
    grid = GridSpec(w, h, blocked)
    n = rng.randint(1, max_models)
    models = tuple(
        GridModel(f"m{i}", grid, start, rng.choice(free), beta=rng.uniform(*beta_range)) for i in range(n)
    )
    p0 = rng.uniform(*m0_range)
    raw = [rng.random() + 1e-3 for _ in range(n)]
    s = sum(raw)
    prior = {m.id: (1 - p0) * r / s for m, r in zip(models, raw)}
    prior["M0"] = 1.0 - sum(prior.values())
    return HypothesisSet(models, BeliefDistribution(prior))


def random_walk(rng: random.Random, grid: GridSpec, start: Cell, max_len=None) -> Trace:
    max_len = grid.n_cells - 1 if max_len is None else max_len
    cells, key = [start], ""
    while len(key) < max_len and rng.random() > 0.1:
        c = cells[-1]
        options = []
        for ch, (dc, dr) in (("D", (0, 1)), ("L", (-1, 0)), ("R", (1, 0))):
            nxt = Cell(c.col + dc, c.row + dr)
            if grid.is_free(nxt) and nxt not in cells:
                options.append((ch, nxt))
        if not options:
            break
        ch, nxt = rng.choice(options)
        key += ch
        cells.append(nxt)
    return Trace.from_string(start, key)


def brute_argmin(scenario, restrict_optimal=False, lam=0.0, min_length=0):
    """Argmin over an independently enumerated candidate list with the documented tie-break."""
    agent = scenario.agent_model
    keys = sorted(model_traces(agent), key=lambda k: (len(k), k))
    if restrict_optimal:
        best = min(key_cost(agent, k) for k in keys)
        keys = [k for k in keys if key_cost(agent, k) == best]
    keys = [k for k in keys if len(k) >= min_length]
    scored = [(generalized_cost(scenario, Trace.from_string(agent.start, k)), key_cost(agent, k), k) for k in keys]
    j = min(range(len(scored)), key=lambda j: (scored[j][0] + lam * scored[j][1], scored[j][1], j))
    return scored[j], [s[0] for s in scored]
