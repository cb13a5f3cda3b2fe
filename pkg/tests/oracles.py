"""Brute-force reference computations, written without the package's enumerators.

Trace spaces are grown breadth-first one action at a time and checked with a
local walk; posteriors come from a joint (model, trace) table.
"""

import math
from itertools import product

STEP = {"D": (0, 1), "L": (-1, 0), "R": (1, 0)}


def walk(width, height, blocked, start, key):
    """Cells visited by ``key`` or None if it leaves the grid, hits a block or revisits."""
    cells = [tuple(start)]
    for ch in key:
        dc, dr = STEP[ch]
        c, r = cells[-1]
        nxt = (c + dc, r + dr)
        if not (0 <= nxt[0] < width and 0 <= nxt[1] < height) or nxt in blocked or nxt in cells:
            return None
        cells.append(nxt)
    return cells


def all_valid(width, height, blocked, start, horizon):
    """Every valid action string of length <= horizon, grown level by level."""
    blocked = {tuple(b) for b in blocked}
    out, frontier = [""], [""]
    for _ in range(horizon):
        nxt = []
        for key in frontier:
            for ch in "DLR":
                if walk(width, height, blocked, start, key + ch) is not None:
                    nxt.append(key + ch)
        out.extend(nxt)
        frontier = nxt
    return out


def all_valid_product(width, height, blocked, start, horizon):
    """Same set via the full Cartesian product; only for tiny grids."""
    blocked = {tuple(b) for b in blocked}
    out = []
    for n in range(horizon + 1):
        for combo in product("DLR", repeat=n):
            key = "".join(combo)
            if walk(width, height, blocked, start, key) is not None:
                out.append(key)
    return out


def goal_traces(width, height, blocked, start, goal):
    blocked = {tuple(b) for b in blocked}
    goal = tuple(goal)
    out, frontier = [], [""]
    while frontier:
        nxt = []
        for key in frontier:
            if walk(width, height, blocked, start, key)[-1] == goal:
                out.append(key)
                continue
            for ch in "DLR":
                if walk(width, height, blocked, start, key + ch) is not None:
                    nxt.append(key + ch)
        frontier = nxt
    return out


def model_traces(model):
    g = model.grid
    blocked = set(map(tuple, g.blocked)) | set(map(tuple, model.params.get("blocked", ())))
    return goal_traces(g.width, g.height, blocked, model.start, model.goal)


def boltzmann(model, keys):
    costs = {"D": model.action_cost[_A["D"]], "L": model.action_cost[_A["L"]], "R": model.action_cost[_A["R"]]}
    if not keys:
        return {}
    c = {k: sum(costs[ch] for ch in k) for k in keys}
    w = {k: math.exp(-model.beta * c[k]) for k in keys}
    z = sum(w.values())
    return {k: v / z for k, v in w.items()}


def joint_table(hs):
    """List of (model id, trace key, joint probability)."""
    rows = []
    for m in hs.explicit_models:
        for k, p in boltzmann(m, model_traces(m)).items():
            rows.append((m.id, k, p * hs.prior[m.id]))
    g = hs.grid
    universal = all_valid(g.width, g.height, g.blocked, hs.start, hs.m0_horizon)
    for k in universal:
        rows.append(("M0", k, hs.prior["M0"] / len(universal)))
    return rows


def brute_posterior(hs, prefix_key, rows=None):
    rows = joint_table(hs) if rows is None else rows
    mass = {i: 0.0 for i in hs.ids}
    for mid, key, p in rows:
        if key.startswith(prefix_key):
            mass[mid] += p
    z = sum(mass.values())
    return {i: v / z for i, v in mass.items()}


def _actions():
    from ghap.core import Action

    return {"D": Action.DOWN, "L": Action.LEFT, "R": Action.RIGHT}


_A = _actions()
