"""Search small grids for a sparse/dense pair: equal cost gap for a probe, different near-optimal mass.

Two single-model scenarios share grid, start, goal and prior. The sparse
model walls off some cells. We want a probe trace valid in both with the same
cost gap to the optimum, the dense model admitting strictly more traces cheaper
than the probe, and identical trace counts at every cost level above it.
"""

import argparse
import itertools
from collections import Counter

from ghap.core import Cell, GridModel, GridSpec, key_cost
from ghap.dynamics import enumerate_complete_traces


def levels(model):
    return Counter(key_cost(model, k) for k in enumerate_complete_traces(model).keys)


def search(max_w=4, max_h=4, max_walls=2):
    for w, h in itertools.product(range(2, max_w + 1), range(2, max_h + 1)):
        grid = GridSpec(w, h)
        cells = [Cell(c, r) for r in range(h) for c in range(w)]
        for start, goal in itertools.permutations(cells, 2):
            dense = GridModel("dense", grid, start, goal)
            dense_traces = enumerate_complete_traces(dense).keys
            if not dense_traces:
                continue
            dense_levels = levels(dense)
            free = [c for c in cells if c not in (start, goal)]
            for n in range(1, max_walls + 1):
                for walls in itertools.combinations(free, n):
                    sparse = GridModel("sparse", grid, start, goal, params={"blocked": list(walls)})
                    sparse_traces = enumerate_complete_traces(sparse).keys
                    if not sparse_traces:
                        continue
                    sparse_levels = levels(sparse)
                    if min(sparse_levels) != min(dense_levels):
                        continue
                    for probe in sparse_traces:
                        c = key_cost(sparse, probe)
                        if c == min(sparse_levels):
                            continue
                        above = [x for x in set(sparse_levels) | set(dense_levels) if x > c]
                        if not above:
                            continue
                        above_match = all(sparse_levels[x] == dense_levels[x] for x in set(sparse_levels) | set(dense_levels) if x > c)
                        cheaper = lambda lv: sum(v for x, v in lv.items() if x < c)
                        if above_match and cheaper(dense_levels) > cheaper(sparse_levels):
                            yield grid, start, goal, walls, probe, dict(sparse_levels), dict(dense_levels)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--limit", type=int, default=5)
    args = ap.parse_args()
    for hit in itertools.islice(search(), args.limit):
        grid, start, goal, walls, probe, sl, dl = hit
        print(f"{grid.width}x{grid.height} start={tuple(start)} goal={tuple(goal)} walls={[tuple(x) for x in walls]} "
              f"probe={probe} sparse={sorted(sl.items())} dense={sorted(dl.items())}")
