"""Office robot walkthrough: score the canonical prefixes and plan under each objective.

    python scripts/office_demo.py [--m0-prior 0.1]
"""

import argparse
import time

from ghap.cli import render_grid
from ghap.core import Objective, Trace, WeightProfile
from ghap.dynamics import BOTTLENECK_K, COFFEE_DOOR, bottleneck_fixture, office_fixture
from ghap.measures import deception, explicability, legibility, obfuscation
from ghap.planner import k_step_predictable_plan, restricted_explicable_plan, solve

PREFIXES = ("L", "DD", "LLLD", "LDDD", "RR")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m0-prior", type=float, default=0.10)
    args = ap.parse_args()

    sc = office_fixture(m0_prior=args.m0_prior)
    hs = sc.hypothesis_set
    print(render_grid(sc))
    print()
    print(f"{'prefix':>8} {'E':>8} {'L(coffee)':>10} {'D':>8} {'H':>8}")
    for key in PREFIXES:
        tau = Trace.from_string(hs.start, key)
        print(f"{key:>8} {explicability(hs, tau):8.4f} {legibility(hs, tau, 'goal', COFFEE_DOOR):10.4f} "
              f"{deception(hs, 'coffee', tau):8.4f} {obfuscation(hs, tau):8.4f}")
    print()

    problems = [
        ("explicable", sc.with_(objective=Objective.explicable())),
        ("legible", sc.with_(objective=Objective.legible("goal", COFFEE_DOOR), weight_profile=WeightProfile.discount(0.9))),
        ("deceptive", sc.with_(objective=Objective.deceptive(), weight_profile=WeightProfile.uniform())),
        ("obfuscating", sc.with_(objective=Objective.obfuscating(), weight_profile=WeightProfile.uniform())),
    ]
    plans = {}
    for name, problem in problems:
        t0 = time.perf_counter()
        res = plans[name] = solve(problem)
        print(f"{name:>12}: {res.chosen.key:<16} cost {res.agent_cost:<4g} objective {res.objective_cost:.5f} "
              f"({time.perf_counter() - t0:.1f}s)")
    res = restricted_explicable_plan(sc)
    print(f"{'restricted':>12}: {res.chosen.key:<16} cost {res.agent_cost:<4g} objective {res.objective_cost:.5f}")
    res = k_step_predictable_plan(bottleneck_fixture(), k=BOTTLENECK_K)
    print(f"{'k-step':>12}: {res.chosen.key:<16} cost {res.agent_cost:<4g} objective {res.objective_cost:.5f} (bottleneck, k={BOTTLENECK_K})")
    print()
    print(render_grid(sc, plans["legible"].chosen))


if __name__ == "__main__":
    main()
