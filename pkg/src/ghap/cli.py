"""Command-line entry point: ``ghap {score,plan,render,enumerate,fixture}``.

Exit codes: 0 success, 1 usage error, 2 parse/validation error, 3 solver or
inference error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .core import M0, Cell, Objective, Scenario, Trace, WeightProfile
from .dynamics import bottleneck_fixture, corridor_fixture, enumerate_complete_traces, office_fixture
from .files import FileFormatError, dump_scenario, dump_trace, load_scenario, load_trace
from .measures import MEASURES, OBJECTIVE_MEASURE, generalized_cost, step_scorer
from .observer import NoExplanationError, get_observer
from .planner import PlanningError, solve

EXIT_USAGE, EXIT_INVALID, EXIT_SOLVER = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def render_grid(scenario: Scenario, trace: Trace | None = None) -> str:
    """Monospace picture of the grid, one character per cell, row 0 first."""
    hs = scenario.hypothesis_set
    grid = hs.grid
    rows = [["." for _ in range(grid.width)] for _ in range(grid.height)]
    for c in grid.blocked:
        rows[c.row][c.col] = "#"
    if trace is not None:
        for c in trace.cells()[1:]:
            rows[c.row][c.col] = "*"
    goals: dict[Cell, set[str]] = {}
    for m in hs.explicit_models:
        goals.setdefault(m.goal, set()).add(m.id[0].upper())
    for cell, letters in goals.items():
        rows[cell.row][cell.col] = letters.pop() if len(letters) == 1 else "!"
    rows[hs.start.row][hs.start.col] = "S"
    return "\n".join("".join(r) for r in rows)


def _load_trace_for(path, scenario: Scenario) -> Trace:
    trace = load_trace(path, scenario.hypothesis_set.grid)
    if trace.start != scenario.hypothesis_set.start:
        raise FileFormatError(
            f"{path}: trace starts at {list(trace.start)}, scenario starts at {list(scenario.hypothesis_set.start)}"
        )
    return trace


def _theta_value(text: str | None):
    if text is None:
        return None
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    return tuple(value) if isinstance(value, list) else value


def cmd_score(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.mode:
        scenario = scenario.with_(predictability_mode=args.mode)
    trace = _load_trace_for(args.trace, scenario)
    measure = args.measure
    theta_key, theta_value = args.theta_key, _theta_value(args.theta_value)
    if measure is None:
        if scenario.objective is None:
            raise UsageError("scenario has no objective; pass --measure")
    elif measure == "legibility" and theta_key is None:
        raise UsageError("legibility needs --theta-key (and optionally --theta-value)")
    if measure == "legibility" and theta_value is None:
        theta_value = scenario.agent_model.params.get(theta_key)

    obs = get_observer(scenario.hypothesis_set)
    score = step_scorer(scenario, measure, theta_key, theta_value)
    name = measure or OBJECTIVE_MEASURE[scenario.objective.kind]
    steps = range(len(trace) + 1)
    if args.split is not None:
        if not 0 <= args.split <= len(trace):
            raise UsageError(f"--split must lie in 0..{len(trace)}")
        steps = [args.split]

    rows = []
    for i in steps:
        value = score(trace.key, i)
        rows.append((i, value, obs.posterior_vector(trace.key[:i])))

    ids = list(obs.ids)
    print("step".rjust(4), name.rjust(14), *(i.rjust(10) for i in ids))
    for i, value, post in rows:
        print(f"{i:4d}", f"{value:14.6f}", *(f"{p:10.6f}" for p in post))

    if scenario.objective is not None:
        try:
            cost = generalized_cost(scenario, trace)
        except ValueError as exc:
            print(f"objective cost: n/a ({exc})")
        else:
            print(f"objective cost: {cost!r}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "measure", "value", *ids])
            for i, value, post in rows:
                w.writerow([i, name, repr(value), *(repr(p) for p in post)])
    return 0


def cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.objective is None:
        raise PlanningError("scenario has no objective")
    result = solve(scenario, restrict_optimal=args.restrict_optimal, lam=args.lam, workers=args.workers)
    print(f"plan: {result.chosen.key}")
    print(f"agent cost: {result.agent_cost:g}")
    print(f"objective cost: {result.objective_cost!r}")
    print(f"candidates evaluated: {result.candidates_evaluated}")
    if args.out:
        dump_trace(result.chosen, args.out)
    return 0


def cmd_render(args) -> int:
    scenario = load_scenario(args.scenario)
    trace = _load_trace_for(args.trace, scenario) if args.trace else None
    print(render_grid(scenario, trace))
    return 0


def cmd_enumerate(args) -> int:
    scenario = load_scenario(args.scenario)
    hs = scenario.hypothesis_set
    if args.model_id != M0 and args.model_id not in hs.ids and args.model_id != scenario.agent_model_id:
        raise FileFormatError(f"unknown model id {args.model_id!r} (known: {', '.join(hs.ids)})")
    if args.model_id == scenario.agent_model_id and args.model_id not in hs.ids:
        traces = enumerate_complete_traces(scenario.agent_model)
    else:
        traces = get_observer(hs).trace_sets[args.model_id]
    print(len(traces))
    if args.list:
        for key in traces.keys:
            print(key)
    return 0


FIXTURES = {"office": office_fixture, "corridor": corridor_fixture, "bottleneck": bottleneck_fixture}


def cmd_fixture(args) -> int:
    if args.m0_prior is None:
        sc = FIXTURES[args.name]()
    elif args.name == "office":
        sc = office_fixture(m0_prior=args.m0_prior)
    else:
        raise UsageError("--m0-prior is only supported for the office fixture")
    kind = args.objective
    if kind == "legible":
        obj = Objective.legible(args.theta_key, _theta_value(args.theta_value))
    elif kind == "k_predictable":
        if args.k is None:
            raise UsageError("k_predictable needs --k")
        obj = Objective.k_predictable(args.k)
    else:
        obj = Objective(kind)
    if args.weights == "discount":
        weights = WeightProfile.discount(args.gamma)
    elif args.weights == "kronecker":
        if args.k is None:
            raise UsageError("kronecker weights need --k")
        weights = WeightProfile.kronecker(args.k)
    else:
        weights = WeightProfile(args.weights)
    text = dump_scenario(sc.with_(objective=obj, weight_profile=weights), args.out)
    if not args.out:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ghap", description="Observer-aware planning on small grids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("score", help="score every prefix of a trace")
    s.add_argument("scenario")
    s.add_argument("trace")
    s.add_argument("--measure", choices=MEASURES)
    s.add_argument("--theta-key")
    s.add_argument("--theta-value", help="JSON value, e.g. '[0, 5]'")
    s.add_argument("--mode", choices=("prior", "posterior"), help="predictability model weighting")
    s.add_argument("--split", type=int, help="only report the prefix of this length")
    s.add_argument("--csv", metavar="PATH")
    s.set_defaults(func=cmd_score)

    s = sub.add_parser("plan", help="find the trace minimizing the scenario objective")
    s.add_argument("scenario")
    s.add_argument("--restrict-optimal", action="store_true")
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", metavar="PATH")
    s.set_defaults(func=cmd_plan)

    s = sub.add_parser("render", help="draw the grid (and a trace) as text")
    s.add_argument("scenario")
    s.add_argument("trace", nargs="?")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("enumerate", help="count (and list) a model's traces")
    s.add_argument("scenario")
    s.add_argument("model_id")
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("fixture", help="emit a canonical scenario file")
    s.add_argument("--name", choices=sorted(FIXTURES), default="office")
    s.add_argument("--m0-prior", type=float)
    s.add_argument("--objective", default="explicable",
                   choices=("explicable", "legible", "predictable", "k_predictable", "deceptive", "obfuscating"))
    s.add_argument("--theta-key", default="goal")
    s.add_argument("--theta-value")
    s.add_argument("--k", type=int)
    s.add_argument("--weights", default="final_only", choices=("uniform", "final_only", "discount", "kronecker"))
    s.add_argument("--gamma", type=float, default=0.9)
    s.add_argument("--out", metavar="PATH")
    s.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ghap {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PlanningError, NoExplanationError) as exc:
        print(f"ghap {args.command}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (FileFormatError, KeyError) as exc:
        print(f"ghap {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"ghap {args.command}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
