"""JSON scenario and trace files. Parsing is strict: unknown keys are errors."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import (
    ACTIONS,
    M0,
    Action,
    BeliefDistribution,
    Cell,
    GridModel,
    GridSpec,
    HypothesisSet,
    Objective,
    OBJECTIVE_KINDS,
    Scenario,
    Trace,
    WeightProfile,
    validate_trace,
)


class FileFormatError(ValueError):
    """Raised with a message naming the file and the offending line or key."""


_ACTION_NAMES = {"down": Action.DOWN, "left": Action.LEFT, "right": Action.RIGHT}
_WEIGHT_KINDS = ("uniform", "final_only", "discount", "kronecker", "explicit")


class _Reader:
    def __init__(self, source: str):
        self.source = source

    def fail(self, where: str, msg: str):
        raise FileFormatError(f"{self.source}: key '{where}': {msg}")

    def obj(self, value, where: str, required: set[str], optional: set[str] = frozenset()) -> dict:
        if not isinstance(value, dict):
            self.fail(where, f"expected an object, got {type(value).__name__}")
        for k in value:
            if k not in required and k not in optional:
                self.fail(f"{where}.{k}" if where else k, "unknown key")
        for k in required:
            if k not in value:
                self.fail(f"{where}.{k}" if where else k, "missing required key")
        return value

    def num(self, value, where: str, integer: bool = False):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(where, f"expected a number, got {value!r}")
        if integer and not isinstance(value, int):
            self.fail(where, f"expected an integer, got {value!r}")
        return value

    def cell(self, value, where: str) -> Cell:
        if not isinstance(value, list) or len(value) != 2:
            self.fail(where, f"expected [col, row], got {value!r}")
        return Cell(self.num(value[0], f"{where}[0]", True), self.num(value[1], f"{where}[1]", True))


def _parse_json(text: str, source: str) -> Any:
    def no_duplicates(pairs):
        out = {}
        for k, v in pairs:
            if k in out:
                raise FileFormatError(f"{source}: key '{k}': duplicate key")
            out[k] = v
        return out

    try:
        return json.loads(text, object_pairs_hook=no_duplicates)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _model(r: _Reader, d, where: str, grid: GridSpec, start: Cell) -> GridModel:
    d = r.obj(d, where, {"id", "goal"}, {"beta", "action_cost", "params"})
    if not isinstance(d["id"], str):
        r.fail(f"{where}.id", "expected a string")
    costs = {}
    if "action_cost" in d:
        ac = r.obj(d["action_cost"], f"{where}.action_cost", set(), set(_ACTION_NAMES))
        costs = {_ACTION_NAMES[k]: r.num(v, f"{where}.action_cost.{k}") for k, v in ac.items()}
    params = d.get("params", {})
    if not isinstance(params, dict):
        r.fail(f"{where}.params", "expected an object")
    goal = r.cell(d["goal"], f"{where}.goal")
    beta = r.num(d.get("beta", 1.0), f"{where}.beta")
    try:
        return GridModel(d["id"], grid, start, goal, beta=beta, action_cost=costs, params=params)
    except (ValueError, TypeError) as exc:
        r.fail(where, str(exc))


def _weights(r: _Reader, d) -> WeightProfile:
    d = r.obj(d, "weights", {"kind"}, {"gamma", "k", "values"})
    kind = d["kind"]
    try:
        if kind == "discount":
            return WeightProfile.discount(r.num(d.get("gamma"), "weights.gamma"))
        if kind == "kronecker":
            return WeightProfile.kronecker(r.num(d.get("k"), "weights.k", True))
        if kind == "explicit":
            vals = d.get("values")
            if not isinstance(vals, list):
                r.fail("weights.values", "expected a list")
            return WeightProfile.explicit([r.num(v, f"weights.values[{i}]") for i, v in enumerate(vals)])
        if kind in ("uniform", "final_only"):
            return WeightProfile(kind)
    except ValueError as exc:
        if isinstance(exc, FileFormatError):
            raise
        r.fail("weights", str(exc))
    r.fail("weights.kind", f"unknown kind {kind!r} (expected one of {', '.join(_WEIGHT_KINDS)})")


def _objective(r: _Reader, d) -> Objective:
    d = r.obj(d, "objective", {"kind"}, {"theta_key", "theta_value", "k"})
    kind = d["kind"]
    if kind not in OBJECTIVE_KINDS:
        r.fail("objective.kind", f"unknown kind {kind!r} (expected one of {', '.join(OBJECTIVE_KINDS)})")
    if kind == "legible":
        key = d.get("theta_key", "goal")
        if not isinstance(key, str):
            r.fail("objective.theta_key", "expected a string")
        return Objective.legible(key, d.get("theta_value"))
    if kind == "k_predictable":
        if "k" not in d:
            r.fail("objective.k", "missing required key for k_predictable")
        return Objective.k_predictable(r.num(d["k"], "objective.k", True))
    extra = set(d) - {"kind"}
    if extra:
        r.fail(f"objective.{sorted(extra)[0]}", f"not used by objective {kind!r}")
    return Objective(kind)


def parse_scenario(data: Any, source: str = "<scenario>") -> Scenario:
    r = _Reader(source)
    d = r.obj(
        data,
        "",
        {"grid", "start", "models", "prior", "agent_model"},
        {"m0_horizon", "objective", "weights", "lambda", "predictability_mode"},
    )
    g = r.obj(d["grid"], "grid", {"width", "height"}, {"blocked"})
    blocked = g.get("blocked", [])
    if not isinstance(blocked, list):
        r.fail("grid.blocked", "expected a list")
    try:
        grid = GridSpec.from_cells(
            r.num(g["width"], "grid.width", True),
            r.num(g["height"], "grid.height", True),
            [r.cell(c, f"grid.blocked[{i}]") for i, c in enumerate(blocked)],
        )
    except ValueError as exc:
        if isinstance(exc, FileFormatError):
            raise
        r.fail("grid", str(exc))
    start = r.cell(d["start"], "start")

    if not isinstance(d["models"], list) or not d["models"]:
        r.fail("models", "expected a non-empty list")
    models = tuple(_model(r, m, f"models[{i}]", grid, start) for i, m in enumerate(d["models"]))

    prior = d["prior"]
    if not isinstance(prior, dict):
        r.fail("prior", "expected an object")
    for k, v in prior.items():
        r.num(v, f"prior.{k}")
    horizon = d.get("m0_horizon")
    if horizon is not None:
        r.num(horizon, "m0_horizon", True)
    try:
        hs = HypothesisSet(models, BeliefDistribution(prior), horizon)
    except ValueError as exc:
        r.fail("prior" if "prior" in str(exc) or "probab" in str(exc) else "models", str(exc))

    agent = d["agent_model"]
    if isinstance(agent, str):
        try:
            agent_model = hs.model(agent)
        except KeyError:
            r.fail("agent_model", f"unknown model id {agent!r}")
    else:
        agent_model = _model(r, agent, "agent_model", grid, start)

    weights = _weights(r, d["weights"]) if "weights" in d else WeightProfile.final_only()
    objective = _objective(r, d["objective"]) if d.get("objective") is not None else None
    lam = r.num(d.get("lambda", 0.0), "lambda")
    mode = d.get("predictability_mode", "posterior")
    try:
        return Scenario(hs, agent_model, weights, objective, float(lam), mode)
    except ValueError as exc:
        r.fail("agent_model" if "agent" in str(exc) else "", str(exc))


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FileFormatError(f"{path}: cannot read file: {exc.strerror}") from None
    return parse_scenario(_parse_json(text, str(path)), str(path))


# -- writing --------------------------------------------------------------------

def _jsonable(v: Any) -> Any:
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict) or hasattr(v, "items"):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _model_dict(m: GridModel) -> dict:
    names = {a: n for n, a in _ACTION_NAMES.items()}
    out = {
        "id": m.id,
        "goal": list(m.goal),
        "beta": m.beta,
        "action_cost": {names[a]: m.action_cost[a] for a in ACTIONS},
    }
    params = {k: _jsonable(v) for k, v in m.params.items() if k != "goal"}
    if params:
        out["params"] = params
    return out


def scenario_to_dict(sc: Scenario) -> dict:
    hs = sc.hypothesis_set
    ids = [m.id for m in hs.explicit_models]
    d: dict[str, Any] = {
        "grid": {
            "width": hs.grid.width,
            "height": hs.grid.height,
            "blocked": [list(c) for c in sorted(hs.grid.blocked, key=lambda c: (c.row, c.col))],
        },
        "start": list(hs.start),
        "models": [_model_dict(m) for m in hs.explicit_models],
        "prior": {i: hs.prior[i] for i in ids + [M0]},
        "m0_horizon": hs.m0_horizon,
        "agent_model": sc.agent_model_id if sc.agent_model_id in ids else _model_dict(sc.agent_model),
    }
    w = sc.weight_profile
    wd: dict[str, Any] = {"kind": w.kind}
    if w.kind == "discount":
        wd["gamma"] = w.gamma
    elif w.kind == "kronecker":
        wd["k"] = w.k
    elif w.kind == "explicit":
        wd["values"] = list(w.values)
    d["weights"] = wd
    if sc.objective is not None:
        o = sc.objective
        od: dict[str, Any] = {"kind": o.kind}
        if o.kind == "legible":
            od["theta_key"] = o.theta_key
            if o.theta_value is not None:
                od["theta_value"] = _jsonable(o.theta_value)
        if o.kind == "k_predictable":
            od["k"] = o.k
        d["objective"] = od
    d["lambda"] = sc.lam
    if sc.predictability_mode != "posterior":
        d["predictability_mode"] = sc.predictability_mode
    return d


def dump_scenario(sc: Scenario, path: str | Path | None = None) -> str:
    text = json.dumps(scenario_to_dict(sc), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_trace(data: Any, source: str = "<trace>") -> Trace:
    r = _Reader(source)
    d = r.obj(data, "", {"start", "actions"})
    start = r.cell(d["start"], "start")
    acts = d["actions"]
    if not isinstance(acts, list):
        r.fail("actions", "expected a list of \"D\", \"L\" or \"R\"")
    out = []
    for i, a in enumerate(acts):
        if a not in ("D", "L", "R"):
            r.fail(f"actions[{i}]", f"expected \"D\", \"L\" or \"R\", got {a!r}")
        out.append(Action(a))
    return Trace(start, tuple(out))


def load_trace(path: str | Path, grid: GridSpec | None = None) -> Trace:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FileFormatError(f"{path}: cannot read file: {exc.strerror}") from None
    trace = parse_trace(_parse_json(text, str(path)), str(path))
    if grid is not None:
        bad = validate_trace(grid, trace)
        if bad is not None:
            raise FileFormatError(f"{path}: trace invalid on scenario grid: {bad}")
    return trace


def dump_trace(trace: Trace, path: str | Path | None = None) -> str:
    text = json.dumps({"start": list(trace.start), "actions": [a.value for a in trace.actions]}) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
