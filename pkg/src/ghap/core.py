"""Domain types shared across the package: grids, models, traces, beliefs, weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping, NamedTuple, Sequence

M0 = "M0"
PROB_TOL = 1e-9


class Cell(NamedTuple):
    col: int
    row: int


class Action(Enum):
    DOWN = "D"
    LEFT = "L"
    RIGHT = "R"

    @property
    def delta(self) -> tuple[int, int]:
        return _DELTAS[self]

    def apply(self, cell: Cell) -> Cell:
        dc, dr = _DELTAS[self]
        return Cell(cell.col + dc, cell.row + dr)

    @classmethod
    def parse(cls, s: str) -> Action:
        try:
            return cls(s.upper())
        except ValueError:
            raise ValueError(f"unknown action {s!r} (expected one of D, L, R)") from None


_DELTAS = {Action.DOWN: (0, 1), Action.LEFT: (-1, 0), Action.RIGHT: (1, 0)}
ACTIONS: tuple[Action, ...] = (Action.DOWN, Action.LEFT, Action.RIGHT)


def as_cell(value: Any) -> Cell:
    if isinstance(value, Cell):
        return value
    col, row = value
    return Cell(int(col), int(row))


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid; cells are (col, row) with row 0 at the top."""

    width: int
    height: int
    blocked: frozenset[Cell] = frozenset()

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.width}x{self.height}")
        blocked = frozenset(as_cell(c) for c in self.blocked)
        for c in blocked:
            if not self.in_bounds(c):
                raise ValueError(f"blocked cell {tuple(c)} lies outside the grid")
        object.__setattr__(self, "blocked", blocked)

    @classmethod
    def from_cells(cls, width: int, height: int, blocked: Iterable[Any] = ()) -> GridSpec:
        cells = [as_cell(c) for c in blocked]
        if len(set(cells)) != len(cells):
            raise ValueError("blocked cell list contains duplicates")
        return cls(width, height, frozenset(cells))

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell.col < self.width and 0 <= cell.row < self.height

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and cell not in self.blocked

    @property
    def n_cells(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class Trace:
    """A start cell plus a sequence of actions."""

    start: Cell
    actions: tuple[Action, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "start", as_cell(self.start))
        object.__setattr__(self, "actions", tuple(self.actions))

    @classmethod
    def from_string(cls, start: Any, actions: str) -> Trace:
        return cls(as_cell(start), tuple(Action.parse(a) for a in actions))

    @cached_property
    def key(self) -> str:
        """Compact action string, e.g. ``"LLDD"``."""
        return "".join(a.value for a in self.actions)

    def __len__(self) -> int:
        return len(self.actions)

    def __str__(self) -> str:
        return f"{tuple(self.start)}:{self.key or '<empty>'}"

    def cells(self) -> list[Cell]:
        """State sequence visited by the trace, start included."""
        out = [self.start]
        for a in self.actions:
            out.append(a.apply(out[-1]))
        return out

    @property
    def end(self) -> Cell:
        return self.cells()[-1]

    def prefix(self, i: int) -> Trace:
        return split(self, i)[0]

    def extend(self, actions: Sequence[Action]) -> Trace:
        return Trace(self.start, self.actions + tuple(actions))


@dataclass(frozen=True)
class Violation:
    step: int
    reason: str  # "out-of-bounds" | "blocked" | "revisit"
    cell: Cell

    def __str__(self) -> str:
        return f"{self.reason} at step {self.step} (cell {tuple(self.cell)})"


def validate_trace(grid: GridSpec, trace: Trace, extra_blocked: Iterable[Cell] = ()) -> Violation | None:
    """Return ``None`` for a valid trace, otherwise the first violation.

    Step 0 refers to the start cell; step ``i`` to the cell reached after the
    i-th action.
    """
    extra = frozenset(extra_blocked)

    def check(step, cell, seen):
        if not grid.in_bounds(cell):
            return Violation(step, "out-of-bounds", cell)
        if cell in grid.blocked or cell in extra:
            return Violation(step, "blocked", cell)
        if cell in seen:
            return Violation(step, "revisit", cell)
        return None

    seen: set[Cell] = set()
    for step, cell in enumerate(trace.cells()):
        bad = check(step, cell, seen)
        if bad is not None:
            return bad
        seen.add(cell)
    return None


def split(trace: Trace, i: int) -> tuple[Trace, tuple[Action, ...]]:
    if not 0 <= i <= len(trace):
        raise IndexError(f"split index {i} outside 0..{len(trace)}")
    return Trace(trace.start, trace.actions[:i]), trace.actions[i:]


def _freeze(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    if isinstance(value, Mapping):
        return MappingProxyType({k: _freeze(v) for k, v in value.items()})
    return value


UNIT_COSTS = MappingProxyType({a: 1.0 for a in ACTIONS})


@dataclass(frozen=True)
class GridModel:
    """One hypothesized agent model.

    ``params`` always carries ``"goal"``. An optional ``"blocked"`` entry lists
    cells this model treats as obstacles on top of the shared grid.
    """

    id: str
    grid: GridSpec
    start: Cell
    goal: Cell
    beta: float = 1.0
    action_cost: Mapping[Action, float] = field(default=UNIT_COSTS, hash=False)
    params: Mapping[str, Any] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        start, goal = as_cell(self.start), as_cell(self.goal)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "goal", goal)
        if not self.id:
            raise ValueError("model id must be non-empty")
        if self.beta < 0 or math.isnan(self.beta):
            raise ValueError(f"model {self.id}: beta must be >= 0, got {self.beta}")

        costs = dict(UNIT_COSTS)
        for a, c in self.action_cost.items():
            a = a if isinstance(a, Action) else Action.parse(a)
            if not c > 0:
                raise ValueError(f"model {self.id}: action cost for {a.value} must be positive")
            costs[a] = c
        object.__setattr__(self, "action_cost", MappingProxyType(costs))

        params = {k: _freeze(v) for k, v in self.params.items()}
        if "goal" in params and as_cell(params["goal"]) != goal:
            raise ValueError(f"model {self.id}: params['goal'] does not match goal {tuple(goal)}")
        params["goal"] = goal
        if "blocked" in params:
            params["blocked"] = tuple(as_cell(c) for c in params["blocked"])
        object.__setattr__(self, "params", MappingProxyType(params))

        for name, c in (("start", start), ("goal", goal)):
            if not self.grid.in_bounds(c):
                raise ValueError(f"model {self.id}: {name} {tuple(c)} is out of bounds")
            if c in self.blocked_cells:
                raise ValueError(f"model {self.id}: {name} {tuple(c)} is blocked")

    @cached_property
    def blocked_cells(self) -> frozenset[Cell]:
        return self.grid.blocked | frozenset(self.params.get("blocked", ()))

    @cached_property
    def char_costs(self) -> dict[str, float]:
        return {a.value: c for a, c in self.action_cost.items()}

    def is_free(self, cell: Cell) -> bool:
        return self.grid.in_bounds(cell) and cell not in self.blocked_cells


def trace_cost(model: GridModel, trace: Trace) -> float:
    bad = validate_trace(model.grid, trace, model.blocked_cells)
    if bad is not None:
        raise ValueError(f"trace invalid in model {model.id}: {bad}")
    return key_cost(model, trace.key)


def key_cost(model: GridModel, key: str) -> float:
    costs = model.char_costs
    return sum(costs[ch] for ch in key)


def theta_of(model: GridModel, key: str) -> Any:
    try:
        return model.params[key]
    except KeyError:
        raise KeyError(f"model {model.id} has no parameter {key!r}") from None


@dataclass(frozen=True)
class BeliefDistribution:
    entries: Mapping[str, float] = field(hash=False)

    def __post_init__(self):
        entries = {str(k): float(v) for k, v in self.entries.items()}
        if not entries:
            raise ValueError("belief distribution is empty")
        for k, v in entries.items():
            if not v >= 0:
                raise ValueError(f"probability for {k} is negative or NaN: {v}")
        total = math.fsum(entries.values())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")
        object.__setattr__(self, "entries", MappingProxyType(entries))

    def __getitem__(self, model_id: str) -> float:
        return self.entries[model_id]

    def get(self, model_id: str, default: float = 0.0) -> float:
        return self.entries.get(model_id, default)

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v:.6f}" for k, v in self.entries.items())
        return f"BeliefDistribution({{{body}}})"


@dataclass(frozen=True)
class HypothesisSet:
    """Explicit models entertained by the observer plus the unknown model ``M0``."""

    explicit_models: tuple[GridModel, ...]
    prior: BeliefDistribution
    m0_horizon: int | None = None

    def __post_init__(self):
        models = tuple(self.explicit_models)
        object.__setattr__(self, "explicit_models", models)
        if not models:
            raise ValueError("hypothesis set needs at least one explicit model")
        ids = [m.id for m in models]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate model ids: {ids}")
        if M0 in ids:
            raise ValueError(f"{M0!r} is reserved for the unknown-model hypothesis")
        grid, start = models[0].grid, models[0].start
        for m in models[1:]:
            if m.grid != grid or m.start != start:
                raise ValueError(f"model {m.id} does not share the grid/start of {models[0].id}")
        prior = self.prior
        if not isinstance(prior, BeliefDistribution):
            prior = BeliefDistribution(prior)
            object.__setattr__(self, "prior", prior)
        if set(prior.entries) != set(ids) | {M0}:
            raise ValueError(f"prior must cover exactly {ids + [M0]}, got {list(prior.entries)}")
        horizon = self.m0_horizon
        if horizon is None:
            horizon = grid.n_cells - 1
        if horizon < 0:
            raise ValueError("m0_horizon must be non-negative")
        object.__setattr__(self, "m0_horizon", int(horizon))

    @property
    def grid(self) -> GridSpec:
        return self.explicit_models[0].grid

    @property
    def start(self) -> Cell:
        return self.explicit_models[0].start

    @property
    def ids(self) -> tuple[str, ...]:
        """Hypothesis ids in canonical order: explicit models, then ``M0``."""
        return tuple(m.id for m in self.explicit_models) + (M0,)

    def model(self, model_id: str) -> GridModel:
        for m in self.explicit_models:
            if m.id == model_id:
                return m
        raise KeyError(f"no explicit model {model_id!r}")


class WeightProfile(NamedTuple):
    """Per-timestep weights over prefixes i = 0..n, normalized to sum to 1."""

    kind: str  # uniform | final_only | discount | kronecker | explicit
    gamma: float | None = None
    k: int | None = None
    values: tuple[float, ...] | None = None

    @classmethod
    def uniform(cls):
        return cls("uniform")

    @classmethod
    def final_only(cls):
        return cls("final_only")

    @classmethod
    def discount(cls, gamma: float):
        if not 0 < gamma <= 1:
            raise ValueError(f"discount must lie in (0, 1], got {gamma}")
        return cls("discount", gamma=gamma)

    @classmethod
    def kronecker(cls, k: int):
        if k < 0:
            raise ValueError("k must be non-negative")
        return cls("kronecker", k=int(k))

    @classmethod
    def explicit(cls, values: Sequence[float]):
        values = tuple(float(v) for v in values)
        if any(not v >= 0 for v in values) or not any(v > 0 for v in values):
            raise ValueError("explicit weights must be non-negative with a positive entry")
        return cls("explicit", values=values)

    def materialize(self, n: int) -> list[float]:
        """Weights alpha_0..alpha_n for a trace with ``n`` actions."""
        if self.kind == "uniform":
            raw = [1.0] * (n + 1)
        elif self.kind == "final_only":
            raw = [0.0] * n + [1.0]
        elif self.kind == "discount":
            raw = [self.gamma**i for i in range(n + 1)]
        elif self.kind == "kronecker":
            if self.k > n:
                raise ValueError(f"weight step k={self.k} exceeds trace length {n}")
            raw = [0.0] * (n + 1)
            raw[self.k] = 1.0
        elif self.kind == "explicit":
            if len(self.values) != n + 1:
                raise ValueError(f"explicit weights have {len(self.values)} entries, trace needs {n + 1}")
            raw = list(self.values)
        else:
            raise ValueError(f"unknown weight profile {self.kind!r}")
        total = sum(raw)
        return [w / total for w in raw]


OBJECTIVE_KINDS = ("explicable", "legible", "predictable", "k_predictable", "deceptive", "obfuscating")


class Objective(NamedTuple):
    kind: str
    theta_key: str | None = None
    theta_value: Any = None
    k: int | None = None

    @classmethod
    def explicable(cls):
        return cls("explicable")

    @classmethod
    def legible(cls, theta_key: str = "goal", theta_value: Any = None):
        return cls("legible", theta_key=theta_key, theta_value=_freeze(theta_value))

    @classmethod
    def predictable(cls):
        return cls("predictable")

    @classmethod
    def k_predictable(cls, k: int):
        return cls("k_predictable", k=int(k))

    @classmethod
    def deceptive(cls):
        return cls("deceptive")

    @classmethod
    def obfuscating(cls):
        return cls("obfuscating")


@dataclass(frozen=True)
class Scenario:
    """A full planning problem: true agent model, observer hypotheses, and objective."""

    hypothesis_set: HypothesisSet
    agent_model: GridModel
    weight_profile: WeightProfile = WeightProfile.final_only()
    objective: Objective | None = None
    lam: float = 0.0
    predictability_mode: str = "posterior"

    def __post_init__(self):
        hs, agent = self.hypothesis_set, self.agent_model
        if agent.grid != hs.grid or agent.start != hs.start:
            raise ValueError("agent model must share the hypothesis set's grid and start")
        if agent.id in (m.id for m in hs.explicit_models) and hs.model(agent.id) != agent:
            raise ValueError(f"agent model {agent.id!r} differs from the explicit model with the same id")
        if agent.id == M0:
            raise ValueError(f"agent model cannot use the reserved id {M0!r}")
        if self.objective is not None and self.objective.kind not in OBJECTIVE_KINDS:
            raise ValueError(f"unknown objective {self.objective.kind!r}")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")
        if self.predictability_mode not in ("prior", "posterior"):
            raise ValueError(f"unknown predictability mode {self.predictability_mode!r}")

    @property
    def agent_model_id(self) -> str:
        return self.agent_model.id

    def with_(self, **changes) -> Scenario:
        return replace(self, **changes)
