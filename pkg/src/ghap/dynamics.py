"""Exhaustive enumeration of trace spaces under the down/left/right, no-revisit dynamics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .core import (
    ACTIONS,
    M0,
    BeliefDistribution,
    Cell,
    GridModel,
    GridSpec,
    HypothesisSet,
    Scenario,
    Trace,
    as_cell,
    validate_trace,
)

_MOVES = tuple((a.value, a.delta) for a in ACTIONS)  # fixed D < L < R order


@dataclass(frozen=True)
class TraceSet:
    """Traces sharing one start, stored as action strings.

    Order is shorter-first, then lexicographic with D < L < R (which is plain
    string order on the action alphabet).
    """

    start: Cell
    keys: tuple[str, ...]

    def __post_init__(self):
        keys = tuple(sorted(set(self.keys), key=lambda k: (len(k), k)))
        object.__setattr__(self, "keys", keys)

    def __len__(self) -> int:
        return len(self.keys)

    def __iter__(self) -> Iterator[Trace]:
        for k in self.keys:
            yield Trace.from_string(self.start, k)

    def __contains__(self, item) -> bool:
        if isinstance(item, Trace):
            return item.start == self.start and item.key in self._keyset
        return item in self._keyset

    @property
    def _keyset(self) -> frozenset[str]:
        ks = self.__dict__.get("_ks")
        if ks is None:
            ks = frozenset(self.keys)
            object.__setattr__(self, "_ks", ks)
        return ks

    @property
    def traces(self) -> list[Trace]:
        return list(self)


def _search(is_free, start: Cell, prefix_cells: list[Cell], prefix: str, goal: Cell | None, horizon: int) -> list[str]:
    out: list[str] = []

    def rec(cell: Cell, key: str, depth: int):
        if goal is None:
            out.append(key)
        elif cell == goal:
            out.append(key)
            return
        if depth >= horizon:
            return
        for ch, (dc, dr) in _MOVES:
            nxt = Cell(cell.col + dc, cell.row + dr)
            if nxt in visited or not is_free(nxt):
                continue
            visited.add(nxt)
            rec(nxt, key + ch, depth + 1)
            visited.discard(nxt)

    visited = set(prefix_cells)
    rec(start, prefix, len(prefix))
    return out


def enumerate_complete_traces(model: GridModel) -> TraceSet:
    """All traces from ``model.start`` that end at the first visit to ``model.goal``."""
    horizon = model.grid.n_cells - 1
    keys = _search(model.is_free, model.start, [model.start], "", model.goal, horizon)
    return TraceSet(model.start, tuple(keys))


def enumerate_completions(model: GridModel, prefix: Trace) -> TraceSet:
    """Complete traces of ``model`` that begin with ``prefix``."""
    if prefix.start != model.start:
        raise ValueError(f"prefix starts at {tuple(prefix.start)}, model {model.id} at {tuple(model.start)}")
    bad = validate_trace(model.grid, prefix, model.blocked_cells)
    if bad is not None:
        raise ValueError(f"prefix invalid in model {model.id}: {bad}")
    cells = prefix.cells()
    if model.goal in cells[:-1]:
        return TraceSet(model.start, ())
    if cells[-1] == model.goal:
        return TraceSet(model.start, (prefix.key,))
    horizon = model.grid.n_cells - 1
    keys = _search(model.is_free, cells[-1], cells, prefix.key, model.goal, horizon)
    return TraceSet(model.start, tuple(keys))


def universal_trace_set(grid: GridSpec, start: Cell, horizon: int) -> TraceSet:
    """Every valid trace from ``start`` with at most ``horizon`` actions, any end cell."""
    start = as_cell(start)
    if not grid.is_free(start):
        raise ValueError(f"start {tuple(start)} is out of bounds or blocked")
    keys = _search(grid.is_free, start, [start], "", None, horizon)
    return TraceSet(start, tuple(keys))


# ---------------------------------------------------------------------------
# fixtures

OFFICE_START = Cell(3, 0)
COFFEE_DOOR = Cell(0, 5)
MAIL_DOOR = Cell(6, 5)


def _split_prior(ids, m0_prior: float) -> BeliefDistribution:
    share = (1.0 - m0_prior) / len(ids)
    entries = {i: share for i in ids}
    entries[M0] = m0_prior
    return BeliefDistribution(entries)


def office_fixture(m0_prior: float = 0.10, beta: float = 2.0) -> Scenario:
    """Office robot: 7x6 open grid, start at the top middle, coffee and mail doors
    in the bottom corners. The agent is truly delivering coffee. No objective set."""
    grid = GridSpec(7, 6)
    coffee = GridModel("coffee", grid, OFFICE_START, COFFEE_DOOR, beta=beta)
    mail = GridModel("mail", grid, OFFICE_START, MAIL_DOOR, beta=beta)
    hs = HypothesisSet((coffee, mail), _split_prior(["coffee", "mail"], m0_prior))
    return Scenario(hs, coffee)


def corridor_fixture(height: int = 6) -> Scenario:
    """1-wide column; both goal models share the bottom cell so every path is forced."""
    grid = GridSpec(1, height)
    start, goal = Cell(0, 0), Cell(0, height - 1)
    coffee = GridModel("coffee", grid, start, goal, beta=2.0)
    mail = GridModel("mail", grid, start, goal, beta=2.0)
    hs = HypothesisSet((coffee, mail), _split_prior(["coffee", "mail"], 0.0))
    return Scenario(hs, coffee)


# Office variant: rows 0-1 open, then wall row 2 with openings only at the two
# edge columns. Each opening leads into a 1-wide corridor ending at one door.
BOTTLENECK_K = 5


def bottleneck_fixture() -> Scenario:
    width, height = 7, 6
    blocked = {Cell(c, r) for r in range(2, height) for c in range(1, width - 1)}
    grid = GridSpec(width, height, frozenset(blocked))
    coffee = GridModel("coffee", grid, OFFICE_START, COFFEE_DOOR, beta=2.0)
    mail = GridModel("mail", grid, OFFICE_START, MAIL_DOOR, beta=2.0)
    hs = HypothesisSet((coffee, mail), _split_prior(["coffee", "mail"], 0.0))
    return Scenario(hs, coffee)


# Sparse/dense pair (found by scripts/find_sparse_dense_pair.py): same grid, goal,
# optimum and probe; the sparse model walls off one cell, so the dense model
# admits strictly more traces cheaper than the probe while both have the same
# number of traces at every cost level above it.
PAIR_PROBE = "RDLDRRDL"


def sparse_dense_pair(m0_prior: float = 0.1, beta: float = 1.0) -> tuple[Scenario, Scenario, Trace]:
    grid = GridSpec(3, 4)
    start, goal = Cell(0, 0), Cell(1, 3)
    sparse = GridModel("sparse", grid, start, goal, beta=beta, params={"blocked": [(0, 3)]})
    dense = GridModel("dense", grid, start, goal, beta=beta)
    out = []
    for m in (sparse, dense):
        hs = HypothesisSet((m,), _split_prior([m.id], m0_prior))
        out.append(Scenario(hs, m))
    return out[0], out[1], Trace.from_string(start, PAIR_PROBE)
