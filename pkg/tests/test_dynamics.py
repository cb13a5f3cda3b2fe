import pytest
from hypothesis import given, settings, strategies as st

from ghap.core import Cell, GridModel, GridSpec, Trace, key_cost
from ghap.dynamics import (
    COFFEE_DOOR,
    MAIL_DOOR,
    enumerate_complete_traces,
    enumerate_completions,
    office_fixture,
    universal_trace_set,
)

import oracles

T = Trace.from_string
OFFICE = office_fixture()
COFFEE = OFFICE.hypothesis_set.model("coffee")
MAIL = OFFICE.hypothesis_set.model("mail")

# Pinned from the brute-force oracles below (see test_*_matches_oracle).
OFFICE_GOAL_TRACE_COUNT = 16807
OFFICE_OPTIMAL_COFFEE_COUNT = 56
OFFICE_UNIVERSAL_COUNT = 137256
TWO_BY_TWO_H3_COUNT = 6


def test_single_path():
    m = GridModel("g", GridSpec(1, 2), (0, 0), (0, 1))
    assert enumerate_complete_traces(m).keys == ("D",)


def test_goal_at_start():
    m = GridModel("g", GridSpec(3, 3), (1, 1), (1, 1))
    assert enumerate_complete_traces(m).keys == ("",)


def test_unreachable_goal_is_empty():
    grid = GridSpec(3, 3, frozenset({Cell(0, 1), Cell(1, 1), Cell(2, 1)}))
    m = GridModel("g", grid, (1, 0), (1, 2))
    assert len(enumerate_complete_traces(m)) == 0


def test_office_coffee_traces():
    ts = enumerate_complete_traces(COFFEE)
    assert all(t.end == COFFEE_DOOR for t in ts)
    assert min(len(k) for k in ts.keys) == 8
    # goal appears only at the end
    assert all(COFFEE_DOOR not in t.cells()[:-1] for t in ts)


def test_office_counts_match_oracle():
    g = OFFICE.hypothesis_set.grid
    for m in (COFFEE, MAIL):
        ref = oracles.goal_traces(g.width, g.height, set(), m.start, m.goal)
        ts = enumerate_complete_traces(m)
        assert set(ts.keys) == set(ref)
        assert len(ts) == OFFICE_GOAL_TRACE_COUNT
    optimal = [k for k in enumerate_complete_traces(COFFEE).keys if key_cost(COFFEE, k) == 8]
    assert len(optimal) == OFFICE_OPTIMAL_COFFEE_COUNT


def test_office_universal_matches_oracle():
    hs = OFFICE.hypothesis_set
    u = universal_trace_set(hs.grid, hs.start, hs.m0_horizon)
    assert len(u) == OFFICE_UNIVERSAL_COUNT
    assert set(u.keys) == set(oracles.all_valid(7, 6, set(), (3, 0), hs.m0_horizon))


def test_two_by_two_universal_count():
    ref = oracles.all_valid_product(2, 2, set(), (0, 0), 3)
    u = universal_trace_set(GridSpec(2, 2), Cell(0, 0), 3)
    assert sorted(ref) == sorted(u.keys)
    assert len(u) == TWO_BY_TWO_H3_COUNT
    assert u.keys == ("", "D", "R", "DR", "RD", "RDL")


def test_universal_trivial_cases():
    assert universal_trace_set(GridSpec(1, 1), Cell(0, 0), 0).keys == ("",)
    assert universal_trace_set(GridSpec(4, 4), Cell(1, 1), 0).keys == ("",)


def test_completions_empty_prefix():
    assert enumerate_completions(COFFEE, T((3, 0), "")).keys == enumerate_complete_traces(COFFEE).keys


def test_completions_prefix_at_goal():
    p = T((3, 0), "LLLDDDDD")
    assert enumerate_completions(COFFEE, p).keys == ("LLLDDDDD",)


def test_completions_after_going_right():
    ts = enumerate_completions(COFFEE, T((3, 0), "RRR"))
    assert len(ts) > 0
    assert min(key_cost(COFFEE, k) for k in ts.keys) == 14  # 3 + 6 lefts + 5 downs
    assert all(key_cost(COFFEE, k) >= 11 for k in ts.keys)


def test_completions_through_goal_are_empty():
    # mail traces may pass the coffee door, coffee traces may not
    assert len(enumerate_completions(COFFEE, T((3, 0), "LLLDDDDDR"))) == 0
    assert enumerate_completions(MAIL, T((3, 0), "LLLDDDDD")).keys == ("LLLDDDDDRRRRRR",)


def test_deterministic_order():
    a = enumerate_complete_traces(COFFEE).keys
    b = enumerate_complete_traces(COFFEE).keys
    assert a == b
    assert list(a) == sorted(a, key=lambda k: (len(k), k))


@pytest.mark.parametrize("i", [0, 1, 2, 4, 7])
def test_completions_partition_complete_set(i):
    full = enumerate_complete_traces(COFFEE).keys
    prefixes = sorted({k[:i] for k in full if len(k) >= i})
    union = []
    for p in prefixes:
        union.extend(enumerate_completions(COFFEE, T((3, 0), p)).keys)
    short = [k for k in full if len(k) < i]
    assert sorted(union) == sorted(k for k in full if len(k) >= i)
    assert len(union) == len(set(union))
    assert len(short) + len(union) == len(full)


small_models = st.builds(
    lambda w, h, sc, sr, gc, gr: GridModel("g", GridSpec(w, h), (sc % w, sr % h), (gc % w, gr % h)),
    st.integers(1, 4), st.integers(1, 4), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
)


@settings(max_examples=60, deadline=None)
@given(small_models, st.text(alphabet="DLR", max_size=6), st.sampled_from("DLR"))
def test_monotone_shrinkage(model, key, a):
    pre = T(model.start, key)
    ext = T(model.start, key + a)
    try:
        outer = set(enumerate_completions(model, pre).keys)
        inner = set(enumerate_completions(model, ext).keys)
    except ValueError:
        return
    assert inner <= outer


@settings(max_examples=40, deadline=None)
@given(small_models)
def test_complete_set_matches_oracle(model):
    g = model.grid
    ref = oracles.goal_traces(g.width, g.height, set(), model.start, model.goal)
    assert sorted(enumerate_complete_traces(model).keys) == sorted(ref)


@settings(max_examples=40, deadline=None)
@given(small_models, st.integers(0, 8))
def test_universal_prefix_closed(model, horizon):
    u = universal_trace_set(model.grid, model.start, horizon)
    keys = set(u.keys)
    assert all(k[:i] in keys for k in keys for i in range(len(k)))
    assert all(len(k) <= horizon for k in keys)
