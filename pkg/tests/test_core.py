import math

import pytest
from hypothesis import given, strategies as st

from ghap.core import (
    Action,
    BeliefDistribution,
    Cell,
    GridModel,
    GridSpec,
    HypothesisSet,
    Trace,
    WeightProfile,
    split,
    theta_of,
    trace_cost,
    validate_trace,
)
from ghap.dynamics import COFFEE_DOOR, MAIL_DOOR, office_fixture

OFFICE = GridSpec(7, 6)
T = Trace.from_string


def test_empty_trace_is_valid():
    assert validate_trace(OFFICE, T((2, 4), "")) is None


def test_backtrack_is_a_revisit():
    bad = validate_trace(OFFICE, T((3, 0), "LR"))
    assert (bad.step, bad.reason) == (2, "revisit")


def test_leaving_the_grid():
    bad = validate_trace(OFFICE, T((0, 0), "L"))
    assert (bad.step, bad.reason) == (1, "out-of-bounds")


def test_blocked_cell():
    grid = GridSpec(3, 3, frozenset({Cell(1, 1)}))
    bad = validate_trace(grid, T((1, 0), "D"))
    assert (bad.step, bad.reason) == (1, "blocked")


def test_only_three_actions():
    assert [a.value for a in Action] == ["D", "L", "R"]
    assert Action.DOWN.delta == (0, 1)
    with pytest.raises(ValueError):
        Action.parse("U")


@pytest.mark.parametrize("i, lengths", [(0, (0, 8)), (8, (8, 0)), (3, (3, 5))])
def test_split(i, lengths):
    tau = T((3, 0), "LLLDDDDD")
    pre, post = split(tau, i)
    assert (len(pre), len(post)) == lengths
    assert pre.extend(post) == tau


def test_split_out_of_range():
    with pytest.raises(IndexError):
        split(T((3, 0), "DD"), 3)


def test_trace_cost():
    m = office_fixture().agent_model
    assert trace_cost(m, T((3, 0), "LLLDDDDD")) == 8
    assert trace_cost(m, T((3, 0), "")) == 0
    heavy = GridModel("x", OFFICE, (3, 0), (0, 5), action_cost={Action.DOWN: 2})
    assert trace_cost(heavy, T((3, 0), "DL")) == 3


def test_trace_cost_rejects_invalid():
    with pytest.raises(ValueError):
        trace_cost(office_fixture().agent_model, T((3, 0), "LR"))


def test_theta_of():
    hs = office_fixture().hypothesis_set
    assert theta_of(hs.model("coffee"), "goal") == COFFEE_DOOR
    assert theta_of(hs.model("mail"), "goal") == MAIL_DOOR
    with pytest.raises(KeyError):
        theta_of(hs.model("coffee"), "speed")


def test_model_invariants():
    with pytest.raises(ValueError):
        GridModel("x", OFFICE, (3, 0), (9, 9))
    with pytest.raises(ValueError):
        GridModel("x", OFFICE, (3, 0), (0, 5), beta=-1)
    with pytest.raises(ValueError):
        GridModel("x", OFFICE, (3, 0), (0, 5), params={"goal": (1, 1)})
    with pytest.raises(ValueError):
        GridModel("x", OFFICE, (3, 0), (0, 5), params={"blocked": [(0, 5)]})


def test_grid_invariants():
    with pytest.raises(ValueError):
        GridSpec(0, 3)
    with pytest.raises(ValueError):
        GridSpec(2, 2, frozenset({Cell(2, 0)}))
    with pytest.raises(ValueError):
        GridSpec.from_cells(3, 3, [(1, 1), (1, 1)])


def test_hypothesis_set_invariants():
    m = GridModel("a", OFFICE, (3, 0), (0, 5))
    with pytest.raises(ValueError):
        HypothesisSet((m,), BeliefDistribution({"a": 1.0}))
    with pytest.raises(ValueError):
        HypothesisSet((GridModel("M0", OFFICE, (3, 0), (0, 5)),), BeliefDistribution({"M0": 1.0}))
    other = GridModel("b", OFFICE, (2, 0), (0, 5))
    with pytest.raises(ValueError):
        HypothesisSet((m, other), BeliefDistribution({"a": 0.5, "b": 0.4, "M0": 0.1}))
    hs = HypothesisSet((m,), BeliefDistribution({"a": 0.9, "M0": 0.1}))
    assert hs.m0_horizon == 41
    assert hs.ids == ("a", "M0")


def test_belief_must_normalize():
    with pytest.raises(ValueError):
        BeliefDistribution({"a": 0.5, "b": 0.4})
    with pytest.raises(ValueError):
        BeliefDistribution({"a": 1.5, "b": -0.5})


class TestWeights:
    def test_uniform(self):
        assert WeightProfile.uniform().materialize(3) == [0.25] * 4

    def test_final_only(self):
        assert WeightProfile.final_only().materialize(2) == [0.0, 0.0, 1.0]

    def test_discount(self):
        w = WeightProfile.discount(0.5).materialize(2)
        assert w == pytest.approx([4 / 7, 2 / 7, 1 / 7])

    def test_kronecker(self):
        assert WeightProfile.kronecker(1).materialize(2) == [0.0, 1.0, 0.0]
        with pytest.raises(ValueError):
            WeightProfile.kronecker(3).materialize(2)

    def test_explicit(self):
        assert WeightProfile.explicit([1, 3]).materialize(1) == [0.25, 0.75]
        with pytest.raises(ValueError):
            WeightProfile.explicit([1, 3]).materialize(2)

    @given(
        st.sampled_from(["uniform", "final_only", "discount", "kronecker"]),
        st.integers(0, 40),
        st.floats(0.01, 1.0),
    )
    def test_normalized(self, kind, n, gamma):
        profile = {
            "uniform": WeightProfile.uniform(),
            "final_only": WeightProfile.final_only(),
            "discount": WeightProfile.discount(gamma),
            "kronecker": WeightProfile.kronecker(n // 2),
        }[kind]
        w = profile.materialize(n)
        assert len(w) == n + 1
        assert all(x >= 0 for x in w)
        assert math.fsum(w) == pytest.approx(1.0, abs=1e-12)


keys = st.text(alphabet="DLR", max_size=20)


@given(keys)
def test_validity_is_prefix_closed(key):
    tau = T((3, 0), key)
    ok = validate_trace(OFFICE, tau) is None
    prefixes_ok = all(validate_trace(OFFICE, tau.prefix(i)) is None for i in range(len(tau) + 1))
    assert ok == prefixes_ok


@given(keys, st.data())
def test_split_round_trip_and_cost_additivity(key, data):
    tau = T((3, 0), key)
    i = data.draw(st.integers(0, len(tau)))
    pre, post = split(tau, i)
    assert pre.extend(post) == tau
    if validate_trace(OFFICE, tau) is None:
        m = office_fixture().agent_model
        post_cost = sum(m.action_cost[a] for a in post)
        assert trace_cost(m, pre) + post_cost == trace_cost(m, tau)
