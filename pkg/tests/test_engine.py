import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from gra import _kernels
from gra.engine import Budget, apply_divisions, divide_vertex, evolve, step
from gra.errors import IndexOutOfRangeError, LengthMismatchError
from gra.graph import (
    build_graph,
    canonical_g0,
    complement_states,
    configuration_vector,
    k4_one_alive,
)
from gra.rules import complement_rule, decode

from helpers import graphs, isomorphic, rules

# golden 6x6 result of dividing vertex 1 of the one-alive K4
DIVIDED_K4_ADJACENCY = np.array(
    [
        [0, 1, 0, 0, 1, 1],
        [1, 0, 1, 1, 0, 0],
        [0, 1, 0, 1, 1, 0],
        [0, 1, 1, 0, 0, 1],
        [1, 0, 1, 0, 0, 1],
        [1, 0, 0, 1, 1, 0],
    ],
    dtype=np.int8,
)
DIVIDED_K4_STATES = np.array([1, 0, 0, 0, 0, 0], dtype=np.uint8)


class TestDivideVertex:
    def test_golden_matrix(self):
        g = divide_vertex(k4_one_alive(), 1)
        assert np.array_equal(g.adjacency_matrix(), DIVIDED_K4_ADJACENCY)
        assert np.array_equal(g.states, DIVIDED_K4_STATES)

    @pytest.mark.parametrize("v", [0, 1, 2, 3])
    def test_any_vertex_of_k4_stays_valid(self, v):
        g = divide_vertex(k4_one_alive(), v)
        assert g.order == 6
        g.validate()
        a = g.adjacency_matrix()
        assert np.array_equal(a, a.T)
        assert not a.diagonal().any()

    def test_divide_twice(self):
        g = divide_vertex(divide_vertex(k4_one_alive(), 1), 1)
        assert g.order == 8
        g.validate()

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            divide_vertex(k4_one_alive(), 4)

    def test_clones_inherit_current_state(self):
        g = build_graph([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], (0, 1, 0, 0))
        out = divide_vertex(g, 1)
        assert np.array_equal(out.states, [0, 1, 1, 1, 0, 0])


class TestApplyDivisions:
    def test_null_vector_is_identity(self):
        g = k4_one_alive()
        assert apply_divisions(g, np.zeros(4, dtype=np.uint8)) == g

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            apply_divisions(k4_one_alive(), np.zeros(5, dtype=np.uint8))

    def test_three_divisions_match_sequential(self):
        g = k4_one_alive()
        batched = apply_divisions(g, np.array([0, 1, 1, 1], dtype=np.uint8))
        assert batched.order == 10
        batched.validate()
        # lowest-index-first with shifting: original vertices 1, 2, 3 sit at
        # 1, 2+2, 3+4 when their turn comes
        seq = divide_vertex(divide_vertex(divide_vertex(g, 1), 4), 7)
        assert batched == seq

    @given(graphs(max_order=12))
    @settings(max_examples=25, deadline=None)
    def test_processing_order_invariance(self, g):
        # dividing in any vertex order gives isomorphic results
        rng = np.random.default_rng(g.order * 7919 + int(g.states.sum()))
        d = (rng.random(g.order) < 0.3).astype(np.uint8)
        if d.sum() == 0 or d.sum() > 3:
            picks = rng.choice(g.order, size=3, replace=False)
            d = np.zeros(g.order, dtype=np.uint8)
            d[picks] = 1
        reference = apply_divisions(g, d)
        chosen = np.flatnonzero(d)
        for perm in itertools.permutations(chosen.tolist()):
            cur = g
            done: list[int] = []
            for orig in perm:
                shift = 2 * sum(1 for w in done if w < orig)
                cur = divide_vertex(cur, orig + shift)
                done.append(orig)
            assert isomorphic(cur, reference)


class TestStep:
    def test_k4_under_765(self):
        # configurations (4,1,1,1): vertex 0 stays alive, the rest die and
        # divide, growing the order from 4 to 10
        out = step(k4_one_alive(), decode(765))
        assert out.divisions_performed == 3
        assert out.order_increment == 6
        assert out.graph.order == 10
        assert out.graph.states[0] == 1
        assert out.graph.time == 1
        out.graph.validate()

    def test_rule_zero_kills_everything(self):
        g = canonical_g0()
        out = step(g, decode(0))
        assert not out.graph.states.any()
        assert out.divisions_performed == 0
        assert np.array_equal(out.graph.neighbors, g.neighbors)

    def test_all_dead_under_256_triples(self):
        g = build_graph([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], (0, 0, 0, 0))
        out = step(g, decode(256))
        assert out.graph.order == 12
        assert not out.graph.states.any()
        out.graph.validate()

    @given(graphs(), rules)
    @settings(max_examples=80, deadline=None)
    def test_invariants_preserved(self, g, rule):
        out = step(g, rule)
        out.graph.validate()
        assert out.order_increment == 2 * out.divisions_performed
        assert out.graph.order >= g.order

    @given(graphs(), rules)
    @settings(max_examples=60, deadline=None)
    def test_divisions_match_division_vector(self, g, rule):
        conf = configuration_vector(g)
        expected = int(rule.divides[conf].sum())
        assert step(g, rule).divisions_performed == expected

    @given(graphs(), rules)
    @settings(max_examples=80, deadline=None)
    def test_color_symmetry_commutation(self, g, rule):
        lhs = step(complement_states(g), complement_rule(rule)).graph
        rhs = complement_states(step(g, rule).graph)
        assert lhs == rhs


@pytest.mark.skipif(_kernels.NUMBA_BACKEND is None, reason="numba unavailable")
class TestBackendEquivalence:
    @given(graphs(), rules)
    @settings(max_examples=60, deadline=None)
    def test_numpy_and_numba_agree(self, g, rule):
        a = step(g, rule, backend=_kernels.NUMPY_BACKEND)
        b = step(g, rule, backend=_kernels.NUMBA_BACKEND)
        assert a.graph == b.graph
        assert a.divisions_performed == b.divisions_performed


class TestEvolve:
    def test_rule_zero_halts_at_period_one(self):
        trace = evolve(k4_one_alive(), decode(0), Budget(max_steps=50))
        assert trace.stop_reason == "cycle-found"
        assert trace.cycle_period == 1
        assert trace.orders[0] == 4
        assert (trace.increments == 0).all()

    def test_rule_256_triples_from_t1(self):
        trace = evolve(canonical_g0(), decode(256), Budget(max_steps=10, max_order=10**9))
        assert trace.steps == 10
        for t in range(1, 10):
            assert trace.orders[t + 1] == 3 * trace.orders[t]
            # every vertex divides, so each increment doubles the order
            assert trace.increments[t] == 2 * trace.orders[t]

    def test_max_steps_budget(self):
        trace = evolve(canonical_g0(), decode(2222), Budget(max_steps=37))
        assert trace.stop_reason == "max-steps"
        assert trace.steps == 37
        assert len(trace.orders) == 38
        assert len(trace.increments) == 37

    def test_max_order_budget(self):
        trace = evolve(canonical_g0(), decode(256), Budget(max_steps=10_000, max_order=1_000))
        assert trace.stop_reason == "max-order"
        assert trace.final_order > 1_000
        assert trace.orders[-2] <= 1_000

    def test_wall_clock_budget(self):
        trace = evolve(
            canonical_g0(), decode(2222), Budget(max_steps=10**9, max_order=10**9, wall_clock=0.2)
        )
        assert trace.stop_reason == "wall-clock"

    def test_increments_even_nonnegative(self):
        trace = evolve(canonical_g0(), decode(770), Budget(max_steps=200))
        assert (trace.increments >= 0).all()
        assert (trace.increments % 2 == 0).all()
        assert np.array_equal(np.diff(trace.orders), trace.increments)

    def test_blinker_period_two(self):
        # all-alive K4 under a rule that flips everything each step
        flip = sum(1 << c for c in range(4))  # dead -> alive, alive -> dead
        g = build_graph([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], (1, 1, 1, 1))
        trace = evolve(g, decode(flip), Budget(max_steps=50))
        assert trace.stop_reason == "cycle-found"
        assert trace.cycle_period == 2

    def test_final_graph_matches_orders(self):
        trace = evolve(canonical_g0(), decode(300), Budget(max_steps=25))
        assert trace.final_graph.order == trace.final_order
