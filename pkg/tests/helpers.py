"""Shared strategies and small utilities for the test suite."""

import numpy as np
from hypothesis import strategies as st

from gra.generate import random_regular_graph
from gra.graph import Graph
from gra.rules import decode


@st.composite
def graphs(draw, min_order=4, max_order=32):
    order = draw(st.sampled_from(range(min_order, max_order + 1, 2)))
    seed = draw(st.integers(0, 2**31 - 1))
    alive = draw(st.floats(0.0, 1.0))
    return random_regular_graph(order, seed=seed, alive_probability=alive)


rule_numbers = st.integers(0, 65535)
rules = rule_numbers.map(decode)


def vertex_signatures(g: Graph):
    return [
        (int(g.states[v]), tuple(sorted(int(g.states[u]) for u in g.neighbors[v])))
        for v in range(g.order)
    ]


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """State-respecting graph isomorphism by backtracking; small orders only."""
    if g1.order != g2.order:
        return False
    s1, s2 = vertex_signatures(g1), vertex_signatures(g2)
    if sorted(s1) != sorted(s2):
        return False
    n = g1.order
    adj1 = [set(map(int, g1.neighbors[v])) for v in range(n)]
    adj2 = [set(map(int, g2.neighbors[v])) for v in range(n)]
    mapping = [-1] * n
    used = [False] * n
    order_v = sorted(range(n), key=lambda v: (s1[v], v))

    def feasible(v, w):
        if s1[v] != s2[w]:
            return False
        for u in adj1[v]:
            m = mapping[u]
            if m != -1 and m not in adj2[w]:
                return False
        return True

    def rec(i):
        if i == n:
            return True
        v = order_v[i]
        for w in range(n):
            if not used[w] and feasible(v, w):
                mapping[v] = w
                used[w] = True
                if rec(i + 1):
                    return True
                mapping[v] = -1
                used[w] = False
        return False

    return rec(0)


def random_states(order, rng):
    return (rng.random(order) < 0.5).astype(np.uint8)
