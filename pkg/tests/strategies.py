"""Hypothesis strategies for small weighted graphs with terminals."""
import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from hypothesis import strategies as st

from steinercut.core.graph import Graph


@st.composite
def graphs(draw, min_n: int = 2, max_n: int = 8, max_w: int = 20,
           connected: bool = False, min_terminals: int = 2) -> Graph:
    n = draw(st.integers(min_value=max(min_n, min_terminals), max_value=max_n))
    edges = []
    if connected:
        order = draw(st.permutations(list(range(n))))
        for a, b in zip(order, order[1:]):
            edges.append((a, b, draw(st.integers(min_value=1, max_value=max_w))))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n))
    for u, v in extra:
        edges.append((u, v, draw(st.integers(min_value=1, max_value=max_w))))
    terminals = draw(st.sets(st.integers(min_value=0, max_value=n - 1), min_size=min_terminals, max_size=n))
    return Graph.build(n, edges, terminals)


def dumbbell(bridge_w: int = 1, terminals=(0, 5)) -> Graph:
    """Two unit triangles {0,1,2} and {3,4,5} joined by the edge 2-3."""
    edges = [(0, 1, 1), (0, 2, 1), (1, 2, 1), (3, 4, 1), (3, 5, 1), (4, 5, 1), (2, 3, bridge_w)]
    return Graph.build(6, edges, terminals)


def triangle() -> Graph:
    return Graph.build(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [0, 1, 2])
