import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from steinercut.config.config import SolverConfig
from steinercut.core.errors import InvalidArgumentError
from steinercut.core.graph import Graph, terminal_sparsity
from steinercut.core.params import StrengthParams
from steinercut.decomposition.cut_matching import (CutGraph, OutcomeKind, combine_bipartition, cut_game,
                                                   cut_or_flow, trim)
from strategies import dumbbell, graphs


def test_cut_or_flow_bottleneck_edge():
    g = Graph.build(2, [(0, 1, 1)], [0, 1])
    result = cut_or_flow(g, {0}, kappa=10, delta=1)
    assert result.value == 1
    assert result.side == frozenset({0})
    assert result.cut.boundary_weight == 1
    assert len(result.paths) == 1
    assert result.paths[0].endpoints == (0, 1)


def test_cut_or_flow_saturated_taps():
    g = Graph.build(2, [(0, 1, 10)], [0, 1])
    result = cut_or_flow(g, {0}, kappa=1, delta=1)
    assert result.value == 1
    assert result.side == frozenset()
    assert result.cut is None


def test_cut_or_flow_fractional_taps():
    g = dumbbell()
    result = cut_or_flow(g, {0}, kappa=Fraction(1, 64), delta=2)
    assert result.scale == 32
    assert result.value == Fraction(1, 32)
    assert sum(p.capacity for p in result.paths) == 1


def test_cut_or_flow_rejects_bad_sources():
    g = dumbbell()
    for sources in (set(), {0, 5}, {1}):
        with pytest.raises(InvalidArgumentError):
            cut_or_flow(g, sources, kappa=1, delta=1)


@settings(max_examples=50, deadline=None)
@given(graphs(max_n=8), st.sampled_from([Fraction(1, 64), Fraction(1, 2), 1, 4]),
       st.integers(min_value=1, max_value=64), st.data())
def test_cut_or_flow_cut_is_terminal_sparse(g, kappa, delta, data):
    """Any proper cut returned has terminal-sparsity at most delta*kappa"""
    terminals = sorted(g.terminals)
    count = data.draw(st.integers(min_value=1, max_value=len(terminals) - 1))
    result = cut_or_flow(g, terminals[:count], kappa, delta)
    if result.cut is not None:
        ratio = terminal_sparsity(g, result.cut.side)
        assert ratio is None or ratio <= Fraction(delta) * Fraction(kappa)
    assert result.value <= Fraction(delta) * Fraction(kappa) * min(count, len(terminals) - count)


def test_combine_bipartition():
    assert combine_bipartition([{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}], 10) == (
        frozenset({0, 1, 2, 3, 4}), frozenset({5, 6, 7, 8, 9}))
    clusters = [{2 * i, 2 * i + 1} for i in range(5)]
    first, second = combine_bipartition(clusters, 10)
    assert first == frozenset({0, 1, 2, 3})
    assert len(second) == 6
    with pytest.raises(InvalidArgumentError):
        combine_bipartition([set(range(7)), {7, 8, 9}], 10)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=12))
def test_combine_bipartition_balance(sizes):
    total = sum(sizes)
    if any(3 * s > 2 * total for s in sizes):
        return
    clusters, start = [], 0
    for size in sizes:
        clusters.append(set(range(start, start + size)))
        start += size
    first, second = combine_bipartition(clusters, total)
    assert first | second == frozenset(range(total))
    assert not first & second
    for part in (first, second):
        assert total <= 3 * len(part) <= 2 * total


def test_trim_whole_terminal_set():
    g = dumbbell()
    side, residual = trim(g, {0, 5}, StrengthParams.plain(1, 1, 1))
    assert side == g.vertices
    assert residual is None


def test_trim_peels_light_terminal():
    g = Graph.build(3, [(0, 1, 10), (1, 2, 1)], [0, 1, 2])
    side, residual = trim(g, {0, 1}, StrengthParams.plain(1, 4, 1))
    assert side == frozenset({0, 1})
    assert residual.boundary_weight == 1


def test_trim_requires_two_thirds():
    g = Graph.build(3, [(0, 1, 10), (1, 2, 1)], [0, 1, 2])
    with pytest.raises(InvalidArgumentError):
        trim(g, {0}, StrengthParams.plain(1, 4, 1))


def test_cut_graph_scaling():
    h = CutGraph((3, 7, 9))
    h.add_edge(3, 9, Fraction(1, 2), 1)
    h.add_edge(7, 9, Fraction(1, 3), 1)
    graph, scale = h.to_graph()
    assert scale == 6
    assert sorted(graph.edges) == [(0, 2, 3), (1, 2, 2)]
    assert h.round_degrees(1)[9] == Fraction(5, 6)
    assert h.total_weight == Fraction(5, 6)


def test_cut_game_finds_bridge():
    outcome = cut_game(dumbbell(), delta=1024)
    assert outcome.kind is OutcomeKind.BALANCED_SPARSE_CUT
    assert outcome.cut.side == frozenset({0, 1, 2})
    assert outcome.cut.boundary_weight == 1
    assert outcome.rounds == 1


def test_cut_game_on_heavy_edge_ends_with_one_cluster():
    g = Graph.build(2, [(0, 1, 100)], [0, 1])
    outcome = cut_game(g, delta=1)
    assert outcome.kind is OutcomeKind.TERMINAL_STRONG_CLUSTER
    assert outcome.cluster == g.vertices
    assert outcome.residual_cut is None
    assert outcome.rounds == 2
    assert outcome.flow_values == (Fraction(1, 64),)


def test_cut_game_on_disconnected_terminals():
    g = Graph.build(4, [(0, 1, 1), (2, 3, 1)], [0, 2])
    outcome = cut_game(g, delta=1)
    assert outcome.kind is OutcomeKind.BALANCED_SPARSE_CUT
    assert outcome.cut.boundary_weight == 0
    assert outcome.cut.side == frozenset({0, 1})


def test_cut_game_on_clique_trims():
    g = Graph.build(5, [(i, j, 1) for i in range(5) for j in range(i + 1, 5)], range(5))
    outcome = cut_game(g, delta=1)
    assert outcome.kind is OutcomeKind.TERMINAL_STRONG_CLUSTER
    assert outcome.cluster == g.vertices


def test_cut_game_needs_two_terminals():
    with pytest.raises(InvalidArgumentError):
        cut_game(dumbbell().with_terminals([0]), delta=1)


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=8, max_w=10), st.sampled_from([1, 4, 64, 1024]))
def test_cut_game_outcomes_are_balanced(g, delta):
    """Games end within their round limit with a balanced cut or a big trimmed cluster"""
    outcome = cut_game(g, delta, config=SolverConfig())
    total = len(g.terminals)
    if outcome.kind is OutcomeKind.BALANCED_SPARSE_CUT:
        inside = len(outcome.cut.side & g.terminals)
        assert 6 * min(inside, total - inside) >= total
    else:
        assert 3 * len(outcome.cluster & g.terminals) >= total
    assert outcome.rounds <= outcome.params_achieved.l_max
