import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings

from steinercut.core.certify import (brute_force_min_steiner_cut, certify_strong_bruteforce,
                                     certify_terminal_strong_bruteforce, certify_volume_strong_bruteforce,
                                     find_violating_volume_cut, minimum_steiner_cuts_bruteforce)
from steinercut.core.errors import CapacityError, InvalidArgumentError
from steinercut.core.graph import Graph, cut_weight
from steinercut.core.params import StrengthParams
from strategies import dumbbell, graphs, triangle


def test_brute_force_small_graphs():
    assert brute_force_min_steiner_cut(triangle()) == (2, frozenset({0}))
    value, side = brute_force_min_steiner_cut(dumbbell())
    assert value == 1
    assert side == frozenset({0, 1, 2})


def test_brute_force_disconnected():
    g = Graph.build(4, [(0, 1, 3), (2, 3, 3)], [0, 3])
    value, side = brute_force_min_steiner_cut(g)
    assert value == 0
    assert len(side & {0, 3}) == 1


def test_brute_force_needs_two_terminals():
    with pytest.raises(InvalidArgumentError):
        brute_force_min_steiner_cut(triangle(), terminals=[0])


def test_capacity_cap():
    g = Graph.build(6, [(i, i + 1, 1) for i in range(5)], [0, 5])
    with pytest.raises(CapacityError):
        brute_force_min_steiner_cut(g, cap=5)


def test_all_minimum_cuts_of_a_cycle():
    g = Graph.build(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)], range(4))
    sides = minimum_steiner_cuts_bruteforce(g)
    assert len(sides) == 6
    assert all(cut_weight(g, s) == 2 for s in sides)
    assert all(3 not in s for s in sides)


@settings(max_examples=40, deadline=None)
@given(graphs(connected=True, max_n=7))
def test_brute_force_matches_stoer_wagner_when_all_vertices_are_terminals(g):
    """With T = V the minimum Steiner cut is the global minimum cut"""
    g = g.with_terminals(g.vertices)
    value, side = brute_force_min_steiner_cut(g)
    expected, _ = nx.stoer_wagner(g.to_networkx(), weight="weight")
    assert value == expected
    assert cut_weight(g, side) == value


def test_terminal_strength_of_dumbbell():
    """The bridge splits the two terminals; it is tolerated only while gamma*delta <= 1"""
    g = dumbbell()
    holds = certify_terminal_strong_bruteforce(g, g.vertices, StrengthParams.plain(1, 1, Fraction(1, 2)))
    assert holds.holds and holds.witness is None

    broken = certify_terminal_strong_bruteforce(g, g.vertices, StrengthParams.plain(1, 1, Fraction(3, 2)))
    assert not broken.holds
    assert broken.witness.side == frozenset({0, 1, 2})
    assert broken.witness.boundary_weight == 1


def test_terminal_strength_single_terminal_cluster():
    g = dumbbell()
    assert certify_terminal_strong_bruteforce(g, {0, 1, 2}, StrengthParams.plain(0, 10, 10)).holds


def test_strength_of_dumbbell_clusters():
    g = dumbbell()
    params = StrengthParams.plain(1, 1, Fraction(1, 2))
    # the bridge leaves three vertices of V on each side, more than s=1
    assert not certify_strong_bruteforce(g, g.vertices, params).holds
    # every cut of weight <= 1 is the bridge, which does not split a triangle
    assert certify_strong_bruteforce(g, {0, 1, 2}, params).holds


def test_volume_strength_of_dumbbell():
    g = dumbbell()
    witness = find_violating_volume_cut(g, g.vertices, 2, 3)
    assert witness is not None
    assert witness.boundary_weight == 1
    assert witness.side == frozenset({0, 1, 2})
    assert certify_volume_strong_bruteforce(g, {0, 1, 2}, 2, 3).holds
    assert not certify_volume_strong_bruteforce(g, {0, 1, 2}, 2, 2).holds
