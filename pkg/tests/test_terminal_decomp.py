import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from steinercut.config.config import SolverConfig
from steinercut.core.errors import InvalidArgumentError, InvariantViolation
from steinercut.core.graph import Graph, crossing_weight
from steinercut.core.maxflow import FLOW_COUNTER
from steinercut.decomposition.terminal_decomp import (depth_limit, flow_budget, terminal_decomp,
                                                      verify_decomposition, within_intercluster_bound)
from strategies import dumbbell, graphs


def test_single_terminal_is_one_cluster():
    g = dumbbell().with_terminals([0])
    d = terminal_decomp(g, delta=1)
    assert d.clusters == (g.vertices,)
    assert d.intercluster_weight == 0
    assert d.recursion_depth == 0
    assert d.flow_calls_used == 0
    assert verify_decomposition(g, d).ok


def test_dumbbell_splits_at_bridge():
    g = dumbbell()
    d = terminal_decomp(g, delta=1024)
    assert d.clusters == (frozenset({0, 1, 2}), frozenset({3, 4, 5}))
    assert d.intercluster_weight == 1
    assert d.recursion_depth == 1
    assert d.rounds_per_game == (1,)
    assert d.flow_calls_used == 1
    report = verify_decomposition(g, d)
    assert report.ok
    assert report.certified_clusters == 2


def test_dumbbell_at_small_delta_stays_whole():
    g = dumbbell()
    d = terminal_decomp(g, delta=2)
    assert d.clusters == (g.vertices,)
    assert verify_decomposition(g, d).ok


def test_clique_is_one_cluster():
    g = Graph.build(5, [(i, j, 1) for i in range(5) for j in range(i + 1, 5)], range(5))
    d = terminal_decomp(g, delta=1)
    assert d.clusters == (g.vertices,)
    assert d.intercluster_weight == 0
    assert verify_decomposition(g, d).ok


def test_decomposition_of_a_sub_cluster():
    g = dumbbell(terminals=range(6))
    d = terminal_decomp(g, cluster={3, 4, 5}, delta=1)
    assert frozenset().union(*d.clusters) == frozenset({3, 4, 5})
    assert d.terminals == frozenset({3, 4, 5})


def test_invalid_arguments():
    g = dumbbell()
    with pytest.raises(InvalidArgumentError):
        terminal_decomp(g, delta=0)
    with pytest.raises(InvalidArgumentError):
        terminal_decomp(g, cluster={0, 1}, terminals={0, 5})


def test_report_flags_overlap_and_weight():
    g = dumbbell()
    d = terminal_decomp(g, delta=1024)
    overlapping = replace(d, clusters=(frozenset({0, 1, 2, 3}), frozenset({3, 4, 5})))
    report = verify_decomposition(g, overlapping)
    assert not report.ok
    assert not report.checks["overlap"]

    wrong_weight = replace(d, intercluster_weight=7)
    report = verify_decomposition(g, wrong_weight)
    assert not report.checks["weight"]
    assert any(f.startswith("weight") for f in report.failures)

    uncovered = replace(d, clusters=(frozenset({0, 1, 2}),))
    assert not verify_decomposition(g, uncovered).checks["cover"]


def test_bounds():
    assert depth_limit(1) == 1
    assert depth_limit(2) == 5
    assert within_intercluster_bound(64, Fraction(1, 64), 1024, 2, 2)
    assert not within_intercluster_bound(65, Fraction(1, 64), 1024, 2, 2)
    assert within_intercluster_bound(0, Fraction(1, 64), 1, 1, 2)


def test_flow_budget_is_reported():
    assert flow_budget(6, 4) == 36
    assert flow_budget(1, 4) == 4
    g = dumbbell()
    d = terminal_decomp(g, delta=1024)
    assert d.flow_budget == 36
    report = verify_decomposition(g, d)
    assert report.within_flow_budget
    assert not verify_decomposition(g, replace(d, flow_calls_batched=37)).within_flow_budget
    assert verify_decomposition(g, replace(d, flow_calls_batched=37)).ok


def test_charging_bound_is_enforced():
    # at c_ic = 1e-6 the unit bridge exceeds c_ic * psi * delta * |T| * log2|T|
    tight = SolverConfig(c_ic=Fraction(1, 10 ** 6))
    with pytest.raises(InvariantViolation):
        terminal_decomp(dumbbell(), delta=1024, config=tight)
    d = terminal_decomp(dumbbell(), delta=1024, config=replace(tight, check_invariants=False))
    assert d.intercluster_weight == 1


def test_finished_runs_leave_no_batch_tags():
    before = FLOW_COUNTER.tag_count
    terminal_decomp(dumbbell(), delta=1024)
    terminal_decomp(dumbbell(terminals=range(6)), delta=1)
    assert FLOW_COUNTER.tag_count == before


@settings(max_examples=20, deadline=None)
@given(graphs(max_n=7, max_w=8), st.sampled_from([1, 2, 16, 256]))
def test_decompositions_verify(g, delta):
    """Random decompositions cover V disjointly and their clusters are terminal-strong"""
    d = terminal_decomp(g, delta=delta)
    assert frozenset().union(*d.clusters) == g.vertices
    assert sum(len(c) for c in d.clusters) == g.vertex_count
    assert d.intercluster_weight == crossing_weight(g, d.clusters)
    assert d.recursion_depth <= depth_limit(len(g.terminals))
    report = verify_decomposition(g, d)
    assert report.ok, report.failures
    assert report.checks["strength"]
