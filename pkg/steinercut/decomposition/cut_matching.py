"""Cut-matching game between a graph and the cut-graph H on its terminals.

Each round partitions H into strong clusters. A cluster holding two thirds of
the terminals ends the game through trimming; otherwise the clusters are
split into two balanced groups and a max-flow between them either embeds a
matching into H or exposes a balanced terminal-sparse cut.
"""
from contextlib import nullcontext
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union
import logging

from ..config.config import SolverConfig
from ..core.errors import InvalidArgumentError, InvariantViolation, RoundLimitExceeded
from ..core.graph import Cut, Graph, VertexSet, terminal_sparsity
from ..core.maxflow import FlowPath, FlowResult, decompose_paths, flow_batch, max_flow
from ..core.params import StrengthParams, derive_params
from ..utils.dyadic import common_denominator
from .strong_partition import strong_partition

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


class OutcomeKind(Enum):
    TERMINAL_STRONG_CLUSTER = 'terminal_strong_cluster'
    BALANCED_SPARSE_CUT = 'balanced_sparse_cut'


@dataclass(frozen=True)
class MatchingEdge:
    first: int
    second: int
    weight: Fraction
    round: int


@dataclass
class CutGraph:
    """Graph H on the terminals; matching edges stay distinct per round."""
    terminals: Tuple[int, ...]
    edges: List[MatchingEdge] = field(default_factory=list)
    round: int = 0

    def add_edge(self, first: int, second: int, weight: Fraction, round_number: int) -> None:
        self.edges.append(MatchingEdge(first, second, Fraction(weight), round_number))
        self.round = max(self.round, round_number)

    def round_degrees(self, round_number: int) -> Dict[int, Fraction]:
        degrees: Dict[int, Fraction] = {t: Fraction(0) for t in self.terminals}
        for e in self.edges:
            if e.round == round_number:
                degrees[e.first] += e.weight
                degrees[e.second] += e.weight
        return degrees

    @property
    def total_weight(self) -> Fraction:
        return sum((e.weight for e in self.edges), Fraction(0))

    def to_graph(self) -> Tuple[Graph, int]:
        """Integer graph on 0..|T|-1 (terminal order) with weights scaled by the common denominator."""
        index = {t: i for i, t in enumerate(self.terminals)}
        scale = common_denominator(*(e.weight for e in self.edges))
        edges = tuple((index[e.first], index[e.second], int(e.weight * scale)) for e in self.edges)
        count = len(self.terminals)
        return Graph(count, edges, (True,) * count), scale


@dataclass(frozen=True)
class CutOrFlowResult:
    flow: FlowResult
    paths: Tuple[FlowPath, ...]  # source and sink stripped, capacities in scaled units
    scale: int
    value: Fraction  # flow value in the units of g
    side: VertexSet
    cut: Optional[Cut]  # None when the source side is empty or all of V


@dataclass(frozen=True)
class CutGameOutcome:
    kind: OutcomeKind
    params_achieved: StrengthParams
    cluster: Optional[VertexSet] = None
    residual_cut: Optional[Cut] = None
    cut: Optional[Cut] = None
    rounds: int = 0
    flow_values: Tuple[Fraction, ...] = ()


def cut_or_flow(g: Graph, s_terminals, kappa: Rational, delta: Rational,
                config: Optional[SolverConfig] = None) -> CutOrFlowResult:
    """Route flow from ``s_terminals`` to the other terminals through capacity-delta*kappa taps."""
    config = config or SolverConfig()
    terminals = g.terminals
    s_terminals = frozenset(s_terminals)
    if not s_terminals:
        raise InvalidArgumentError("source terminal set is empty")
    if not s_terminals <= terminals:
        raise InvalidArgumentError("source set contains non-terminals")
    if s_terminals == terminals:
        raise InvalidArgumentError("sink terminal set is empty")

    tap = Fraction(delta) * Fraction(kappa)
    if tap <= 0:
        raise InvalidArgumentError("delta*kappa must be positive")
    scale = common_denominator(tap)
    capacity = int(tap * scale)

    n = g.vertex_count
    source, sink = n, n + 1
    edges = [(u, v, w * scale) for u, v, w in g.edges]
    edges += [(source, t, capacity) for t in sorted(s_terminals)]
    edges += [(t, sink, capacity) for t in sorted(terminals - s_terminals)]
    augmented = Graph(n + 2, tuple(edges), g.terminal_flags + (False, False))

    flow = max_flow(augmented, source, sink)
    paths = []
    for path in decompose_paths(flow, augmented):
        inner = path.edge_support[1:-1]
        first, last = path.edge_support[0][1], path.edge_support[-1][0]
        paths.append(FlowPath((first, last), path.capacity, inner))

    side = flow.source_side_cut.side - {source}
    cut = None
    if side and len(side) < n:
        cut = Cut.of(g, side)
        if config.check_invariants:
            ratio = terminal_sparsity(g, side)
            if ratio is not None and ratio > tap:
                raise InvariantViolation(f"cut of terminal-sparsity {ratio} exceeds delta*kappa={tap}")
    value = Fraction(flow.value, scale)
    logger.debug(f"cut_or_flow: |S|={len(s_terminals)}, value={value}, side={len(side)} vertices")
    return CutOrFlowResult(flow=flow, paths=tuple(paths), scale=scale, value=value, side=side, cut=cut)


def combine_bipartition(clusters: Sequence, total: int) -> Tuple[VertexSet, VertexSet]:
    """Group whole clusters into two parts each of size within [total/3, 2*total/3]."""
    clusters = [frozenset(c) for c in clusters]
    for c in clusters:
        if 3 * len(c) > 2 * total:
            raise InvalidArgumentError(f"cluster of size {len(c)} exceeds 2/3 of {total}; trim instead")
    everything = frozenset().union(*clusters) if clusters else frozenset()

    for c in clusters:
        if 3 * len(c) >= total:
            return c, everything - c

    prefix: VertexSet = frozenset()
    for c in clusters:
        prefix |= c
        if 3 * len(prefix) >= total:
            return prefix, everything - prefix
    raise InvalidArgumentError("cluster sizes do not add up to the total")


def trim(g: Graph, big_cluster, p: StrengthParams,
         config: Optional[SolverConfig] = None) -> Tuple[VertexSet, Optional[Cut]]:
    """Peel off what separates ``big_cluster`` from the remaining terminals at rate delta*kappa."""
    terminals = g.terminals
    big_cluster = frozenset(big_cluster)
    if not big_cluster <= terminals:
        raise InvalidArgumentError("big cluster must consist of terminals")
    if 3 * len(big_cluster) < 2 * len(terminals):
        raise InvalidArgumentError(
            f"big cluster holds {len(big_cluster)} of {len(terminals)} terminals, below two thirds")
    if big_cluster == terminals:
        return g.vertices, None

    result = cut_or_flow(g, big_cluster, p.kappa, p.delta, config)
    side = result.side
    if 3 * len(side & terminals) < len(terminals):
        raise InvariantViolation(f"trimmed side keeps {len(side & terminals)} of {len(terminals)} terminals")
    if len(side) == g.vertex_count:
        return side, None
    return side, result.cut


def _round_tag(batch_key: Optional[Hashable], round_number: int):
    if batch_key is None:
        return nullcontext()
    key = batch_key if isinstance(batch_key, tuple) else (batch_key,)
    return flow_batch(key + (round_number,))


def cut_game(g: Graph, delta: Rational, psi: Optional[Rational] = None,
             config: Optional[SolverConfig] = None,
             batch_key: Optional[Hashable] = None) -> CutGameOutcome:
    """Play the cut-matching game on ``g`` and its terminals."""
    config = config or SolverConfig()
    if psi is not None:
        config = config.with_overrides(psi=psi)
    terminals = tuple(sorted(g.terminals))
    total = len(terminals)
    if total < 2:
        raise InvalidArgumentError("the cut game needs at least two terminals")
    p = derive_params(g.vertex_count, total, delta, config)
    h = CutGraph(terminals)
    flow_values: List[Fraction] = []

    for round_number in range(1, p.l_max + 1):
        h_graph, scale = h.to_graph()
        partition = strong_partition(h_graph, p.delta * scale, p.alpha, p.s, p.gamma, config)
        big = next((c for c in partition.clusters if 3 * len(c) >= 2 * total), None)

        if big is not None:
            with _round_tag(batch_key, round_number):
                cluster, residual = trim(g, (terminals[i] for i in big), p, config)
            logger.debug(f"Cut game trimmed in round {round_number}: "
                         f"{len(cluster)} of {g.vertex_count} vertices kept")
            return CutGameOutcome(kind=OutcomeKind.TERMINAL_STRONG_CLUSTER,
                                  params_achieved=p.achieved(), cluster=cluster,
                                  residual_cut=residual, rounds=round_number,
                                  flow_values=tuple(flow_values))

        first, second = combine_bipartition(partition.clusters, total)
        group = first if len(first) >= len(second) else second
        s_terminals = frozenset(terminals[i] for i in group)
        with _round_tag(batch_key, round_number):
            result = cut_or_flow(g, s_terminals, p.psi, p.delta, config)
        flow_values.append(result.value)

        if 6 * result.value >= total * p.delta * p.psi:
            for path in result.paths:
                a, b = path.endpoints
                if a not in s_terminals or b in s_terminals:
                    raise InvariantViolation(f"flow path {a}->{b} does not cross the bipartition")
                h.add_edge(a, b, Fraction(path.capacity, result.scale) / p.psi, round_number)
            if config.check_invariants:
                degrees = h.round_degrees(round_number)
                worst = max(degrees.values())
                if worst > p.delta:
                    raise InvariantViolation(f"matching degree {worst} exceeds delta={p.delta}")
                added = sum(degrees.values()) / 2
                if 6 * added < total * p.delta:
                    raise InvariantViolation(f"matching weight {added} below |T|*delta/6")
            logger.debug(f"Round {round_number}: flow {result.value}, {len(result.paths)} matching edges")
            continue

        cut = result.cut
        if cut is None:
            raise InvariantViolation("low flow without a proper cut")
        inside = len(cut.side & g.terminals)
        if 6 * min(inside, total - inside) < total:
            raise InvariantViolation(f"sparse cut is unbalanced: {inside} of {total} terminals inside")
        logger.debug(f"Round {round_number}: balanced sparse cut of weight {cut.boundary_weight}")
        return CutGameOutcome(kind=OutcomeKind.BALANCED_SPARSE_CUT, params_achieved=p.achieved(),
                              cut=cut, rounds=round_number, flow_values=tuple(flow_values))

    raise RoundLimitExceeded(f"cut game ran past L_max={p.l_max} rounds on {total} terminals")
