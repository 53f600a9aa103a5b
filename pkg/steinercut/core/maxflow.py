"""Exact s-t max-flow on undirected integer graphs, with a process-wide call counter.

Flows come from networkx's Dinitz implementation on a graph built in sorted
order, so identical inputs give identical results. The min cut is always the
set reachable from the source in the residual graph.
"""
from collections import deque
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterator, List, Optional, Set, Tuple
import logging
import threading

import networkx as nx
from networkx.algorithms.flow import dinitz

from .errors import InvalidArgumentError, InvariantViolation
from .graph import Cut, Graph, VertexSet, cut_weight

logger = logging.getLogger(__name__)

Arc = Tuple[int, int]


@dataclass(frozen=True)
class FlowCallSnapshot:
    individual: int
    batched: int

    def __sub__(self, other: "FlowCallSnapshot") -> "FlowCallSnapshot":
        return FlowCallSnapshot(self.individual - other.individual, self.batched - other.batched)


class FlowCounter:
    """Counts max-flow calls individually and grouped by batch tag.

    Calls sharing a batch tag stand for one call on the disjoint union of
    their graphs, so the batched count grows once per distinct tag. Tuple
    tags are owned by their first component; ``forget`` drops an owner's
    tags once its run is over.
    """
    def __init__(self):
        self._lock = threading.Lock()
        self._individual = 0
        self._batched = 0
        self._seen_tags: Set[Hashable] = set()

    def record(self, tag: Optional[Hashable]) -> int:
        with self._lock:
            self._individual += 1
            if tag is None:
                self._batched += 1
            elif tag not in self._seen_tags:
                self._seen_tags.add(tag)
                self._batched += 1
            return self._individual

    def snapshot(self) -> FlowCallSnapshot:
        with self._lock:
            return FlowCallSnapshot(self._individual, self._batched)

    def forget(self, owner: Hashable) -> int:
        with self._lock:
            stale = {t for t in self._seen_tags if t == owner or (isinstance(t, tuple) and t and t[0] == owner)}
            self._seen_tags -= stale
            return len(stale)

    @property
    def tag_count(self) -> int:
        with self._lock:
            return len(self._seen_tags)


FLOW_COUNTER = FlowCounter()
_batch_tag: ContextVar[Optional[Hashable]] = ContextVar("flow_batch_tag", default=None)


@contextmanager
def flow_batch(tag: Hashable) -> Iterator[None]:
    """Attribute every max_flow call in this context to one batched call."""
    token = _batch_tag.set(tag)
    try:
        yield
    finally:
        _batch_tag.reset(token)


@dataclass(frozen=True)
class FlowResult:
    value: int
    edge_flows: Dict[Arc, int] = field(hash=False)  # net flow from u to v for u < v
    source: int
    sink: int
    source_side_cut: Cut
    call_id: int


@dataclass(frozen=True)
class FlowPath:
    endpoints: Tuple[int, int]
    capacity: int
    edge_support: Tuple[Arc, ...]

    @property
    def vertices(self) -> Tuple[int, ...]:
        if not self.edge_support:
            return (self.endpoints[0],)
        return (self.edge_support[0][0],) + tuple(v for _, v in self.edge_support)


def _residual_reachable(residual: nx.DiGraph, source: int) -> VertexSet:
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v, attr in residual[u].items():
            if v not in seen and attr["capacity"] - attr["flow"] > 0:
                seen.add(v)
                queue.append(v)
    return frozenset(seen)


def max_flow(g: Graph, source: int, sink: int) -> FlowResult:
    """Maximum source-sink flow and the source-minimal minimum cut."""
    if source == sink:
        raise InvalidArgumentError("source and sink must differ")
    if not (0 <= source < g.vertex_count and 0 <= sink < g.vertex_count):
        raise InvalidArgumentError("source or sink out of range")

    network = g.to_networkx()
    residual = dinitz(network, source, sink, capacity="capacity")
    value = residual.graph["flow_value"]

    edge_flows: Dict[Arc, int] = {}
    for u, v in sorted(g.pair_capacities):
        flow = residual[u][v]["flow"]
        if flow:
            edge_flows[(u, v)] = flow

    side = _residual_reachable(residual, source)
    boundary = cut_weight(g, side)
    if boundary != value:
        raise InvariantViolation(f"max-flow duality broken: flow {value}, cut {boundary}")

    call_id = FLOW_COUNTER.record(_batch_tag.get())
    logger.debug(f"max_flow #{call_id}: n={g.vertex_count}, s={source}, t={sink}, value={value}")
    return FlowResult(value=value, edge_flows=edge_flows, source=source, sink=sink,
                      source_side_cut=Cut(side, boundary), call_id=call_id)


def _positive_arcs(fr: FlowResult) -> Dict[int, Dict[int, int]]:
    arcs: Dict[int, Dict[int, int]] = {}
    for (u, v), flow in sorted(fr.edge_flows.items()):
        if flow > 0:
            arcs.setdefault(u, {})[v] = flow
        elif flow < 0:
            arcs.setdefault(v, {})[u] = -flow
    return arcs


def _subtract(arcs: Dict[int, Dict[int, int]], path: List[Arc], amount: int) -> None:
    for u, v in path:
        arcs[u][v] -= amount
        if arcs[u][v] == 0:
            del arcs[u][v]


def _cancel_cycles(arcs: Dict[int, Dict[int, int]]) -> int:
    cancelled = 0
    while True:
        support = nx.DiGraph()
        for u in sorted(arcs):
            for v in sorted(arcs[u]):
                support.add_edge(u, v)
        try:
            cycle = nx.find_cycle(support, orientation="original")
        except nx.NetworkXNoCycle:
            return cancelled
        path = [(u, v) for u, v, _ in cycle]
        _subtract(arcs, path, min(arcs[u][v] for u, v in path))
        cancelled += 1


def decompose_paths(fr: FlowResult, g: Graph) -> List[FlowPath]:
    """Split a flow into source-sink paths after cancelling flow cycles."""
    for (u, v), flow in fr.edge_flows.items():
        if abs(flow) > g.pair_capacities.get((u, v), 0):
            raise InvalidArgumentError(f"flow {flow} on ({u}, {v}) exceeds its capacity")

    arcs = _positive_arcs(fr)
    cancelled = _cancel_cycles(arcs)
    if cancelled:
        logger.debug(f"Cancelled {cancelled} flow cycles before peeling")

    paths: List[FlowPath] = []
    while arcs.get(fr.source):
        walk: List[Arc] = []
        visited = {fr.source}
        u = fr.source
        while u != fr.sink:
            out = arcs.get(u)
            if not out:
                raise InvariantViolation(f"flow is not conserved at vertex {u}")
            v = min(out)
            if v in visited:
                raise InvariantViolation("flow support contains a cycle after cancellation")
            visited.add(v)
            walk.append((u, v))
            u = v
        amount = min(arcs[a][b] for a, b in walk)
        _subtract(arcs, walk, amount)
        paths.append(FlowPath((fr.source, fr.sink), amount, tuple(walk)))

    if any(out for out in arcs.values()):
        raise InvariantViolation("flow support contains a cycle after peeling")
    total = sum(p.capacity for p in paths)
    if total != fr.value:
        raise InvariantViolation(f"path capacities sum to {total}, flow value is {fr.value}")
    return paths
