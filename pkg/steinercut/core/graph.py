"""Weighted undirected multigraphs with terminals, cuts and sparsity arithmetic."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple
import logging

import networkx as nx
import numpy as np

from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, int]
VertexSet = FrozenSet[int]


@dataclass(frozen=True)
class Graph:
    """Immutable weighted multigraph on vertices ``0..vertex_count-1``.

    ``origin`` maps local ids back to the ids of the graph this one was cut
    out of; it does not take part in equality.
    """
    vertex_count: int
    edges: Tuple[Edge, ...]
    terminal_flags: Tuple[bool, ...]
    origin: Tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InvalidArgumentError("vertex_count must be non-negative")
        if len(self.terminal_flags) != self.vertex_count:
            raise InvalidArgumentError(
                f"terminal_flags has {len(self.terminal_flags)} entries for {self.vertex_count} vertices")
        for u, v, w in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InvalidArgumentError(f"edge ({u}, {v}) has an endpoint out of range")
            if not isinstance(w, (int, np.integer)) or w <= 0:
                raise InvalidArgumentError(f"edge ({u}, {v}) has non-positive or non-integer weight {w!r}")
        if not self.origin:
            object.__setattr__(self, "origin", tuple(range(self.vertex_count)))
        elif len(self.origin) != self.vertex_count:
            raise InvalidArgumentError("origin map must cover every vertex")

    @classmethod
    def build(cls, vertex_count: int, edges: Iterable[Sequence[int]],
              terminals: Iterable[int] = (), max_weight: Optional[int] = None) -> "Graph":
        terminal_set = set(terminals)
        flags = tuple(v in terminal_set for v in range(vertex_count))
        if len(terminal_set) != sum(flags):
            raise InvalidArgumentError("terminal id out of range")
        graph = cls(vertex_count, tuple((int(u), int(v), int(w)) for u, v, w in edges), flags)
        if max_weight is not None:
            graph.check_weights(max_weight)
        return graph

    def check_weights(self, max_weight: int) -> None:
        """Raise when an edge is heavier than ``max_weight``."""
        heaviest = max((w for _, _, w in self.edges), default=0)
        if heaviest > max_weight:
            raise InvalidArgumentError(f"edge weight {heaviest} exceeds the bound {max_weight}")

    @property
    def vertices(self) -> VertexSet:
        return frozenset(range(self.vertex_count))

    @cached_property
    def terminals(self) -> VertexSet:
        return frozenset(v for v, flag in enumerate(self.terminal_flags) if flag)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        """Weighted degrees; a self-loop adds its weight once."""
        deg = [0] * self.vertex_count
        for u, v, w in self.edges:
            deg[u] += w
            if u != v:
                deg[v] += w
        return tuple(deg)

    @cached_property
    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    @cached_property
    def proper_edges(self) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e[0] != e[1])

    @cached_property
    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Endpoint and weight arrays of the non-loop edges."""
        proper = self.proper_edges
        u = np.fromiter((e[0] for e in proper), dtype=np.int64, count=len(proper))
        v = np.fromiter((e[1] for e in proper), dtype=np.int64, count=len(proper))
        w = np.fromiter((e[2] for e in proper), dtype=np.int64, count=len(proper))
        return u, v, w

    @cached_property
    def pair_capacities(self) -> Dict[Tuple[int, int], int]:
        """Parallel edges summed per unordered pair (u < v), self-loops dropped."""
        caps: Dict[Tuple[int, int], int] = {}
        for u, v, w in self.proper_edges:
            key = (u, v) if u < v else (v, u)
            caps[key] = caps.get(key, 0) + w
        return caps

    def with_terminals(self, terminals: Iterable[int]) -> "Graph":
        terminal_set = frozenset(terminals)
        if any(not 0 <= t < self.vertex_count for t in terminal_set):
            raise InvalidArgumentError("terminal id out of range")
        flags = tuple(v in terminal_set for v in range(self.vertex_count))
        return Graph(self.vertex_count, self.edges, flags, self.origin)

    def to_networkx(self) -> nx.Graph:
        """Simple graph with aggregated ``capacity`` and ``weight`` attributes, built in sorted order."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        for (u, v), cap in sorted(self.pair_capacities.items()):
            graph.add_edge(u, v, capacity=cap, weight=cap)
        return graph

    def lift(self, vertices: Iterable[int]) -> VertexSet:
        """Translate local vertex ids to the ids of the parent graph."""
        return frozenset(self.origin[v] for v in vertices)


@dataclass(frozen=True)
class Cut:
    """One side of a vertex bipartition together with its boundary weight."""
    side: VertexSet
    boundary_weight: int

    @classmethod
    def of(cls, g: Graph, side: Iterable[int]) -> "Cut":
        side = frozenset(side)
        return cls(side, cut_weight(g, side))

    def complement(self, g: Graph) -> VertexSet:
        return g.vertices - self.side

    def is_steiner(self, g: Graph, terminals: Optional[VertexSet] = None) -> bool:
        terminals = g.terminals if terminals is None else terminals
        inside = len(self.side & terminals)
        return 0 < inside < len(terminals)


def _check_proper(g: Graph, side: VertexSet) -> None:
    if not side <= g.vertices:
        raise InvalidArgumentError("side contains vertices outside the graph")
    if not side or len(side) == g.vertex_count:
        raise InvalidArgumentError("side must be a proper nonempty subset of the vertices")


def cut_weight(g: Graph, side: Iterable[int]) -> int:
    """Weight of the edges with exactly one endpoint in ``side``."""
    side = frozenset(side)
    _check_proper(g, side)
    return sum(w for u, v, w in g.proper_edges if (u in side) != (v in side))


def boundary_weight(g: Graph, vertices: Iterable[int]) -> int:
    """Like cut_weight but also accepts the empty set and the whole vertex set."""
    vertices = frozenset(vertices)
    return sum(w for u, v, w in g.proper_edges if (u in vertices) != (v in vertices))


def terminal_sparsity(g: Graph, side: Iterable[int]) -> Optional[Fraction]:
    """w(boundary) / min(|U & T|, |~U & T|), or None when the cut is not a Steiner cut."""
    side = frozenset(side)
    weight = cut_weight(g, side)
    inside = len(side & g.terminals)
    smaller = min(inside, len(g.terminals) - inside)
    if smaller == 0:
        return None
    return Fraction(weight, smaller)


def sparsity(g: Graph, side: Iterable[int]) -> Fraction:
    side = frozenset(side)
    weight = cut_weight(g, side)
    return Fraction(weight, min(len(side), g.vertex_count - len(side)))


def volume(g: Graph, vertices: Iterable[int]) -> int:
    degrees = g.degrees
    return sum(degrees[v] for v in set(vertices))


def intercluster_weight(g: Graph, clusters: Sequence[Iterable[int]]) -> int:
    """Weight of edges whose endpoints land in different clusters.

    Vertices outside every cluster count as their own singleton clusters.
    """
    owner: Dict[int, int] = {}
    for index, cluster in enumerate(clusters):
        for v in cluster:
            owner[v] = index
    total = 0
    for u, v, w in g.proper_edges:
        if owner.get(u, -1 - u) != owner.get(v, -1 - v):
            total += w
    return total


def induced_subgraph(g: Graph, s_set: Iterable[int]) -> Graph:
    """G[S] with boundary edges turned into self-loops at their inside endpoint.

    Vertices are renumbered in increasing order of their ids in ``g``; the
    returned ``origin`` maps them back to ``g``'s own origin ids.
    """
    members = sorted(set(s_set))
    if not members:
        raise InvalidArgumentError("induced_subgraph needs a nonempty vertex set")
    if members[0] < 0 or members[-1] >= g.vertex_count:
        raise InvalidArgumentError("induced_subgraph vertex out of range")
    local = {v: i for i, v in enumerate(members)}
    edges: List[Edge] = []
    for u, v, w in g.edges:
        lu, lv = local.get(u), local.get(v)
        if lu is not None and lv is not None:
            edges.append((lu, lv, w))
        elif lu is not None:
            edges.append((lu, lu, w))
        elif lv is not None:
            edges.append((lv, lv, w))
    flags = tuple(g.terminal_flags[v] for v in members)
    origin = tuple(g.origin[v] for v in members)
    return Graph(len(members), tuple(edges), flags, origin)


def connected_components(g: Graph) -> List[VertexSet]:
    """Components ordered by their smallest vertex."""
    comps = [frozenset(c) for c in nx.connected_components(g.to_networkx())]
    return sorted(comps, key=min)


def crossing_weight(g: Graph, clusters: Sequence[Iterable[int]]) -> int:
    """Weight of edges between two different listed clusters; edges leaving their union are ignored."""
    owner: Dict[int, int] = {}
    for index, cluster in enumerate(clusters):
        for v in cluster:
            owner[v] = index
    return sum(w for u, v, w in g.proper_edges
               if u in owner and v in owner and owner[u] != owner[v])
