"""Partition a graph into (s, alpha*delta, gamma)-strong clusters.

Pipeline: attach a pendant of weight alpha*delta to every vertex, split the
augmented graph into volume-strong clusters, drop the pendants, then refine
every cluster by contracting heavy pairs and peeling light vertices.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union
import heapq
import logging

import networkx as nx
from networkx.utils import UnionFind

from ..config.config import SolverConfig
from ..core.certify import find_violating_volume_cut
from ..core.errors import InvalidArgumentError, InvariantViolation
from ..core.graph import (Graph, VertexSet, crossing_weight, cut_weight, induced_subgraph,
                          intercluster_weight, volume)
from ..utils.dyadic import ceil_fraction, ceil_log2, common_denominator, le_log2

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class ClusterCertificate:
    """How a cluster was certified: "trivial", "volume", "exhaustive", "unverified" or "refined"."""
    cluster: VertexSet
    method: str


@dataclass(frozen=True)
class Partition:
    clusters: Tuple[VertexSet, ...]
    intercluster_weight: int
    certificates: Tuple[ClusterCertificate, ...] = ()
    update_count: int = 0
    verified: bool = True


def minimum_strength(n: int, alpha: Rational, config: Optional[SolverConfig] = None) -> int:
    """Smallest s strong_partition accepts: ceil(c_s * alpha^2 * ceil(log2 n)^2)."""
    config = config or SolverConfig()
    log_n = max(ceil_log2(max(n, 2)), 1)
    return max(1, ceil_fraction(Fraction(config.c_s) * Fraction(alpha) ** 2 * log_n * log_n))


def update_bound_holds(update_count: int, edge_count: int) -> bool:
    """update_count <= 2m*log2(2m) + m, decided exactly."""
    if edge_count == 0:
        return update_count == 0
    excess = update_count - edge_count
    return le_log2(Fraction(excess, 2 * edge_count), 2 * edge_count)


def augment_pendants(g: Graph, weight: int) -> Graph:
    """Attach pendant vertex n+v to every vertex v with an edge of the given weight."""
    if weight <= 0:
        raise InvalidArgumentError("pendant weight must be positive")
    n = g.vertex_count
    edges = g.edges + tuple((v, n + v, int(weight)) for v in range(n))
    return Graph(2 * n, edges, g.terminal_flags + (False,) * n)


def _scaled(g: Graph, factor: int) -> Graph:
    if factor == 1:
        return g
    return Graph(g.vertex_count, tuple((u, v, w * factor) for u, v, w in g.edges),
                 g.terminal_flags, g.origin)


def _split_candidate(g: Graph, cluster: VertexSet) -> Optional[VertexSet]:
    """Side of a global minimum cut of G[cluster], in g's ids."""
    members = sorted(cluster)
    local = induced_subgraph(g, members).to_networkx()
    if not nx.is_connected(local):
        component = min(nx.connected_components(local), key=min)
        return frozenset(members[i] for i in component)
    _, (first, second) = nx.stoer_wagner(local, weight="weight")
    side = first if 0 not in first else second
    return frozenset(members[i] for i in side)


def base_strong_partition(g: Graph, delta0: Rational, s0: Rational,
                          config: Optional[SolverConfig] = None) -> Partition:
    """Split ``g`` until no cut of weight <= delta0 leaves volume > s0 of a cluster on both sides."""
    config = config or SolverConfig()
    if g.vertex_count == 0:
        return Partition((), 0)
    if delta0 > min(g.degrees):
        raise InvalidArgumentError(f"delta0={delta0} exceeds the minimum weighted degree {min(g.degrees)}")

    worklist: List[VertexSet] = [g.vertices]
    certificates: List[ClusterCertificate] = []
    while worklist:
        cluster = worklist.pop(0)
        if len(cluster) == 1:
            certificates.append(ClusterCertificate(cluster, "trivial"))
            continue
        if volume(g, cluster) <= 2 * s0:
            certificates.append(ClusterCertificate(cluster, "volume"))
            continue

        if g.vertex_count <= config.brute_cap:
            witness = find_violating_volume_cut(g, cluster, delta0, s0, config.brute_cap)
            if witness is None:
                certificates.append(ClusterCertificate(cluster, "exhaustive"))
                continue
            side = witness.side
        else:
            side = _split_candidate(g, cluster)
            inside, outside = volume(g, side), volume(g, cluster - side)
            if side == g.vertices or cut_weight(g, side) > delta0 or min(inside, outside) <= s0:
                logger.warning(f"Cluster of {len(cluster)} vertices certified without exhaustive search")
                certificates.append(ClusterCertificate(cluster, "unverified"))
                continue

        worklist.extend([cluster & side, cluster - side])

    certificates.sort(key=lambda c: min(c.cluster))
    clusters = tuple(c.cluster for c in certificates)
    return Partition(clusters=clusters,
                     intercluster_weight=intercluster_weight(g, clusters),
                     certificates=tuple(certificates),
                     verified=all(c.method != "unverified" for c in certificates))


def _pair(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


class ContractionState:
    """Contracted multigraph on a cluster; parallel edges keep separate identities."""

    def __init__(self, g: Graph, cluster: Iterable[int]):
        members = sorted(set(cluster))
        inside = set(members)
        self.super_vertices = UnionFind(members)
        self.alive: Set[int] = set(members)
        self.removed: List[int] = []
        self.update_count = 0
        self.edge_ends: List[List[int]] = []
        self.edge_weight: List[int] = []
        self.incident: Dict[int, Set[int]] = {v: set() for v in members}
        self.pair_edges: Dict[Tuple[int, int], Set[int]] = {}
        self.pair_weights: Dict[Tuple[int, int], int] = {}
        self.degrees: Dict[int, int] = {v: 0 for v in members}
        for u, v, w in g.proper_edges:
            if u in inside and v in inside:
                e = len(self.edge_ends)
                self.edge_ends.append([u, v])
                self.edge_weight.append(w)
                self.incident[u].add(e)
                self.incident[v].add(e)
                key = _pair(u, v)
                self.pair_edges.setdefault(key, set()).add(e)
                self.pair_weights[key] = self.pair_weights.get(key, 0) + w
                self.degrees[u] += w
                self.degrees[v] += w

    @property
    def edge_count(self) -> int:
        return len(self.edge_ends)

    def _other(self, e: int, x: int) -> int:
        a, b = self.edge_ends[e]
        return b if a == x else a

    def contract(self, a: int, b: int) -> Tuple[int, Set[int]]:
        """Merge a and b; the endpoint with fewer incident edges is relabelled."""
        if len(self.incident[a]) > len(self.incident[b]) or (
                len(self.incident[a]) == len(self.incident[b]) and a < b):
            survivor, merged = a, b
        else:
            survivor, merged = b, a
        key = _pair(a, b)
        for e in sorted(self.pair_edges.pop(key)):
            self.incident[a].discard(e)
            self.incident[b].discard(e)
            self.update_count += 1
        joint = self.pair_weights.pop(key)
        self.degrees[survivor] += self.degrees.pop(merged) - 2 * joint

        touched: Set[int] = set()
        for e in sorted(self.incident.pop(merged)):
            other = self._other(e, merged)
            ends = self.edge_ends[e]
            ends[ends.index(merged)] = survivor
            self.incident[survivor].add(e)
            old_key, new_key = _pair(merged, other), _pair(survivor, other)
            self.pair_edges[old_key].discard(e)
            if not self.pair_edges[old_key]:
                del self.pair_edges[old_key]
            self.pair_weights[old_key] -= self.edge_weight[e]
            if not self.pair_weights[old_key]:
                del self.pair_weights[old_key]
            self.pair_edges.setdefault(new_key, set()).add(e)
            self.pair_weights[new_key] = self.pair_weights.get(new_key, 0) + self.edge_weight[e]
            self.update_count += 1
            touched.add(other)

        self.super_vertices.union(survivor, merged)
        self.alive.discard(merged)
        return survivor, touched

    def remove(self, x: int) -> Set[int]:
        """Delete super-vertex x and its incident edges."""
        touched: Set[int] = set()
        for e in sorted(self.incident.pop(x)):
            other = self._other(e, x)
            w = self.edge_weight[e]
            self.incident[other].discard(e)
            self.degrees[other] -= w
            key = _pair(x, other)
            self.pair_edges[key].discard(e)
            if not self.pair_edges[key]:
                del self.pair_edges[key]
            self.pair_weights[key] -= w
            if not self.pair_weights[key]:
                del self.pair_weights[key]
            self.update_count += 1
            touched.add(other)
        self.degrees.pop(x)
        self.alive.discard(x)
        self.removed.append(x)
        return touched

    def groups(self) -> List[VertexSet]:
        """Pre-images of removed super-vertices in removal order, then the surviving remainder."""
        members: Dict[int, Set[int]] = {}
        for v in self.super_vertices:
            members.setdefault(self.super_vertices[v], set()).add(v)
        result = [frozenset(members[self.super_vertices[x]]) for x in self.removed]
        if self.alive:
            rest: Set[int] = set()
            for x in self.alive:
                rest |= members[self.super_vertices[x]]
            result.append(frozenset(rest))
        return result


def gamma_refine(g: Graph, cluster: Iterable[int], alpha_delta: Rational, gamma: Rational,
                 delta: Rational, config: Optional[SolverConfig] = None) -> Partition:
    """Contract pairs joined by >= gamma*alpha_delta and peel super-vertices of degree <= delta/100."""
    config = config or SolverConfig()
    cluster = frozenset(cluster)
    state = ContractionState(g, cluster)
    contract_at = Fraction(gamma) * Fraction(alpha_delta)
    remove_at = Fraction(delta) / config.removal_divisor

    pair_heap = [(-w, key) for key, w in state.pair_weights.items()]
    heapq.heapify(pair_heap)
    degree_heap = [(d, v) for v, d in state.degrees.items()]
    heapq.heapify(degree_heap)

    def pair_valid(entry) -> bool:
        weight, key = -entry[0], entry[1]
        return state.pair_weights.get(key) == weight

    def degree_valid(entry) -> bool:
        return entry[1] in state.alive and state.degrees.get(entry[1]) == entry[0]

    while True:
        while pair_heap and not pair_valid(pair_heap[0]):
            heapq.heappop(pair_heap)
        if pair_heap and -pair_heap[0][0] >= contract_at:
            _, (a, b) = heapq.heappop(pair_heap)
            survivor, touched = state.contract(a, b)
            for other in touched:
                key = _pair(survivor, other)
                heapq.heappush(pair_heap, (-state.pair_weights[key], key))
            heapq.heappush(degree_heap, (state.degrees[survivor], survivor))
            continue

        while degree_heap and not degree_valid(degree_heap[0]):
            heapq.heappop(degree_heap)
        if degree_heap and degree_heap[0][0] <= remove_at:
            _, x = heapq.heappop(degree_heap)
            for other in state.remove(x):
                heapq.heappush(degree_heap, (state.degrees[other], other))
            continue
        break

    groups = sorted(state.groups(), key=min)
    added = crossing_weight(g, groups)

    if config.check_invariants:
        if added > Fraction(len(cluster)) * remove_at:
            raise InvariantViolation(f"refinement cut {added} > |C|*delta/{config.removal_divisor}")
        if not update_bound_holds(state.update_count, state.edge_count):
            raise InvariantViolation(
                f"{state.update_count} edge updates exceed 2m*log2(2m)+m for m={state.edge_count}")

    logger.debug(f"gamma_refine: {len(cluster)} vertices -> {len(groups)} clusters, "
                 f"{state.update_count} updates, added weight {added}")
    return Partition(clusters=tuple(groups), intercluster_weight=added,
                     certificates=tuple(ClusterCertificate(c, "refined") for c in groups),
                     update_count=state.update_count)


def strong_partition(h: Graph, delta: Rational, alpha: Rational, s: int,
                     gamma: Optional[Rational] = None,
                     config: Optional[SolverConfig] = None) -> Partition:
    """Decompose ``h`` into (s, alpha*delta, gamma)-strong clusters, gamma = 1/(200*alpha*s) by default."""
    config = config or SolverConfig()
    n = h.vertex_count
    if n == 0:
        return Partition((), 0)
    delta, alpha = Fraction(delta), Fraction(alpha)
    if delta <= 0 or alpha <= 0 or s < 1:
        raise InvalidArgumentError("delta, alpha and s must be positive")
    floor = minimum_strength(n, alpha, config)
    if s < floor:
        raise InvalidArgumentError(f"s={s} is below c_s*alpha^2*ceil(log2 n)^2 = {floor}")
    if h.total_weight > alpha * delta * n:
        raise InvalidArgumentError(
            f"total weight {h.total_weight} exceeds alpha*delta*n = {alpha * delta * n}")
    gamma = Fraction(1, config.gamma_divisor) / (alpha * s) if gamma is None else Fraction(gamma)

    alpha_delta = alpha * delta
    scale = common_denominator(alpha_delta)
    pendant = int(alpha_delta * scale)
    scaled = _scaled(h, scale)

    base = base_strong_partition(augment_pendants(scaled, pendant), pendant, s * pendant, config)
    clusters: List[VertexSet] = []
    update_count = 0
    for augmented in base.clusters:
        original = frozenset(v for v in augmented if v < n)
        if not original:
            continue
        refined = gamma_refine(scaled, original, pendant, gamma, delta * scale, config)
        clusters.extend(refined.clusters)
        update_count += refined.update_count

    clusters.sort(key=min)
    total = intercluster_weight(h, clusters)
    bound = Fraction(n) * delta / config.intercluster_divisor
    if total > bound:
        message = (f"Strong partition intercluster weight {total} exceeds n*delta/"
                   f"{config.intercluster_divisor} = {bound}")
        if config.check_invariants:
            raise InvariantViolation(message)
        logger.warning(message)
    return Partition(clusters=tuple(clusters), intercluster_weight=total,
                     certificates=tuple(ClusterCertificate(c, "refined") for c in clusters),
                     update_count=update_count, verified=base.verified)
