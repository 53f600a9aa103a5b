"""Minimum isolating cuts and the bit-class family used to split small terminal groups."""
from itertools import combinations, product
from math import comb
from typing import Dict, List, Optional, Sequence
import logging

from ..core.errors import InvalidArgumentError, InvariantViolation
from ..core.graph import Cut, Graph, VertexSet
from ..core.maxflow import max_flow
from ..utils.dyadic import ceil_log2

logger = logging.getLogger(__name__)


def _separating_side(g: Graph, sources: Sequence[int], sinks: Sequence[int]) -> VertexSet:
    """Source-minimal side of a minimum cut between two vertex groups."""
    n = g.vertex_count
    hub, drain = n, n + 1
    infinite = g.total_weight + 1
    edges = list(g.edges)
    edges += [(hub, v, infinite) for v in sources]
    edges += [(v, drain, infinite) for v in sinks]
    augmented = Graph(n + 2, tuple(edges), g.terminal_flags + (False, False))
    flow = max_flow(augmented, hub, drain)
    return flow.source_side_cut.side - {hub}


def isolating_regions(g: Graph, r_set: Sequence[int]) -> Dict[int, VertexSet]:
    """Disjoint regions, one per vertex of ``r_set``, each containing a minimum isolating cut."""
    members = sorted(set(r_set))
    regions = {r: g.vertices for r in members}
    for bit in range(ceil_log2(len(members))):
        ones = [r for i, r in enumerate(members) if i >> bit & 1]
        zeros = [r for i, r in enumerate(members) if not i >> bit & 1]
        side = _separating_side(g, ones, zeros)
        for r in ones:
            regions[r] = regions[r] & side
        for r in zeros:
            regions[r] = regions[r] - side
    return regions


def minimum_isolating_cuts(g: Graph, r_set: Sequence[int]) -> Dict[int, Cut]:
    """For every r, a minimum cut whose side holds r and no other vertex of ``r_set``.

    Uses ceil(log2|R|) group flows, then one flow on the disjoint union of
    the regions, each with its outside contracted into a single sink vertex.
    """
    members = sorted(set(r_set))
    if len(members) < 2:
        raise InvalidArgumentError("isolating cuts need at least two vertices")
    if any(not 0 <= r < g.vertex_count for r in members):
        raise InvalidArgumentError("isolating set contains a vertex outside the graph")
    regions = isolating_regions(g, members)

    local: Dict[int, int] = {}
    owner: Dict[int, int] = {}
    outside: Dict[int, int] = {}
    back: List[int] = []
    for r in members:
        for v in sorted(regions[r]):
            local[v] = len(back)
            owner[v] = r
            back.append(v)
        outside[r] = len(back)
        back.append(-1)

    hub, drain = len(back), len(back) + 1
    infinite = g.total_weight + 1
    edges = []
    for u, v, w in g.proper_edges:
        if u in local and v in local and owner[u] == owner[v]:
            edges.append((local[u], local[v], w))
            continue
        if u in local:
            edges.append((local[u], outside[owner[u]], w))
        if v in local:
            edges.append((local[v], outside[owner[v]], w))
    edges += [(hub, local[r], infinite) for r in members]
    edges += [(outside[r], drain, infinite) for r in members]
    union = Graph(len(back) + 2, tuple(edges), (False,) * (len(back) + 2))

    flow = max_flow(union, hub, drain)
    sides: Dict[int, set] = {r: set() for r in members}
    for x in flow.source_side_cut.side:
        if x < len(back) and back[x] >= 0:
            sides[owner[back[x]]].add(back[x])

    cuts: Dict[int, Cut] = {}
    total = 0
    for r in members:
        cut = Cut.of(g, sides[r])
        if len(cut.side & set(members)) != 1:
            raise InvariantViolation(f"isolating cut of {r} holds other isolated vertices")
        cuts[r] = cut
        total += cut.boundary_weight
    if total != flow.value:
        raise InvariantViolation(f"isolating cuts sum to {total}, union flow is {flow.value}")
    logger.debug(f"Isolating cuts for {len(members)} vertices: "
                 f"min weight {min(c.boundary_weight for c in cuts.values())}")
    return cuts


def _bit_class(size: int, bits: Sequence[int], values: Sequence[int]) -> List[int]:
    return [i for i in range(size) if all((i >> b & 1) == v for b, v in zip(bits, values))]


def family_size(size: int, k: int) -> int:
    """Classes splitting_family(size, k) enumerates before dropping small and repeated ones."""
    if k <= 1:
        return 0
    bits = max(1, ceil_log2(size))
    if k == 2:
        return bits
    depth = min(k.bit_length() - 1, bits)
    return sum(comb(bits, d) * 2 ** d for d in range(1, depth + 1))


def splitting_family(size: int, k: int) -> Optional[List[List[int]]]:
    """Index classes that fix up to floor(log2 k) bits of the index.

    For every index set X with 2 <= |X| <= k, repeatedly fixing a bit that
    splits X to the value fewer members of X carry leaves a single member
    after at most floor(log2 k) bits, so some class meets X in exactly one
    index. For k = 2 the zero class of each bit already does this. Classes
    with fewer than two indices are dropped; the guarantee survives the
    drop for k = 2 and for power-of-two sizes with |X| <= size/2. Returns
    None when the family would need more than k^2 * ceil(log2 size) classes.
    """
    if size < 2 or k < 1:
        raise InvalidArgumentError("splitting family needs size >= 2 and k >= 1")
    if k == 1:
        return []
    bits = max(1, ceil_log2(size))
    if family_size(size, k) > k * k * bits:
        return None
    if k == 2:
        candidates = [_bit_class(size, (b,), (0,)) for b in range(bits)]
    else:
        depth = min(k.bit_length() - 1, bits)
        candidates = [_bit_class(size, chosen, values)
                      for d in range(1, depth + 1)
                      for chosen in combinations(range(bits), d)
                      for values in product((0, 1), repeat=d)]
    family, seen = [], set()
    for c in candidates:
        key = tuple(c)
        if len(c) >= 2 and key not in seen:
            seen.add(key)
            family.append(c)
    logger.debug(f"Splitting family for size {size}, k={k}: {len(family)} classes")
    return family


def family_flow_cost(family: List[List[int]]) -> int:
    """Flows spent running isolating cuts on every class of the family."""
    return sum(ceil_log2(len(c)) + 1 for c in family if len(c) >= 2)
