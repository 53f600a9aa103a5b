"""Exhaustive cut enumeration used to certify strength and to compute exact Steiner cuts.

Every proper bipartition is visited once, as the side that omits the last
vertex. Sides are bitmasks over vertex ids, evaluated in numpy chunks.
"""
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional, Tuple
import logging

import numpy as np

from .errors import CapacityError, InvalidArgumentError
from .graph import Cut, Graph, VertexSet
from .params import StrengthParams
from ..utils.dyadic import ceil_fraction

logger = logging.getLogger(__name__)

DEFAULT_CAP = 22
_CHUNK = 1 << 15


class Certification(NamedTuple):
    holds: bool
    witness: Optional[Cut]


def _check_cap(g: Graph, cap: int) -> None:
    if g.vertex_count > cap:
        raise CapacityError(g.vertex_count, cap)


def _mask_to_side(mask: int) -> VertexSet:
    side = []
    v = 0
    while mask:
        if mask & 1:
            side.append(v)
        mask >>= 1
        v += 1
    return frozenset(side)


def _indicator(n: int, vertices) -> np.ndarray:
    ind = np.zeros(n, dtype=np.int64)
    for v in vertices:
        ind[v] = 1
    return ind


def _iter_chunks(g: Graph) -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield (masks, membership matrix, crossing matrix) for every proper side."""
    n = g.vertex_count
    if n < 2:
        return
    shifts = np.arange(n, dtype=np.int64)
    eu, ev, _ = g.edge_arrays
    stop = 1 << (n - 1)
    for start in range(1, stop, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, stop), dtype=np.int64)
        bits = ((masks[:, None] >> shifts[None, :]) & 1).astype(bool)
        crossing = bits[:, eu] != bits[:, ev]
        yield masks, bits, crossing


def _weights(crossing: np.ndarray, w: np.ndarray) -> np.ndarray:
    if w.size == 0:
        return np.zeros(crossing.shape[0], dtype=np.int64)
    return crossing.astype(np.int64) @ w


class _Best:
    """Tracks the violating cut of least weight, lowest mask first."""
    def __init__(self):
        self.weight: Optional[int] = None
        self.mask: Optional[int] = None

    def offer(self, masks: np.ndarray, weights: np.ndarray, selected: np.ndarray) -> None:
        if not selected.any():
            return
        idx = np.flatnonzero(selected)
        local = idx[np.argmin(weights[idx])]
        weight, mask = int(weights[local]), int(masks[local])
        if self.weight is None or weight < self.weight:
            self.weight, self.mask = weight, mask

    def cut(self) -> Optional[Cut]:
        if self.mask is None:
            return None
        return Cut(_mask_to_side(self.mask), self.weight)


def _floor(value) -> int:
    return -ceil_fraction(-Fraction(value))


def _inner_weights(g: Graph, cluster: VertexSet, crossing: np.ndarray) -> np.ndarray:
    eu, ev, ew = g.edge_arrays
    ind = _indicator(g.vertex_count, cluster).astype(bool)
    inner = ind[eu] & ind[ev]
    return _weights(crossing[:, inner], ew[inner])


def certify_strong_bruteforce(g: Graph, cluster, p: StrengthParams,
                              cap: int = DEFAULT_CAP) -> Certification:
    """Check that ``cluster`` is (s, delta, gamma)-strong in ``g`` over every cut."""
    _check_cap(g, cap)
    cluster = frozenset(cluster)
    size = len(cluster)
    delta_floor = _floor(p.delta)
    gamma_delta = ceil_fraction(p.gamma * p.delta)
    ind = _indicator(g.vertex_count, cluster)
    _, _, ew = g.edge_arrays
    best = _Best()
    for masks, bits, crossing in _iter_chunks(g):
        weights = _weights(crossing, ew)
        light = weights <= delta_floor
        if not light.any():
            continue
        inside = bits.astype(np.int64) @ ind
        smaller = np.minimum(inside, size - inside)
        inner = _inner_weights(g, cluster, crossing)
        bad = light & ((smaller > p.s) | ((smaller > 0) & (inner < gamma_delta)))
        best.offer(masks, weights, bad)
    witness = best.cut()
    if witness is not None:
        logger.debug(f"Cluster of size {size} is not strong, witness weight {witness.boundary_weight}")
    return Certification(witness is None, witness)


def certify_terminal_strong_bruteforce(g: Graph, cluster, p: StrengthParams,
                                       cap: int = DEFAULT_CAP) -> Certification:
    """Check that ``cluster`` is (s, delta, gamma, T)-terminal-strong in ``g`` over every Steiner cut."""
    _check_cap(g, cap)
    cluster = frozenset(cluster)
    terminals = g.terminals
    cluster_terminals = cluster & terminals
    if len(cluster_terminals) <= 1:
        return Certification(True, None)
    delta_floor = _floor(p.delta)
    gamma_delta = ceil_fraction(p.gamma * p.delta)
    term_ind = _indicator(g.vertex_count, terminals)
    cluster_ind = _indicator(g.vertex_count, cluster_terminals)
    total = len(terminals)
    size = len(cluster_terminals)
    _, _, ew = g.edge_arrays
    best = _Best()
    for masks, bits, crossing in _iter_chunks(g):
        weights = _weights(crossing, ew)
        as_int = bits.astype(np.int64)
        side_terminals = as_int @ term_ind
        steiner = (side_terminals > 0) & (side_terminals < total) & (weights <= delta_floor)
        if not steiner.any():
            continue
        inside = as_int @ cluster_ind
        smaller = np.minimum(inside, size - inside)
        inner = _inner_weights(g, cluster, crossing)
        bad = steiner & ((smaller > p.s) | ((smaller > 0) & (inner < gamma_delta)))
        best.offer(masks, weights, bad)
    return Certification(best.mask is None, best.cut())


def certify_volume_strong_bruteforce(g: Graph, cluster, delta0, s0,
                                     cap: int = DEFAULT_CAP) -> Certification:
    """Every cut of weight <= delta0 leaves volume <= s0 of ``cluster`` on one side."""
    _check_cap(g, cap)
    cluster = frozenset(cluster)
    degrees = np.asarray(g.degrees, dtype=np.int64)
    vol_ind = _indicator(g.vertex_count, cluster) * degrees
    total = int(vol_ind.sum())
    delta_floor = _floor(delta0)
    s_floor = _floor(s0)
    _, _, ew = g.edge_arrays
    best = _Best()
    for masks, bits, crossing in _iter_chunks(g):
        weights = _weights(crossing, ew)
        light = weights <= delta_floor
        if not light.any():
            continue
        inside = bits.astype(np.int64) @ vol_ind
        smaller = np.minimum(inside, total - inside)
        best.offer(masks, weights, light & (smaller > s_floor))
    return Certification(best.mask is None, best.cut())


def find_violating_volume_cut(g: Graph, cluster, delta0, s0,
                              cap: int = DEFAULT_CAP) -> Optional[Cut]:
    """Least-weight cut of weight <= delta0 with volume > s0 of ``cluster`` on both sides."""
    return certify_volume_strong_bruteforce(g, cluster, delta0, s0, cap).witness


def _steiner_weights(g: Graph, terminals: VertexSet):
    if len(terminals) < 2:
        raise InvalidArgumentError("a Steiner cut needs at least two terminals")
    term_ind = _indicator(g.vertex_count, terminals)
    _, _, ew = g.edge_arrays
    for masks, bits, crossing in _iter_chunks(g):
        weights = _weights(crossing, ew)
        side_terminals = bits.astype(np.int64) @ term_ind
        steiner = (side_terminals > 0) & (side_terminals < len(terminals))
        yield masks, weights, steiner


def brute_force_min_steiner_cut(g: Graph, terminals=None,
                                cap: int = DEFAULT_CAP) -> Tuple[int, VertexSet]:
    """Exact minimum Steiner cut value and the side of lowest mask attaining it."""
    _check_cap(g, cap)
    terminals = g.terminals if terminals is None else frozenset(terminals)
    best = _Best()
    for masks, weights, steiner in _steiner_weights(g, terminals):
        best.offer(masks, weights, steiner)
    cut = best.cut()
    return cut.boundary_weight, cut.side


def minimum_steiner_cuts_bruteforce(g: Graph, terminals=None,
                                    cap: int = DEFAULT_CAP) -> List[VertexSet]:
    """Every minimum Steiner cut, each bipartition listed once by its side without the last vertex."""
    _check_cap(g, cap)
    terminals = g.terminals if terminals is None else frozenset(terminals)
    value, _ = brute_force_min_steiner_cut(g, terminals, cap)
    sides: List[VertexSet] = []
    for masks, weights, steiner in _steiner_weights(g, terminals):
        for mask in masks[steiner & (weights == value)]:
            sides.append(_mask_to_side(int(mask)))
    return sides
