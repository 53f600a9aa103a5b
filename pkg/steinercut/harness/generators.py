"""Seeded graph families with known minimum Steiner cut values where available."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence
import logging

import networkx as nx
import numpy as np

from ..core.errors import InvalidArgumentError
from ..core.graph import Graph
from .dimacs import DEFAULT_MAX_WEIGHT

logger = logging.getLogger(__name__)

FAMILIES = ("dumbbell", "clique", "grid", "random_gnm", "planted_cut")


@dataclass(frozen=True)
class Instance:
    graph: Graph
    known_lambda: Optional[int]
    kind: str
    params: Dict[str, Any] = field(default_factory=dict, hash=False)


def _positive(params: Dict[str, Any], name: str, default: int, minimum: int = 1) -> int:
    value = int(params.get(name, default))
    if value < minimum:
        raise InvalidArgumentError(f"{name} must be at least {minimum}, got {value}")
    return value


def _dumbbell(params: Dict[str, Any], rng: np.random.Generator) -> Instance:
    a = _positive(params, "clique_size", params.get("triangle_size", 3), minimum=2)
    bridge_w = _positive(params, "bridge_w", 1)
    inner_w = _positive(params, "inner_w", 1)
    edges = []
    for offset in (0, a):
        for i in range(a):
            for j in range(i + 1, a):
                edges.append((offset + i, offset + j, inner_w))
    edges.append((a - 1, a, bridge_w))
    mode = params.get("terminals", "far")
    if mode == "far":
        terminals = [0, 2 * a - 1]
    elif mode == "all":
        terminals = list(range(2 * a))
    else:
        raise InvalidArgumentError(f"unknown dumbbell terminal mode {mode!r}")
    g = Graph.build(2 * a, edges, terminals)
    return Instance(g, min(bridge_w, (a - 1) * inner_w), "dumbbell", dict(params))


def _clique(params: Dict[str, Any], rng: np.random.Generator) -> Instance:
    n = _positive(params, "n", 5, minimum=2)
    w = _positive(params, "w", 1)
    edges = [(i, j, w) for i in range(n) for j in range(i + 1, n)]
    return Instance(Graph.build(n, edges, range(n)), (n - 1) * w, "clique", dict(params))


def _grid(params: Dict[str, Any], rng: np.random.Generator) -> Instance:
    rows = _positive(params, "rows", 3, minimum=2)
    cols = _positive(params, "cols", 3, minimum=2)
    w = _positive(params, "w", 1)
    grid = nx.grid_2d_graph(rows, cols)
    index = {node: i for i, node in enumerate(sorted(grid.nodes()))}
    edges = sorted((min(index[u], index[v]), max(index[u], index[v]), w) for u, v in grid.edges())
    terminals = [index[(0, 0)], index[(rows - 1, cols - 1)]]
    return Instance(Graph.build(rows * cols, edges, terminals), 2 * w, "grid", dict(params))


def _pick_terminals(n: int, params: Dict[str, Any], rng: np.random.Generator,
                    required: Sequence[int] = ()) -> List[int]:
    if "terminal_count" in params:
        count = int(params["terminal_count"])
    else:
        fraction = Fraction(str(params.get("terminal_fraction", "1/2")))
        count = int(round(n * fraction))
    count = max(2, min(n, count))
    chosen = list(dict.fromkeys(required))
    rest = [v for v in range(n) if v not in chosen]
    extra = rng.choice(len(rest), size=max(0, count - len(chosen)), replace=False)
    chosen.extend(rest[int(i)] for i in extra)
    return sorted(chosen)


def _random_gnm(params: Dict[str, Any], rng: np.random.Generator, seed: int) -> Instance:
    n = _positive(params, "n", 20, minimum=2)
    m = int(params.get("m", 2 * n))
    if not 0 <= m <= n * (n - 1) // 2:
        raise InvalidArgumentError(f"m={m} is not a valid edge count for n={n}")
    max_w = _positive(params, "max_w", 10)
    graph = nx.gnm_random_graph(n, m, seed=seed)
    pairs = sorted((min(u, v), max(u, v)) for u, v in graph.edges())
    weights = rng.integers(1, max_w + 1, size=len(pairs))
    edges = [(u, v, int(w)) for (u, v), w in zip(pairs, weights)]
    terminals = _pick_terminals(n, params, rng)
    return Instance(Graph.build(n, edges, terminals), None, "random_gnm", dict(params))


def _planted_cut(params: Dict[str, Any], rng: np.random.Generator) -> Instance:
    """Two halves, each a heavy cycle plus chords, joined by light edges of total cut_w."""
    n = _positive(params, "n", 30, minimum=6)
    cut_w = _positive(params, "cut_w", 3)
    inside_w = _positive(params, "inside_w", 10)
    if cut_w >= 2 * inside_w:
        raise InvalidArgumentError("planted cut needs cut_w < 2 * inside_w")
    chord_factor = Fraction(str(params.get("chords", "1")))

    half = n // 2
    groups = [list(range(half)), list(range(half, n))]
    edges = []
    for group in groups:
        size = len(group)
        for i in range(size):
            edges.append((group[i], group[(i + 1) % size], inside_w))
        for _ in range(int(chord_factor * size)):
            i, j = sorted(int(x) for x in rng.choice(size, size=2, replace=False))
            if j - i not in (1, size - 1):
                edges.append((group[i], group[j], inside_w))

    pieces = min(cut_w, 3)
    shares = [cut_w // pieces + (1 if i < cut_w % pieces else 0) for i in range(pieces)]
    for share in shares:
        edges.append((int(rng.integers(0, half)), int(rng.integers(half, n)), share))

    required = [int(rng.integers(0, half)), int(rng.integers(half, n))]
    terminals = _pick_terminals(n, params, rng, required)
    return Instance(Graph.build(n, edges, terminals), cut_w, "planted_cut", dict(params))


def generate(kind: str, params: Optional[Dict[str, Any]] = None, seed: int = 0,
             max_weight: int = DEFAULT_MAX_WEIGHT) -> Instance:
    """Deterministic instance of the named family for a given seed; no edge may exceed ``max_weight``."""
    params = dict(params or {})
    rng = np.random.default_rng(seed)
    if kind == "dumbbell":
        instance = _dumbbell(params, rng)
    elif kind == "clique":
        instance = _clique(params, rng)
    elif kind == "grid":
        instance = _grid(params, rng)
    elif kind == "random_gnm":
        instance = _random_gnm(params, rng, seed)
    elif kind == "planted_cut":
        instance = _planted_cut(params, rng)
    else:
        raise InvalidArgumentError(f"unknown graph family {kind!r}; choose from {', '.join(FAMILIES)}")
    instance.graph.check_weights(max_weight)
    logger.debug(f"Generated {kind} with {instance.graph.vertex_count} vertices, seed {seed}")
    return instance
