"""Extended DIMACS reader and writer.

    c <comment>
    p steiner <n> <m>
    e <u> <v> <w>      (1-indexed, w > 0)
    t <v>
"""
from typing import List, Optional, Set, Tuple
import logging

from ..core.errors import ParseError
from ..core.graph import Graph

logger = logging.getLogger(__name__)

DEFAULT_MAX_WEIGHT = 2 ** 40


def _ints(fields: List[str], count: int, line_number: int) -> List[int]:
    if len(fields) != count:
        raise ParseError(f"expected {count} fields, got {len(fields)}", line_number)
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise ParseError(f"non-integer field in {' '.join(fields)!r}", line_number)


def parse_graph(text: str, max_weight: int = DEFAULT_MAX_WEIGHT) -> Graph:
    """Parse extended DIMACS text into a Graph."""
    n: Optional[int] = None
    declared_edges = 0
    edges: List[Tuple[int, int, int]] = []
    terminals: List[int] = []
    seen_terminals: Set[int] = set()

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        kind, *fields = line.split()

        if kind == 'p':
            if n is not None:
                raise ParseError("duplicate problem line", line_number)
            if not fields or fields[0] != 'steiner':
                raise ParseError("problem line must read 'p steiner <n> <m>'", line_number)
            n, declared_edges = _ints(fields[1:], 2, line_number)
            if n < 0 or declared_edges < 0:
                raise ParseError("negative vertex or edge count", line_number)
            continue

        if n is None:
            raise ParseError(f"'{kind}' line before the problem line", line_number)

        if kind == 'e':
            u, v, w = _ints(fields, 3, line_number)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(f"vertex {x} out of range 1..{n}", line_number)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", line_number)
            if w <= 0:
                raise ParseError(f"edge weight {w} must be positive", line_number)
            if w > max_weight:
                raise ParseError(f"edge weight {w} exceeds {max_weight}", line_number)
            edges.append((u - 1, v - 1, w))
        elif kind == 't':
            (t,) = _ints(fields, 1, line_number)
            if not 1 <= t <= n:
                raise ParseError(f"terminal {t} out of range 1..{n}", line_number)
            if t in seen_terminals:
                raise ParseError(f"duplicate terminal {t}", line_number)
            seen_terminals.add(t)
            terminals.append(t - 1)
        else:
            raise ParseError(f"unknown line type '{kind}'", line_number)

    if n is None:
        raise ParseError("missing problem line")
    if len(edges) != declared_edges:
        raise ParseError(f"header declares {declared_edges} edges, found {len(edges)}")
    logger.debug(f"Parsed graph with {n} vertices, {len(edges)} edges, {len(terminals)} terminals")
    return Graph.build(n, edges, terminals)


def read_graph(path: str, max_weight: int = DEFAULT_MAX_WEIGHT) -> Graph:
    with open(path, 'r') as f:
        return parse_graph(f.read(), max_weight)


def emit_graph(g: Graph, comment: Optional[str] = None) -> str:
    """Inverse of parse_graph for graphs without self-loops."""
    lines = []
    if comment:
        lines.extend(f"c {part}" for part in comment.splitlines())
    proper = g.proper_edges
    lines.append(f"p steiner {g.vertex_count} {len(proper)}")
    lines.extend(f"e {u + 1} {v + 1} {w}" for u, v, w in proper)
    lines.extend(f"t {t + 1}" for t in sorted(g.terminals))
    return "\n".join(lines) + "\n"
