"""Recursive terminal-strong decomposition driven by the cut-matching game."""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Dict, List, Optional, Tuple, Union
import logging

from ..config.config import SolverConfig
from ..core.certify import certify_terminal_strong_bruteforce
from ..core.errors import InvalidArgumentError, InvariantViolation, RecursionDepthExceeded
from ..core.graph import Graph, VertexSet, crossing_weight, induced_subgraph
from ..core.maxflow import FLOW_COUNTER
from ..core.params import StrengthParams, derive_params
from ..utils.dyadic import ceil_log2, ceil_log_base, le_log2
from .cut_matching import OutcomeKind, cut_game

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

_RUN_IDS = count(1)
_SHRINK = Fraction(6, 5)


@dataclass(frozen=True)
class TerminalDecomposition:
    clusters: Tuple[VertexSet, ...]
    intercluster_weight: int
    params: StrengthParams
    recursion_depth: int
    flow_calls_used: int
    flow_calls_batched: int = 0
    terminals: VertexSet = frozenset()
    psi: Fraction = Fraction(1, 64)
    rounds_per_game: Tuple[int, ...] = ()
    flow_budget: Fraction = Fraction(0)  # c_F * ceil(log2 n)^2 batched calls


@dataclass
class DecompositionReport:
    ok: bool = True
    within_flow_budget: bool = True  # reported only, the budget is asymptotic
    checks: Dict[str, bool] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    certified_clusters: int = 0

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and passed
        if not passed:
            self.ok = False
            self.failures.append(f"{name}: {detail}" if detail else name)


def depth_limit(terminal_count: int) -> int:
    return ceil_log_base(max(terminal_count, 1), _SHRINK) + 1


def within_intercluster_bound(weight: int, psi: Rational, delta: Rational,
                              terminal_count: int, c_ic: Rational) -> bool:
    """weight <= c_ic * psi * delta * |T| * log2|T|, decided exactly."""
    if terminal_count < 2:
        return weight == 0
    unit = Fraction(c_ic) * Fraction(psi) * Fraction(delta) * terminal_count
    return le_log2(Fraction(weight) / unit, terminal_count)


def flow_budget(vertex_count: int, c_f: Rational) -> Fraction:
    return Fraction(c_f) * ceil_log2(max(vertex_count, 2)) ** 2


def intercluster_bound(d: TerminalDecomposition, c_ic: Rational = 2) -> bool:
    return within_intercluster_bound(d.intercluster_weight, d.psi, d.params.delta,
                                     len(d.terminals), c_ic)


def terminal_decomp(g: Graph, cluster=None, terminals=None, delta: Rational = 1,
                    psi: Optional[Rational] = None,
                    config: Optional[SolverConfig] = None) -> TerminalDecomposition:
    """Decompose ``cluster`` (all of g by default) into terminal-strong clusters.

    Balanced sparse cuts split the cluster and both sides recurse; a trimmed
    cluster is kept and only its complement recurses. Cut games at the same
    depth share a batch tag per round.
    """
    config = config or SolverConfig()
    if psi is not None:
        config = config.with_overrides(psi=psi)
    cluster = g.vertices if cluster is None else frozenset(cluster)
    terminals = g.terminals & cluster if terminals is None else frozenset(terminals)
    if not terminals <= cluster:
        raise InvalidArgumentError("terminals must lie inside the cluster")
    if not cluster:
        raise InvalidArgumentError("cannot decompose an empty cluster")
    delta = Fraction(delta)
    if delta <= 0:
        raise InvalidArgumentError("delta must be positive")

    run_id = next(_RUN_IDS)
    before = FLOW_COUNTER.snapshot()
    limit = depth_limit(len(terminals))
    params = derive_params(len(cluster), max(len(terminals), 2), delta, config).achieved()
    marked = g.with_terminals(terminals)

    clusters: List[VertexSet] = []
    rounds: List[int] = []
    deepest = 0

    def decompose(vertices: VertexSet, local_terminals: VertexSet, depth: int) -> None:
        nonlocal deepest
        if depth > limit:
            raise RecursionDepthExceeded(f"decomposition depth {depth} exceeds {limit} for {len(terminals)} terminals")
        deepest = max(deepest, depth)
        if len(local_terminals) <= 1:
            clusters.append(vertices)
            return

        members = sorted(vertices)
        sub = induced_subgraph(marked.with_terminals(local_terminals), members)
        outcome = cut_game(sub, delta, config=config, batch_key=(run_id, depth))
        rounds.append(outcome.rounds)

        if outcome.kind is OutcomeKind.BALANCED_SPARSE_CUT:
            side = frozenset(members[i] for i in outcome.cut.side)
            rest = vertices - side
            logger.debug(f"Depth {depth}: sparse cut of weight {outcome.cut.boundary_weight} "
                         f"splits {len(vertices)} vertices into {len(side)} + {len(rest)}")
            decompose(side, local_terminals & side, depth + 1)
            decompose(rest, local_terminals & rest, depth + 1)
            return

        kept = frozenset(members[i] for i in outcome.cluster)
        clusters.append(kept)
        rest = vertices - kept
        if rest:
            logger.debug(f"Depth {depth}: trimmed cluster of {len(kept)} vertices, {len(rest)} left")
            decompose(rest, local_terminals & rest, depth + 1)

    try:
        decompose(cluster, terminals, 0)
    finally:
        FLOW_COUNTER.forget(run_id)

    clusters.sort(key=min)
    used = FLOW_COUNTER.snapshot() - before
    weight = crossing_weight(g, clusters)
    result = TerminalDecomposition(clusters=tuple(clusters), intercluster_weight=weight, params=params,
                                   recursion_depth=deepest, flow_calls_used=used.individual,
                                   flow_calls_batched=used.batched, terminals=terminals,
                                   psi=config.psi, rounds_per_game=tuple(rounds),
                                   flow_budget=flow_budget(len(cluster), config.c_f))
    if not intercluster_bound(result, config.c_ic):
        message = (f"Intercluster weight {weight} exceeds the charging bound for "
                   f"{len(terminals)} terminals at delta={delta}")
        if config.check_invariants:
            raise InvariantViolation(message)
        logger.warning(message)
    if used.batched > result.flow_budget:
        logger.info(f"Decomposition used {used.batched} batched flows, above the budget {result.flow_budget}")
    logger.info(f"Terminal decomposition: {len(clusters)} clusters, weight {weight}, "
                f"depth {deepest}, {used.individual} flows ({used.batched} batched)")
    return result


def verify_decomposition(g: Graph, d: TerminalDecomposition,
                         config: Optional[SolverConfig] = None) -> DecompositionReport:
    """Check cover, disjointness, the weight bound and, under the brute-force cap, cluster strength."""
    config = config or SolverConfig()
    report = DecompositionReport()

    union = frozenset().union(*d.clusters) if d.clusters else frozenset()
    report.record("overlap", sum(len(c) for c in d.clusters) == len(union), "clusters intersect")
    report.record("cover", union == g.vertices, f"{len(g.vertices - union)} vertices uncovered")

    weight = crossing_weight(g, d.clusters)
    report.record("weight", weight == d.intercluster_weight,
                  f"recomputed {weight}, recorded {d.intercluster_weight}")
    report.record("weight", within_intercluster_bound(weight, d.psi, d.params.delta, len(d.terminals), config.c_ic),
                  f"intercluster weight {weight} above the bound")
    report.within_flow_budget = d.flow_calls_batched <= d.flow_budget

    if g.vertex_count <= config.brute_cap and report.checks["overlap"]:
        marked = g.with_terminals(d.terminals)
        for c in d.clusters:
            outcome = certify_terminal_strong_bruteforce(marked, c, d.params, config.brute_cap)
            report.record("strength", outcome.holds,
                          f"cluster {sorted(c)} cut by {sorted(outcome.witness.side) if outcome.witness else ''}")
            report.certified_clusters += int(outcome.holds)
    return report
