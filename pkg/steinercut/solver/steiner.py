"""Deterministic minimum Steiner cut.

For every guess 2**i of the cut value the terminal set is repeatedly
sparsified through a terminal-strong decomposition, and an unbalanced-case
search runs on each intermediate set. The best Steiner cut seen anywhere is
the answer.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union
import logging
import time

from ..config.config import SolverConfig
from ..core.errors import InvalidArgumentError, InvariantViolation, SparsificationError
from ..core.graph import Cut, Graph, VertexSet, cut_weight
from ..core.maxflow import FLOW_COUNTER, max_flow
from ..core.params import derive_params, unbalanced_threshold
from ..decomposition.terminal_decomp import TerminalDecomposition, terminal_decomp
from ..utils.dyadic import ceil_log2
from .isolating import family_flow_cost, family_size, minimum_isolating_cuts, splitting_family

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class GuessTrace:
    guess: int
    sizes: Tuple[int, ...]  # |U| after each sparsification
    fallback: bool = False


@dataclass(frozen=True)
class SteinerResult:
    best_cut: Cut
    value: int
    lambda_guess_used: Optional[int]
    flow_calls: int
    iterations: Tuple[GuessTrace, ...] = ()
    flow_calls_batched: int = 0
    rounds_per_game: Tuple[int, ...] = ()
    recursion_depth: int = 0
    fallbacks: int = 0
    wall_time_ms: int = 0


@dataclass(frozen=True)
class SparsifyClassification:
    trivial: Tuple[VertexSet, ...]
    small: Tuple[VertexSet, ...]
    large: Tuple[VertexSet, ...]


def _terminal_set(g: Graph, terminals) -> VertexSet:
    terminals = g.terminals if terminals is None else frozenset(terminals)
    if len(terminals) < 2:
        raise InvalidArgumentError("a Steiner cut needs at least two terminals")
    if not terminals <= g.vertices:
        raise InvalidArgumentError("terminal outside the graph")
    return terminals


def _better(candidate: Cut, best: Optional[Cut]) -> bool:
    return best is None or candidate.boundary_weight < best.boundary_weight


def _lightest(cuts) -> Cut:
    best = None
    for cut in cuts:
        if _better(cut, best):
            best = cut
    return best


def pivot_sweep(g: Graph, u_set) -> Cut:
    """Lightest cut among min cuts from the lowest vertex of ``u_set`` to each other one."""
    members = sorted(u_set)
    pivot = members[0]
    return _lightest(max_flow(g, pivot, v).source_side_cut for v in members[1:])


def family_plan_cost(size: int, family: List[List[int]]) -> int:
    """Flows for isolating cuts on all of U plus every family class."""
    return ceil_log2(size) + 1 + family_flow_cost(family)


def unbalanced_case(g: Graph, terminals, u_set, k: int,
                    config: Optional[SolverConfig] = None) -> Cut:
    """Steiner cut that is minimum whenever some minimum Steiner cut has at most k vertices of ``u_set`` on a side.

    Runs isolating cuts on U and on every class of the splitting family, or
    the pivot sweep over U when that takes no more flows. The sweep is exact
    for any k.
    """
    config = config or SolverConfig()
    terminals = _terminal_set(g, terminals)
    members = sorted(set(u_set))
    if len(members) < 2:
        raise InvalidArgumentError("the unbalanced case needs at least two vertices")
    if not set(members) <= terminals:
        raise InvalidArgumentError("u_set must consist of terminals")
    if k < 1:
        raise InvalidArgumentError("k must be at least 1")
    if len(members) == 2:
        return max_flow(g, members[0], members[1]).source_side_cut

    strategy = config.unbalanced_strategy
    sweep_cost = len(members) - 1
    family = None
    # every class costs at least two flows
    if strategy == "family" or (strategy == "auto" and 2 * family_size(len(members), k) < sweep_cost):
        family = splitting_family(len(members), k)
    if strategy == "family" and family is None:
        logger.warning(f"Splitting family for |U|={len(members)}, k={k} exceeds its size cap; sweeping instead")
    use_family = family is not None and (
        strategy == "family" or family_plan_cost(len(members), family) < sweep_cost)

    if not use_family:
        return pivot_sweep(g, members)
    best = _lightest(minimum_isolating_cuts(g, members).values())
    for indices in family:
        candidate = _lightest(minimum_isolating_cuts(g, [members[i] for i in indices]).values())
        if _better(candidate, best):
            best = candidate
    logger.debug(f"Unbalanced case on {len(members)} vertices used {len(family)} family classes")
    return best


def classify_clusters(d: TerminalDecomposition, u_set, s: int) -> SparsifyClassification:
    u_set = frozenset(u_set)
    trivial, small, large = [], [], []
    for cluster in d.clusters:
        count = len(cluster & u_set)
        if count == 0:
            trivial.append(cluster)
        elif count <= s * s:
            small.append(cluster)
        else:
            large.append(cluster)
    return SparsifyClassification(tuple(trivial), tuple(small), tuple(large))


def sparsify(g: Graph, d: TerminalDecomposition, u_set, s: int,
             gamma: Optional[Rational] = None) -> VertexSet:
    """Keep the lowest U-vertex of each small cluster and the s+1 lowest of each large one."""
    u_set = frozenset(u_set)
    classes = classify_clusters(d, u_set, s)
    chosen = set()
    for cluster in classes.small:
        chosen.add(min(cluster & u_set))
    for cluster in classes.large:
        chosen.update(sorted(cluster & u_set)[:s + 1])
    if 2 * len(chosen) > len(u_set):
        raise SparsificationError(len(chosen), len(u_set))
    if gamma is not None:
        logger.debug(f"Sparsified {len(u_set)} -> {len(chosen)} for balance threshold "
                     f"{Fraction(2 * s * s) / Fraction(gamma)}")
    return frozenset(chosen)


def count_cut_clusters(d: TerminalDecomposition, side, terminals=None) -> int:
    """Clusters whose terminals lie on both sides of the cut."""
    side = frozenset(side)
    terminals = d.terminals if terminals is None else frozenset(terminals)
    crossing = 0
    for cluster in d.clusters:
        inner = cluster & terminals
        if inner & side and inner - side:
            crossing += 1
    return crossing


def cluster_count_bound_holds(d: TerminalDecomposition, lam: int) -> bool:
    """Clusters holding terminals, times lambda, fit inside twice the intercluster weight."""
    holding = sum(1 for c in d.clusters if c & d.terminals)
    if holding <= 1:
        return True
    return holding * lam <= 2 * d.intercluster_weight


def _checked(g: Graph, terminals: VertexSet, cut: Cut) -> Cut:
    if not cut.is_steiner(g, terminals):
        raise InvariantViolation("best cut does not separate the terminals")
    if cut_weight(g, cut.side) != cut.boundary_weight:
        raise InvariantViolation("best cut weight does not match its boundary")
    return cut


def min_steiner_cut(g: Graph, terminals=None, config: Optional[SolverConfig] = None) -> SteinerResult:
    """Minimum weight Steiner cut of ``g``."""
    config = config or SolverConfig()
    terminals = _terminal_set(g, terminals)
    marked = g.with_terminals(terminals)
    started = time.perf_counter()
    before = FLOW_COUNTER.snapshot()

    top = derive_params(g.vertex_count, len(terminals), 1, config).achieved()
    k = config.k_override if config.k_override is not None else unbalanced_threshold(top)

    memo: Dict[VertexSet, Cut] = {}
    exact: Optional[Cut] = None

    def solve_unbalanced(u_set: VertexSet) -> Cut:
        if u_set not in memo:
            memo[u_set] = unbalanced_case(marked, terminals, u_set, k, config)
        return memo[u_set]

    best: Optional[Cut] = None
    best_guess: Optional[int] = None
    traces: List[GuessTrace] = []
    rounds: List[int] = []
    depth = 0
    fallbacks = 0

    for i in range(ceil_log2(max(1, g.total_weight)) + 1):
        guess = 2 ** i
        if best is not None and guess > best.boundary_weight:
            # the useful guess is at most lambda, which is at most the best cut found
            break
        u_set = terminals
        sizes = [len(u_set)]
        fell_back = False
        while True:
            if len(u_set) >= 2:
                cut = solve_unbalanced(u_set)
                if _better(cut, best):
                    best, best_guess = cut, guess
            if len(u_set) <= max(k, 2):
                break
            d = terminal_decomp(marked, None, u_set, guess, config=config)
            rounds.extend(d.rounds_per_game)
            depth = max(depth, d.recursion_depth)
            try:
                u_set = sparsify(marked, d, u_set, d.params.s, d.params.gamma)
            except SparsificationError as e:
                logger.warning(f"Guess {guess}: {e}; falling back to the pivot sweep")
                if exact is None:
                    exact = pivot_sweep(marked, terminals)
                cut = exact
                if _better(cut, best):
                    best, best_guess = cut, guess
                fallbacks += 1
                fell_back = True
                break
            sizes.append(len(u_set))
        traces.append(GuessTrace(guess, tuple(sizes), fell_back))
        logger.info(f"Guess {guess}: |U| trajectory {sizes}, best so far {best.boundary_weight}")

    best = _checked(g, terminals, best)
    used = FLOW_COUNTER.snapshot() - before
    elapsed = int((time.perf_counter() - started) * 1000)
    return SteinerResult(best_cut=best, value=best.boundary_weight, lambda_guess_used=best_guess,
                         flow_calls=used.individual, iterations=tuple(traces),
                         flow_calls_batched=used.batched, rounds_per_game=tuple(rounds),
                         recursion_depth=depth, fallbacks=fallbacks, wall_time_ms=elapsed)


def naive_steiner_cut(g: Graph, terminals=None) -> SteinerResult:
    """|T|-1 max-flows from the lowest terminal."""
    terminals = _terminal_set(g, terminals)
    started = time.perf_counter()
    before = FLOW_COUNTER.snapshot()
    best = _checked(g, terminals, pivot_sweep(g, terminals))
    used = FLOW_COUNTER.snapshot() - before
    return SteinerResult(best_cut=best, value=best.boundary_weight, lambda_guess_used=None,
                         flow_calls=used.individual, flow_calls_batched=used.batched,
                         wall_time_ms=int((time.perf_counter() - started) * 1000))
