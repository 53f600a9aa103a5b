"""Command-line interface: solve, naive, brute, decompose, partition, gen and bench."""
from functools import wraps
from typing import Dict, List, Optional
import logging
import os
import sys

import click
from rich.console import Console
from rich.table import Table

from ..config.config import ConfigManager, SolverConfig
from ..core.certify import brute_force_min_steiner_cut, certify_strong_bruteforce
from ..core.errors import InvalidArgumentError, InvariantViolation, ParseError
from ..core.graph import Graph
from ..core.params import StrengthParams
from ..decomposition.strong_partition import strong_partition
from ..decomposition.terminal_decomp import terminal_decomp, verify_decomposition
from ..solver.steiner import SteinerResult, min_steiner_cut, naive_steiner_cut
from ..utils.dyadic import format_rational, parse_dyadic
from .dimacs import emit_graph, read_graph
from .generators import FAMILIES, generate
from .metrics import SolverMetrics
from .stats import BenchRow, RunStats, crossover, fitted_c_f, rows_to_csv, superlogarithmic_trend

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3


def _configure_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s'
    )


def common_options(f):
    """Logging, configuration and solver-constant flags shared by every command."""
    options = [
        click.option('--log-level', default=lambda: os.getenv('LOG_LEVEL', 'INFO'), help='Logging level'),
        click.option('--config', 'config_path', default=None, type=click.Path(), help='YAML configuration file'),
        click.option('--psi', default=None, help='Terminal-sparsity factor as num/den'),
        click.option('--c-l', 'c_l', default=None, help='Round-limit constant'),
        click.option('--c-s', 'c_s', default=None, help='Strength constant'),
        click.option('--brute-cap', default=None, type=int, help='Largest n for exhaustive checks'),
        click.option('--k', 'k_override', default=None, type=int, help='Override the unbalanced-case threshold'),
        click.option('--metrics-port', default=None, type=int, help='Serve Prometheus metrics on this port'),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def guarded(f):
    """Translate solver exceptions into exit codes."""
    @wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except click.ClickException:
            raise
        except (ParseError, InvalidArgumentError) as e:
            logger.error(f"Invalid input: {e}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_USAGE)
        except InvariantViolation as e:
            logger.error(f"Internal invariant failed: {e}")
            click.echo(f"invariant violation: {e}", err=True)
            sys.exit(EXIT_INVARIANT)
        except Exception as e:
            logger.error(f"Error running command: {e}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_FAILURE)
    return wrapper


def _setup(log_level: str, config_path: Optional[str], psi, c_l, c_s, brute_cap, k_override,
           metrics_port: Optional[int]):
    _configure_logging(log_level)
    manager = ConfigManager(config_path)
    manager.solver = manager.solver.with_overrides(psi=psi, c_l=c_l, c_s=c_s, brute_cap=brute_cap,
                                                   k_override=k_override)
    if not manager.validate_config():
        raise InvalidArgumentError("configuration failed validation")
    return manager, SolverMetrics(metrics_port)


def _side_label(side) -> str:
    return "{" + ", ".join(str(v + 1) for v in sorted(side)) + "}"


def _print_result(title: str, result: SteinerResult):
    table = Table(title=title)
    table.add_column("field")
    table.add_column("value")
    table.add_row("value", str(result.value))
    table.add_row("side", _side_label(result.best_cut.side))
    table.add_row("flow calls", str(result.flow_calls))
    table.add_row("flow calls (batched)", str(result.flow_calls_batched))
    if result.lambda_guess_used is not None:
        table.add_row("guess", str(result.lambda_guess_used))
    table.add_row("fallbacks", str(result.fallbacks))
    Console().print(table)
    click.echo(f"value: {result.value}")


@click.group()
def cli():
    """Deterministic minimum Steiner cut toolkit."""


@cli.command()
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True), help='Extended DIMACS graph')
@click.option('--stats', 'stats_path', default=None, type=click.Path(), help='Write run statistics as JSON')
@click.option('--export-metrics', default=None, type=click.Path(), help='Write run records as JSON')
@common_options
@guarded
def solve(input_path, stats_path, export_metrics, log_level, config_path, psi, c_l, c_s, brute_cap,
          k_override, metrics_port):
    """Minimum Steiner cut with polylogarithmically many max-flows."""
    manager, metrics = _setup(log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port)
    g = read_graph(input_path, manager.solver.max_weight)
    result = min_steiner_cut(g, config=manager.solver)
    metrics.record_result('solve', result)
    _print_result("min_steiner_cut", result)
    if stats_path:
        RunStats.from_result(result).save(stats_path)
        logger.info(f"Statistics written to {stats_path}")
    if export_metrics:
        metrics.export_metrics(export_metrics)


@cli.command()
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True), help='Extended DIMACS graph')
@common_options
@guarded
def naive(input_path, log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port):
    """Classical |T|-1 max-flow oracle."""
    manager, metrics = _setup(log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port)
    g = read_graph(input_path, manager.solver.max_weight)
    result = naive_steiner_cut(g)
    metrics.record_result('naive', result)
    _print_result("naive_steiner_cut", result)


@cli.command()
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True), help='Extended DIMACS graph')
@common_options
@guarded
def brute(input_path, log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port):
    """Exhaustive enumeration over all cuts (small graphs only)."""
    manager, _ = _setup(log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port)
    g = read_graph(input_path, manager.solver.max_weight)
    value, side = brute_force_min_steiner_cut(g, cap=manager.solver.brute_cap)
    click.echo(f"value: {value}")
    click.echo(f"side: {_side_label(side)}")


@cli.command()
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True), help='Extended DIMACS graph')
@click.option('--delta', required=True, help='Cut threshold delta as num/den')
@common_options
@guarded
def decompose(input_path, delta, log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port):
    """Terminal-strong decomposition and its verification report."""
    manager, _ = _setup(log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port)
    g = read_graph(input_path, manager.solver.max_weight)
    d = terminal_decomp(g, delta=parse_dyadic(delta), config=manager.solver)
    report = verify_decomposition(g, d, manager.solver)

    table = Table(title=f"{len(d.clusters)} clusters")
    table.add_column("cluster")
    table.add_column("vertices")
    table.add_column("terminals")
    for i, c in enumerate(d.clusters, start=1):
        table.add_row(str(i), _side_label(c), str(len(c & d.terminals)))
    Console().print(table)

    click.echo(f"clusters: {len(d.clusters)}")
    click.echo(f"intercluster weight: {d.intercluster_weight}")
    click.echo(f"recursion depth: {d.recursion_depth}")
    click.echo(f"flow calls: {d.flow_calls_used} ({d.flow_calls_batched} batched)")
    click.echo(f"flow budget: {format_rational(d.flow_budget)} "
               f"({'within' if report.within_flow_budget else 'exceeded'})")
    for name, passed in report.checks.items():
        click.echo(f"check {name}: {'ok' if passed else 'FAILED'}")
    for failure in report.failures:
        click.echo(f"finding: {failure}")
    click.echo(f"verified: {report.ok}")


@cli.command()
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True), help='Extended DIMACS graph')
@click.option('--delta', required=True, help='delta as num/den')
@click.option('--alpha', required=True, help='alpha as num/den')
@click.option('--s', 's_value', required=True, type=int, help='Strength size bound s')
@click.option('--gamma', default=None, help='gamma as num/den, defaults to 1/(200*alpha*s)')
@common_options
@guarded
def partition(input_path, delta, alpha, s_value, gamma, log_level, config_path, psi, c_l, c_s, brute_cap,
              k_override, metrics_port):
    """Strong partition of the input graph."""
    manager, _ = _setup(log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port)
    g = read_graph(input_path, manager.solver.max_weight)
    delta, alpha = parse_dyadic(delta), parse_dyadic(alpha)
    gamma = parse_dyadic(gamma) if gamma is not None else None
    result = strong_partition(g, delta, alpha, s_value, gamma, manager.solver)
    effective_gamma = gamma if gamma is not None else 1 / (manager.solver.gamma_divisor * alpha * s_value)

    check = g.vertex_count <= manager.solver.brute_cap
    table = Table(title=f"{len(result.clusters)} clusters")
    table.add_column("vertices")
    table.add_column("strong" if check else "strong (unchecked)")
    for c in result.clusters:
        status = "-"
        if check:
            params = StrengthParams.plain(s_value, alpha * delta, effective_gamma)
            status = "yes" if certify_strong_bruteforce(g, c, params, manager.solver.brute_cap).holds else "no"
        table.add_row(_side_label(c), status)
    Console().print(table)
    click.echo(f"clusters: {len(result.clusters)}")
    click.echo(f"intercluster weight: {result.intercluster_weight}")
    click.echo(f"gamma: {format_rational(effective_gamma)}")


def _parse_params(items: List[str]) -> Dict[str, str]:
    params = {}
    for item in items:
        if '=' not in item:
            raise click.BadParameter(f"expected key=value, got {item!r}")
        key, value = item.split('=', 1)
        params[key.strip()] = value.strip()
    return params


@cli.command()
@click.option('--family', required=True, type=click.Choice(FAMILIES), help='Graph family')
@click.option('--seed', default=0, type=int, help='Random seed')
@click.option('--param', 'raw_params', multiple=True, help='Family parameter as key=value')
@click.option('--output', default=None, type=click.Path(), help='Write to a file instead of stdout')
@click.option('--log-level', default=lambda: os.getenv('LOG_LEVEL', 'INFO'), help='Logging level')
@guarded
def gen(family, seed, raw_params, output, log_level):
    """Emit a generated graph in extended DIMACS."""
    _configure_logging(log_level)
    instance = generate(family, _parse_params(list(raw_params)), seed)
    known = instance.known_lambda if instance.known_lambda is not None else "unknown"
    text = emit_graph(instance.graph, comment=f"{family} seed={seed} lambda={known}")
    if output:
        with open(output, 'w') as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def _bench_params(family: str, n: int, terminal_fraction) -> Dict[str, object]:
    if family == "grid":
        side = max(2, int(round(n ** 0.5)))
        return {"rows": side, "cols": side}
    if family == "dumbbell":
        return {"clique_size": max(2, n // 2), "terminals": "all"}
    if family == "clique":
        return {"n": n}
    return {"n": n, "terminal_fraction": format_rational(terminal_fraction)}


@cli.command()
@click.option('--family', default=None, type=click.Choice(FAMILIES), help='Graph family')
@click.option('--sizes', default=None, help='Comma-separated vertex counts')
@click.option('--seed', default=None, type=int, help='Random seed')
@click.option('--output', default=None, type=click.Path(), help='Write the CSV to a file')
@common_options
@guarded
def bench(family, sizes, seed, output, log_level, config_path, psi, c_l, c_s, brute_cap, k_override,
          metrics_port):
    """Flow-call counts of the solver against the |T|-1 baseline."""
    manager, metrics = _setup(log_level, config_path, psi, c_l, c_s, brute_cap, k_override, metrics_port)
    family = family or manager.bench.family
    seed = manager.bench.seed if seed is None else seed
    try:
        size_list = [int(x) for x in sizes.split(',')] if sizes else list(manager.bench.sizes)
    except ValueError:
        raise click.BadParameter(f"sizes must be comma-separated integers, got {sizes!r}")

    solver = manager.solver
    if solver.k_override is None and manager.bench.k is not None:
        solver = solver.with_overrides(k_override=manager.bench.k)

    rows: List[BenchRow] = []
    for n in size_list:
        instance = generate(family, _bench_params(family, n, manager.bench.terminal_fraction), seed,
                            solver.max_weight)
        g: Graph = instance.graph
        result = min_steiner_cut(g, config=solver)
        baseline = naive_steiner_cut(g)
        metrics.record_result('bench', result)
        rows.append(BenchRow(n=g.vertex_count, terminals=len(g.terminals), total_weight=g.total_weight,
                             flow_calls=result.flow_calls, flow_calls_batched=result.flow_calls_batched,
                             naive_calls=baseline.flow_calls, value=result.value,
                             naive_value=baseline.value, wall_time_ms=result.wall_time_ms))
        logger.info(f"bench n={g.vertex_count}: {result.flow_calls} flows vs {baseline.flow_calls} naive")

    text = rows_to_csv(rows)
    if output:
        with open(output, 'w') as f:
            f.write(text)
    else:
        click.echo(text, nl=False)

    point = crossover(rows)
    click.echo(f"crossover: {point if point is not None else 'none'}")
    click.echo(f"c_F: {fitted_c_f(rows):.3f} (configured {solver.c_f})")
    click.echo(f"superlogarithmic: {superlogarithmic_trend(rows)}")
    disagreeing = [row.n for row in rows if not row.agree]
    if disagreeing:
        if solver.k_override is None:
            raise InvariantViolation(f"solver and naive oracle disagree at n={disagreeing}")
        # an overridden threshold drops the exactness guarantee
        logger.warning(f"Solver with k={solver.k_override} missed the minimum at n={disagreeing}")
        click.echo(f"disagreements: {disagreeing}")


def main():
    cli(prog_name='steinercut')


if __name__ == '__main__':
    main()
