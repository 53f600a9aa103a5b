import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

import json

import pytest
from click.testing import CliRunner

from steinercut.core.certify import brute_force_min_steiner_cut
from steinercut.core.errors import InvalidArgumentError, ParseError
from steinercut.harness.cli import cli
from steinercut.harness.dimacs import emit_graph, parse_graph, read_graph
from steinercut.harness.generators import FAMILIES, generate
from steinercut.harness.metrics import SolverMetrics
from steinercut.harness.stats import (BenchRow, RunStats, crossover, fitted_c_f, rows_to_csv,
                                      superlogarithmic_trend)
from steinercut.solver.steiner import min_steiner_cut
from strategies import dumbbell

TRIANGLE = """c example
p steiner 3 3
e 1 2 1
e 2 3 1
e 1 3 1
t 1
t 3
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_parse_triangle():
    g = parse_graph(TRIANGLE)
    assert g.vertex_count == 3
    assert g.edges == ((0, 1, 1), (1, 2, 1), (0, 2, 1))
    assert g.terminals == frozenset({0, 2})


@pytest.mark.parametrize("text,line", [
    ("p steiner 2 1\ne 1 3 5\n", 2),
    ("p steiner 2 1\ne 1 1 5\n", 2),
    ("p steiner 2 1\ne 1 2 0\n", 2),
    ("p steiner 2 1\ne 1 2 x\n", 2),
    ("p steiner 2 1\ne 1 2\n", 2),
    ("p steiner 2 0\nt 1\nt 1\n", 3),
    ("p steiner 2 0\nt 3\n", 2),
    ("p steiner 2 0\nq 1\n", 2),
    ("e 1 2 1\n", 1),
    ("p steiner 2 0\np steiner 2 0\n", 2),
    ("p maxflow 2 0\n", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    assert info.value.line_number == line
    assert str(info.value).startswith(f"line {line}: ")


def test_parse_errors_without_line():
    with pytest.raises(ParseError):
        parse_graph("c only a comment\n")
    with pytest.raises(ParseError):
        parse_graph("p steiner 2 2\ne 1 2 1\n")
    with pytest.raises(ParseError):
        parse_graph("p steiner 2 1\ne 1 2 9\n", max_weight=8)


@pytest.mark.parametrize("kind", FAMILIES)
def test_emit_then_parse(kind, tmp_path):
    params = {"n": 10} if kind in ("random_gnm", "planted_cut", "clique") else {}
    g = generate(kind, params, seed=7).graph
    text = emit_graph(g, comment=f"{kind}\nseed 7")
    assert text.startswith("c ")
    assert parse_graph(text) == g
    assert read_graph(write(tmp_path, "g.dimacs", text)) == g


def test_generators_are_deterministic():
    first = generate("random_gnm", {"n": 15, "m": 30}, seed=4)
    second = generate("random_gnm", {"n": 15, "m": 30}, seed=4)
    assert first.graph == second.graph
    assert first.known_lambda is None
    assert len(first.graph.terminals) == 8


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_planted_cut_value(seed):
    instance = generate("planted_cut", {"n": 12, "cut_w": 3, "inside_w": 4, "chords": "1/2"}, seed)
    value, _ = brute_force_min_steiner_cut(instance.graph)
    assert value == instance.known_lambda == 3


def test_generator_arguments():
    with pytest.raises(InvalidArgumentError):
        generate("hypercube")
    with pytest.raises(InvalidArgumentError):
        generate("random_gnm", {"n": 4, "m": 10})
    with pytest.raises(InvalidArgumentError):
        generate("planted_cut", {"cut_w": 20, "inside_w": 10})
    with pytest.raises(InvalidArgumentError):
        generate("dumbbell", {"terminals": "near"})
    with pytest.raises(InvalidArgumentError):
        generate("clique", {"n": 5, "w": 3}, max_weight=2)
    assert generate("clique", {"n": 5, "w": 3}, max_weight=3).graph.total_weight == 30


def rows(flows, ns=(10, 20, 40), terminals=None):
    terminals = terminals or [n // 2 for n in ns]
    return [BenchRow(n=n, terminals=t, total_weight=4 * n, flow_calls=f, flow_calls_batched=f,
                     naive_calls=t - 1, value=1, naive_value=1, wall_time_ms=1)
            for n, t, f in zip(ns, terminals, flows)]


def test_crossover():
    assert crossover(rows([6, 8, 10])) == 20
    assert crossover(rows([6, 8, 10, 100], ns=(10, 20, 40, 80))) is None
    assert crossover(rows([1, 2, 3])) == 10


def test_trend_and_constant():
    assert superlogarithmic_trend(rows([2, 5, 11]))
    assert not superlogarithmic_trend(rows([2, 3, 4]))
    single = [BenchRow(n=4, terminals=2, total_weight=4, flow_calls=8, flow_calls_batched=8,
                       naive_calls=1, value=1, naive_value=1, wall_time_ms=0)]
    assert fitted_c_f(single) == pytest.approx(1.0)


def test_rows_to_csv():
    text = rows_to_csv(rows([6, 8, 10]))
    lines = text.strip().split("\n")
    assert lines[0].startswith("n,terminals,total_weight,flow_calls")
    assert len(lines) == 4
    assert lines[1].endswith("True,1")


def test_run_stats_and_metrics(tmp_path):
    result = min_steiner_cut(dumbbell())
    stats = RunStats.from_result(result)
    data = json.loads(stats.to_json())
    assert data["result_value"] == 1
    assert data["flow_calls_individual"] == result.flow_calls
    assert [g["guess"] for g in data["guesses"]] == [1, 2, 4, 8]

    metrics = SolverMetrics()
    metrics.record_result("solve", result)
    assert metrics.sample("steinercut_flow_calls_total", {"command": "solve"}) == result.flow_calls
    assert metrics.sample("steinercut_recursion_depth") == result.recursion_depth
    path = str(tmp_path / "out" / "metrics.json")
    metrics.export_metrics(path)
    with open(path) as f:
        exported = json.load(f)
    assert exported[0]["command"] == "solve"
    assert exported[0]["value"] == 1


def test_cli_solve_and_oracles(tmp_path):
    runner = CliRunner()
    graph = str(tmp_path / "dumbbell.dimacs")
    result = runner.invoke(cli, ["gen", "--family", "dumbbell", "--seed", "1", "--output", graph])
    assert result.exit_code == 0, result.output

    stats = str(tmp_path / "stats.json")
    result = runner.invoke(cli, ["solve", "--input", graph, "--stats", stats, "--log-level", "WARNING"])
    assert result.exit_code == 0, result.output
    assert "value: 1" in result.output
    with open(stats) as f:
        assert json.load(f)["result_value"] == 1

    result = runner.invoke(cli, ["naive", "--input", graph])
    assert result.exit_code == 0
    assert "value: 1" in result.output

    result = runner.invoke(cli, ["brute", "--input", graph])
    assert result.exit_code == 0
    assert "value: 1" in result.output
    assert "side: {1, 2, 3}" in result.output


def test_cli_decompose_and_partition(tmp_path):
    runner = CliRunner()
    graph = write(tmp_path, "dumbbell.dimacs", emit_graph(dumbbell()))
    result = runner.invoke(cli, ["decompose", "--input", graph, "--delta", "1024"])
    assert result.exit_code == 0, result.output
    assert "clusters: 2" in result.output
    assert "intercluster weight: 1" in result.output
    assert "flow budget: 36 (within)" in result.output
    assert "verified: True" in result.output

    k4 = "p steiner 4 6\n" + "".join(f"e {i} {j} 1\n" for i in range(1, 5) for j in range(i + 1, 5))
    graph = write(tmp_path, "k4.dimacs", k4)
    result = runner.invoke(cli, ["partition", "--input", graph, "--delta", "2", "--alpha", "64", "--s", "16384"])
    assert result.exit_code == 0, result.output
    assert "clusters: 1" in result.output
    assert "intercluster weight: 0" in result.output
    assert "gamma: 1/209715200" in result.output

    # s below c_s*alpha^2*ceil(log2 n)^2
    result = runner.invoke(cli, ["partition", "--input", graph, "--delta", "2", "--alpha", "2", "--s", "4"])
    assert result.exit_code == 2


def test_cli_exit_codes(tmp_path):
    runner = CliRunner()
    bad = write(tmp_path, "bad.dimacs", "p steiner 2 1\ne 1 3 5\n")
    result = runner.invoke(cli, ["solve", "--input", bad])
    assert result.exit_code == 2

    good = write(tmp_path, "good.dimacs", TRIANGLE)
    result = runner.invoke(cli, ["solve", "--input", good, "--psi", "1/3"])
    assert result.exit_code == 2

    result = runner.invoke(cli, ["decompose", "--input", good, "--delta", "0"])
    assert result.exit_code == 2

    big = write(tmp_path, "path.dimacs", emit_graph(generate("grid", {"rows": 5, "cols": 5}).graph))
    result = runner.invoke(cli, ["brute", "--input", big])
    assert result.exit_code == 1


def test_cli_bench(tmp_path):
    runner = CliRunner()
    out = str(tmp_path / "bench.csv")
    result = runner.invoke(cli, ["bench", "--family", "dumbbell", "--sizes", "6,8", "--output", out])
    assert result.exit_code == 0, result.output
    assert "crossover:" in result.output
    assert "superlogarithmic:" in result.output
    with open(out) as f:
        assert len(f.read().strip().split("\n")) == 3


def test_cli_bench_uses_configured_threshold(tmp_path):
    runner = CliRunner()
    config = write(tmp_path, "config.yaml", "bench:\n  family: dumbbell\n  sizes: [6, 8]\n  k: 2\n")
    result = runner.invoke(cli, ["bench", "--config", config])
    assert result.exit_code == 0, result.output
    assert ",agree," in result.output
    assert "(configured 4)" in result.output
