import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from fractions import Fraction

import pytest
import yaml

from steinercut.config.config import BenchConfig, ConfigManager, SolverConfig
from steinercut.core.errors import InvalidArgumentError


def test_defaults_validate():
    manager = ConfigManager()
    assert manager.solver.psi == Fraction(1, 64)
    assert manager.solver.c_l == 4
    assert manager.validate_config()


def test_overrides_parse_rationals():
    config = SolverConfig().with_overrides(psi="1/32", c_l="2", brute_cap=None, k_override=3)
    assert config.psi == Fraction(1, 32)
    assert config.c_l == Fraction(2)
    assert config.brute_cap == 22
    assert config.k_override == 3
    with pytest.raises(InvalidArgumentError):
        SolverConfig().with_overrides(psi="1/3")


def test_save_and_load_round_trip(tmp_path):
    path = str(tmp_path / "config.yaml")
    manager = ConfigManager()
    manager.solver = manager.solver.with_overrides(psi="1/16", brute_cap=12, unbalanced_strategy="sweep")
    manager.bench = BenchConfig(family="grid", sizes=[16, 36], seed=5, terminal_fraction=Fraction(1, 4), k=2)
    manager.save_config(path)

    with open(path) as f:
        raw = yaml.safe_load(f)
    assert raw["solver"]["psi"] == "1/16"

    loaded = ConfigManager(path)
    assert loaded.solver == manager.solver
    assert loaded.bench.family == "grid"
    assert loaded.bench.sizes == [16, 36]
    assert loaded.bench.terminal_fraction == Fraction(1, 4)
    assert loaded.bench.k == 2
    assert loaded.validate_config()


def test_missing_file_keeps_defaults(tmp_path):
    manager = ConfigManager(str(tmp_path / "absent.yaml"))
    assert manager.solver == SolverConfig()


@pytest.mark.parametrize("overrides", [
    {"psi": "1"},
    {"c_s": "0"},
    {"brute_cap": 40},
    {"k_override": 0},
    {"unbalanced_strategy": "random"},
])
def test_invalid_configs(overrides):
    manager = ConfigManager()
    manager.solver = manager.solver.with_overrides(**overrides)
    assert not manager.validate_config()


def test_invalid_bench_sizes():
    manager = ConfigManager()
    manager.bench = BenchConfig(sizes=[3])
    assert not manager.validate_config()


def test_invalid_bench_threshold():
    manager = ConfigManager()
    manager.bench = BenchConfig(k=0)
    assert not manager.validate_config()
