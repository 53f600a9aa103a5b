"""Configuration management for the Steiner cut solver."""
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional
import yaml
import logging
import os

from ..utils.dyadic import format_rational, parse_dyadic

logger = logging.getLogger(__name__)

_RATIONAL_FIELDS = ("psi", "c_l", "c_s", "c_ic")


@dataclass(frozen=True)
class SolverConfig:
    """Tunable constants of the decomposition and the solver."""
    psi: Fraction = Fraction(1, 64)  # Terminal-sparsity factor of the cut game
    c_l: Fraction = Fraction(4)  # L_max = ceil(c_l * log2|T|) + 2
    c_s: Fraction = Fraction(1)  # s = ceil(c_s * (L_max/psi)^2 * ceil(log2 n)^2)
    c_ic: Fraction = Fraction(2)  # Intercluster bound C_ic * psi * delta * |T| * log2|T|
    c_f: int = 4  # Reported flow budget c_F * log2(n)^2
    brute_cap: int = 22  # Largest vertex count accepted by exhaustive certifiers
    max_weight: int = 2 ** 40  # W_max for parsed and generated graphs
    removal_divisor: int = 100  # Degree threshold delta/removal_divisor in gamma refinement
    intercluster_divisor: int = 50  # Strong partition bound n*delta/intercluster_divisor
    gamma_divisor: int = 200  # gamma = 1/(gamma_divisor * alpha * s)
    k_override: Optional[int] = None  # Replaces k = ceil(2 s^2 / gamma) when set
    unbalanced_strategy: str = "auto"  # "auto", "family" or "sweep"
    check_invariants: bool = True  # Raise on broken internal guarantees

    def with_overrides(self, **overrides: Any) -> "SolverConfig":
        """Copy with the given non-None values replaced."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        for name in _RATIONAL_FIELDS:
            if name in changes:
                changes[name] = parse_dyadic(changes[name])
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            data[f.name] = format_rational(value) if f.name in _RATIONAL_FIELDS else value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolverConfig":
        default = cls()
        values: Dict[str, Any] = {}
        for f in fields(cls):
            raw = data.get(f.name, getattr(default, f.name))
            values[f.name] = parse_dyadic(raw) if f.name in _RATIONAL_FIELDS else raw
        return cls(**values)


@dataclass
class BenchConfig:
    """Defaults for the ``bench`` command."""
    family: str = "planted_cut"
    sizes: List[int] = field(default_factory=lambda: [50, 100, 200])
    seed: int = 0
    terminal_fraction: Fraction = Fraction(1, 2)
    k: Optional[int] = None  # Unbalanced threshold for bench runs when --k-override is absent


class ConfigManager:
    """Loads and saves solver configuration from a YAML file."""
    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path
        self.solver = SolverConfig()
        self.bench = BenchConfig()
        if config_path:
            self._load_config()

    def _load_config(self):
        """Load configuration from YAML file."""
        try:
            if not os.path.exists(self.config_path):
                logger.warning(f"Config file not found at {self.config_path}")
                return

            with open(self.config_path, 'r') as f:
                config = yaml.safe_load(f) or {}

            if 'solver' in config:
                self.solver = SolverConfig.from_dict(config['solver'] or {})

            if 'bench' in config:
                bench_config = config['bench'] or {}
                self.bench = BenchConfig(
                    family=bench_config.get('family', 'planted_cut'),
                    sizes=list(bench_config.get('sizes', [50, 100, 200])),
                    seed=bench_config.get('seed', 0),
                    terminal_fraction=Fraction(str(bench_config.get('terminal_fraction', '1/2'))),
                    k=bench_config.get('k')
                )

        except Exception as e:
            logger.error(f"Error loading configuration: {e}")
            raise

    def save_config(self, path: Optional[str] = None):
        """Save current configuration to YAML file."""
        target = path or self.config_path
        try:
            config = {
                'solver': self.solver.to_dict(),
                'bench': {
                    'family': self.bench.family,
                    'sizes': list(self.bench.sizes),
                    'seed': self.bench.seed,
                    'terminal_fraction': format_rational(self.bench.terminal_fraction),
                    'k': self.bench.k
                }
            }

            with open(target, 'w') as f:
                yaml.safe_dump(config, f, default_flow_style=False)

        except Exception as e:
            logger.error(f"Error saving configuration: {e}")
            raise

    def validate_config(self) -> bool:
        """Validate the current configuration."""
        try:
            solver = self.solver
            if not 0 < solver.psi < 1:
                logger.error("psi must lie strictly between 0 and 1")
                return False

            if solver.c_l <= 0 or solver.c_s <= 0 or solver.c_ic <= 0:
                logger.error("c_l, c_s and c_ic must be positive")
                return False

            if solver.brute_cap < 2 or solver.brute_cap > 30:
                logger.error("brute_cap must be between 2 and 30")
                return False

            if solver.max_weight <= 0:
                logger.error("max_weight must be positive")
                return False

            for name in ("removal_divisor", "intercluster_divisor", "gamma_divisor", "c_f"):
                if getattr(solver, name) <= 0:
                    logger.error(f"{name} must be positive")
                    return False

            if solver.k_override is not None and solver.k_override < 1:
                logger.error("k_override must be at least 1")
                return False

            if solver.unbalanced_strategy not in ["auto", "family", "sweep"]:
                logger.error("Invalid unbalanced-case strategy")
                return False

            if not 0 < self.bench.terminal_fraction <= 1:
                logger.error("Bench terminal fraction must lie in (0, 1]")
                return False

            if self.bench.k is not None and self.bench.k < 1:
                logger.error("Bench k must be at least 1")
                return False

            if any(size < 6 for size in self.bench.sizes):
                logger.error("Bench sizes must be at least 6")
                return False

            return True

        except Exception as e:
            logger.error(f"Error validating configuration: {e}")
            return False
