"""Prometheus metrics for solver runs."""
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List, Optional
import json
import logging
import os

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, start_http_server

from ..solver.steiner import SteinerResult

logger = logging.getLogger(__name__)


@dataclass
class RunRecord:
    command: str
    value: int
    flow_calls: int
    flow_calls_batched: int
    rounds_per_game: List[int]
    recursion_depth: int
    wall_time_ms: int
    finished: datetime = field(default_factory=datetime.now)


class SolverMetrics:
    def __init__(self, metrics_port: Optional[int] = None):
        self.metrics_port = metrics_port
        self.registry = CollectorRegistry()
        self.runs: List[RunRecord] = []

        self.flow_calls = Counter(
            'steinercut_flow_calls_total',
            'Individual max-flow calls',
            ['command'],
            registry=self.registry
        )
        self.flow_calls_batched = Counter(
            'steinercut_flow_calls_batched_total',
            'Max-flow calls counted once per batch',
            ['command'],
            registry=self.registry
        )
        self.game_rounds = Histogram(
            'steinercut_cut_game_rounds',
            'Rounds played per cut-matching game',
            buckets=(1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48),
            registry=self.registry
        )
        self.solve_time = Histogram(
            'steinercut_solve_seconds',
            'Wall time per solve',
            ['command'],
            registry=self.registry
        )
        self.recursion_depth = Gauge(
            'steinercut_recursion_depth',
            'Deepest decomposition recursion of the last run',
            registry=self.registry
        )

        if metrics_port:
            start_http_server(metrics_port, registry=self.registry)
            logger.info(f"Metrics server started on port {metrics_port}")

    def record_result(self, command: str, result: SteinerResult):
        """Record metrics for one solver run"""
        record = RunRecord(command=command, value=result.value, flow_calls=result.flow_calls,
                           flow_calls_batched=result.flow_calls_batched,
                           rounds_per_game=list(result.rounds_per_game),
                           recursion_depth=result.recursion_depth,
                           wall_time_ms=result.wall_time_ms)
        self.runs.append(record)

        self.flow_calls.labels(command=command).inc(result.flow_calls)
        self.flow_calls_batched.labels(command=command).inc(result.flow_calls_batched)
        for rounds in result.rounds_per_game:
            self.game_rounds.observe(rounds)
        self.solve_time.labels(command=command).observe(result.wall_time_ms / 1000)
        self.recursion_depth.set(result.recursion_depth)

    def sample(self, name: str, labels: Optional[Dict[str, str]] = None) -> Optional[float]:
        return self.registry.get_sample_value(name, labels or {})

    def export_metrics(self, export_path: str):
        """Export run records to a JSON file"""
        metrics_data = [
            {
                "command": r.command,
                "value": r.value,
                "flow_calls": r.flow_calls,
                "flow_calls_batched": r.flow_calls_batched,
                "rounds_per_game": r.rounds_per_game,
                "recursion_depth": r.recursion_depth,
                "wall_time_ms": r.wall_time_ms,
                "finished": r.finished.isoformat()
            }
            for r in self.runs
        ]

        directory = os.path.dirname(export_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(export_path, 'w') as f:
            json.dump(metrics_data, f, indent=2)
