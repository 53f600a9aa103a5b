"""Run statistics and benchmark summaries."""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence
import csv
import io
import json
import logging
import math

from ..solver.steiner import SteinerResult

logger = logging.getLogger(__name__)


@dataclass
class RunStats:
    flow_calls_individual: int
    flow_calls_batched_by_level: int
    rounds_per_game: List[int] = field(default_factory=list)
    recursion_depth: int = 0
    wall_time_ms: int = 0
    result_value: int = 0
    lambda_guess_used: Optional[int] = None
    fallbacks: int = 0
    guesses: List[Dict[str, Any]] = field(default_factory=list)

    @classmethod
    def from_result(cls, result: SteinerResult) -> "RunStats":
        return cls(flow_calls_individual=result.flow_calls,
                   flow_calls_batched_by_level=result.flow_calls_batched,
                   rounds_per_game=list(result.rounds_per_game),
                   recursion_depth=result.recursion_depth,
                   wall_time_ms=result.wall_time_ms,
                   result_value=result.value,
                   lambda_guess_used=result.lambda_guess_used,
                   fallbacks=result.fallbacks,
                   guesses=[{"guess": t.guess, "sizes": list(t.sizes), "fallback": t.fallback}
                            for t in result.iterations])

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def save(self, path: str) -> None:
        with open(path, 'w') as f:
            f.write(self.to_json())


@dataclass
class BenchRow:
    n: int
    terminals: int
    total_weight: int
    flow_calls: int
    flow_calls_batched: int
    naive_calls: int
    value: int
    naive_value: int
    wall_time_ms: int

    @property
    def agree(self) -> bool:
        return self.value == self.naive_value


def crossover(rows: Sequence[BenchRow]) -> Optional[int]:
    """Smallest n from which every row uses fewer flows than |T| - 1."""
    found = None
    for row in sorted(rows, key=lambda r: r.n):
        if row.flow_calls < row.terminals - 1:
            if found is None:
                found = row.n
        else:
            found = None
    return found


def fitted_c_f(rows: Sequence[BenchRow]) -> float:
    """Smallest c with flow_calls <= c * log2(n)^2 * log2(W_total) on every row."""
    best = 0.0
    for row in rows:
        scale = math.log2(max(row.n, 2)) ** 2 * max(math.log2(max(row.total_weight, 2)), 1.0)
        best = max(best, row.flow_calls / scale)
    return best


def superlogarithmic_trend(rows: Sequence[BenchRow]) -> bool:
    """True when doubling n more than doubles the flow calls twice in a row."""
    ordered = sorted(rows, key=lambda r: r.n)
    streak = 0
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.n >= 2 * prev.n and cur.flow_calls > 2 * prev.flow_calls:
            streak += 1
            if streak >= 2:
                return True
        else:
            streak = 0
    return False


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buffer = io.StringIO()
    names = ["n", "terminals", "total_weight", "flow_calls", "flow_calls_batched",
             "naive_calls", "value", "naive_value", "agree", "wall_time_ms"]
    writer = csv.DictWriter(buffer, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        data = asdict(row)
        data["agree"] = row.agree
        writer.writerow(data)
    return buffer.getvalue()
