"""Per-run metric collection and windowed stability proxies."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..scheduler import SystemState


@dataclass
class MetricsLog:
    """Stride-sampled metrics of one replication plus the full per-tick mean.

    ``departures`` and ``weight_changes`` are cumulative totals over all
    queues.  ``trace[t - 1]`` is the mean queue length after tick ``t``.
    """

    replication: int
    tick: list[int] = field(default_factory=list)
    mean_q: list[float] = field(default_factory=list)
    max_q: list[int] = field(default_factory=list)
    departures: list[int] = field(default_factory=list)
    weight_changes: list[int] = field(default_factory=list)
    trace: np.ndarray = field(default_factory=lambda: np.zeros(0))
    arrived: np.ndarray | None = None
    departed: np.ndarray | None = None
    final_q: np.ndarray | None = None

    def __len__(self):
        return len(self.tick)

    def tail_mean(self, fraction: float = 0.5) -> float:
        return tail_mean(self.trace, fraction)


class MetricsRecorder:
    """Observer filling a :class:`MetricsLog`.

    Rows are taken every ``stride`` ticks and at the final tick.
    """

    def __init__(self, n: int, steps: int, stride: int, replication: int = 0):
        if stride < 1:
            raise ValueError("stride must be >= 1")
        self.n = n
        self.steps = steps
        self.stride = stride
        self.log = MetricsLog(replication, trace=np.zeros(steps))
        self.log.arrived = np.zeros(n, dtype=np.int64)
        self.log.departed = np.zeros(n, dtype=np.int64)
        self._changes = 0

    def __call__(self, state: SystemState):
        log = self.log
        t = state.tick
        log.arrived += state.arrivals
        log.departed += state.served
        self._changes += int(state.changed.sum())
        mean = float(state.q.sum()) / self.n
        log.trace[t - 1] = mean
        if t % self.stride == 0 or t == self.steps:
            log.tick.append(t)
            log.mean_q.append(mean)
            log.max_q.append(int(state.q.max()))
            log.departures.append(int(log.departed.sum()))
            log.weight_changes.append(self._changes)
        if t == self.steps:
            log.final_q = state.q.copy()
        return None


def tail_mean(trace, fraction: float = 0.5) -> float:
    trace = np.asarray(trace, dtype=float)
    start = int(len(trace) * (1 - fraction))
    return float(trace[start:].mean())


def window_mean(trace, lo: float, hi: float) -> float:
    trace = np.asarray(trace, dtype=float)
    n = len(trace)
    return float(trace[int(n * lo) : max(int(n * hi), int(n * lo) + 1)].mean())


def drift_ratio(trace) -> float:
    """Second-half average over the average of the middle fifth."""
    middle = window_mean(trace, 0.4, 0.6)
    tail = window_mean(trace, 0.5, 1.0)
    if middle == 0:
        return 1.0 if tail == 0 else np.inf
    return tail / middle


def is_stable(trace, factor: float = 2.0) -> bool:
    return drift_ratio(trace) <= factor


def quarter_means(trace) -> list[float]:
    return [window_mean(trace, k / 4, (k + 1) / 4) for k in range(4)]


def monotone_growth(trace, rel: float = 0.1) -> bool:
    """True if each of the last three quarter-averages beats the previous by more than ``rel``."""
    q = quarter_means(trace)[1:]
    return all(b > a * (1 + rel) for a, b in zip(q, q[1:]))
