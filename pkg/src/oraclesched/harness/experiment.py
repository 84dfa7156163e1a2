"""Experiment orchestration: configuration, seeding, replications, aggregation."""
from __future__ import annotations

import re
from dataclasses import dataclass, field, fields

import numpy as np

from ..model import ArrivalProcess, Topology, grid_topology, switch_topology
from ..oracles import KINDS, Oracle, make_perturbation
from ..scheduler import InvariantChecker, Scheduler
from ..weights import FAMILIES, WeightFunctions
from .load import load_for
from .metrics import MetricsLog, MetricsRecorder

ARRIVALS, ORACLE, PERTURBATION = range(3)


class ConfigError(ValueError):
    pass


def parse_topology(text: str) -> Topology:
    """``switch:10`` or ``grid:4x4``."""
    m = re.fullmatch(r"\s*(switch):(\d+)\s*|\s*(grid):(\d+)x(\d+)\s*", text)
    if not m:
        raise ConfigError(f"bad topology {text!r}; use 'switch:M' or 'grid:RxC'")
    if m.group(1):
        return switch_topology(int(m.group(2)))
    return grid_topology(int(m.group(4)), int(m.group(5)))


def default_weight_functions(oracle: str) -> WeightFunctions:
    """``log(x+1)`` / ``log(x+1)**0.1`` for Glauber dynamics, ``x**0.25`` / ``x**0.1`` otherwise."""
    if oracle == "mcmc":
        return WeightFunctions.log_simple(0.1)
    return WeightFunctions("power", 0.25, 0.1)


@dataclass
class ExperimentConfig:
    topology: str = "switch:10"
    oracle: str = "bp-greedy"
    family: str = "auto"
    a: float | None = None
    b: float | None = None
    load: float = 0.9
    steps: int = 100_000
    replications: int = 5
    seed: int = 0
    out_dir: str = "results"
    stride: int = 100
    perturbation: str = "dyadic"
    check_invariants: bool = True
    tail_fraction: float = 0.5

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.oracle not in KINDS:
            raise ConfigError(f"oracle must be one of {KINDS}, got {self.oracle!r}")
        if self.family != "auto" and self.family not in FAMILIES:
            raise ConfigError(f"family must be 'auto' or one of {FAMILIES}")
        if self.steps < 1 or self.stride < 1 or self.replications < 1:
            raise ConfigError("steps, stride and replications must all be >= 1")
        if not 0 <= self.load < 1:
            raise ConfigError("load must lie in [0, 1)")
        if self.perturbation not in ("dyadic", "random"):
            raise ConfigError("perturbation must be 'dyadic' or 'random'")
        if not 0 < self.tail_fraction <= 1:
            raise ConfigError("tail_fraction must lie in (0, 1]")
        parse_topology(self.topology)

    @classmethod
    def from_mapping(cls, values: dict) -> ExperimentConfig:
        """Build from string or typed values, ignoring ``None`` entries."""
        kwargs = {}
        types = {f.name: f.type for f in fields(cls)}
        for key, raw in values.items():
            key = key.replace("-", "_")
            if raw is None:
                continue
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(key, types[key], raw)
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def weight_functions(self) -> WeightFunctions:
        if self.family == "auto":
            wf = default_weight_functions(self.oracle)
        else:
            wf = WeightFunctions(self.family, 1.0 if self.family == "log" else 0.25, 0.1)
        a = wf.a if self.a is None else self.a
        b = wf.b if self.b is None else self.b
        return WeightFunctions(wf.family, a, b)


def _coerce(key, typ, raw):
    if not isinstance(raw, str):
        return raw
    try:
        if "bool" in typ:
            low = raw.strip().lower()
            if low not in ("true", "false", "yes", "no", "1", "0", "on", "off"):
                raise ValueError(raw)
            return low in ("true", "yes", "1", "on")
        if typ.startswith("int"):
            try:
                return int(raw)
            except ValueError:
                val = float(raw)
                if not val.is_integer():
                    raise
                return int(val)
        if "float" in typ:
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return raw.strip()


def stream(seed: int, replication: int, component: int) -> np.random.Generator:
    """Generator for one (replication, component) pair.

    Streams are keyed by counters rather than drawn in sequence, so adding
    replications or components never changes existing streams.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(replication, component))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class Aggregate:
    tick: list[int] = field(default_factory=list)
    mean: list[float] = field(default_factory=list)
    sd: list[float] = field(default_factory=list)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    logs: list[MetricsLog]
    aggregate: Aggregate

    def tail_means(self) -> list[float]:
        return [log.tail_mean(self.config.tail_fraction) for log in self.logs]


def aggregate(logs: list[MetricsLog]) -> Aggregate:
    """Mean and sample standard deviation of ``mean_q`` across replications, per tick."""
    if not logs:
        return Aggregate()
    logs = sorted(logs, key=lambda log: log.replication)
    ticks = logs[0].tick
    if any(log.tick != ticks for log in logs):
        raise ValueError("replications were sampled at different ticks")
    data = np.array([log.mean_q for log in logs], dtype=float)
    sd = data.std(axis=0, ddof=1) if len(logs) > 1 else np.zeros(data.shape[1])
    return Aggregate(list(ticks), data.mean(axis=0).tolist(), sd.tolist())


def run_replication(cfg: ExperimentConfig, replication: int) -> MetricsLog:
    topo = parse_topology(cfg.topology)
    wf = cfg.weight_functions()
    pert = None
    if cfg.oracle in ("bp", "bp-greedy"):
        prng = stream(cfg.seed, replication, PERTURBATION) if cfg.perturbation == "random" else None
        pert = make_perturbation(topo.ports, prng)
    oracle = Oracle(cfg.oracle, topo, pert)
    sched = Scheduler(topo, wf, oracle)
    proc = ArrivalProcess(load_for(topo, cfg.load).rates, stream(cfg.seed, replication, ARRIVALS))
    state = sched.init_state()
    recorder = MetricsRecorder(topo.n, cfg.steps, cfg.stride, replication)
    observers = [recorder]
    if cfg.check_invariants:
        observers.insert(0, InvariantChecker(topo, wf, state))
    sched.run(state, cfg.steps, proc, stream(cfg.seed, replication, ORACLE), observers)
    return recorder.log


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run every replication in order and aggregate.

    Any exception (including invariant violations) propagates and no partial
    result is returned.
    """
    logs = [run_replication(cfg, r) for r in range(cfg.replications)]
    return ExperimentResult(cfg, logs, aggregate(logs))
