"""Acceptance suite: one test per primary criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines
interleaved with pytest's own report.  The long stability runs are marked
``slow``.
"""
import time

import numpy as np
import pytest

from oraclesched.cli import main
from oraclesched.conditions import Constant, ExpLinear, LinearOverGap, RandomSearch, check_conditions
from oraclesched.harness import ExperimentConfig, drift_ratio, monotone_growth, run_experiment
from oraclesched.harness.experiment import parse_topology, stream
from oraclesched.harness.load import load_for
from oraclesched.model import (
    ArrivalProcess,
    enumerate_schedules,
    grid_topology,
    interference_topology,
    max_weight_by_enumeration,
    schedule_code,
    switch_topology,
)
from oraclesched.oracles import (
    KINDS,
    MCMCAdvice,
    Oracle,
    bp_horizon,
    es_step,
    initial_advice,
    make_perturbation,
    mcmc_step,
    run_bp,
)
from oraclesched.scheduler import InvariantChecker, Scheduler
from oraclesched.weights import WeightFunctions


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[acceptance] {'PASS' if ok else 'FAIL'}  {name}  {detail}")

    return emit


def test_es_exactness(report):
    start = time.perf_counter()
    topologies = [grid_topology(r, c) for r, c in ((1, 3), (2, 2), (2, 3), (3, 3), (3, 4))]
    topologies += [switch_topology(m) for m in (2, 3)]
    hits = total = 0
    for k, topo in enumerate(topologies):
        rng = np.random.default_rng(1000 + k)
        for _ in range(50):
            w = rng.integers(0, 21, topo.n)
            advice = initial_advice("es", topo)
            for _ in range(2**topo.n):
                advice = es_step(topo, w, advice).advice
            hits += int(advice.incumbent @ w) == max_weight_by_enumeration(topo, w)[1]
            total += 1
    elapsed = time.perf_counter() - start
    ok = hits == total and elapsed < 10
    report("ES exactness", ok, f"{hits}/{total} exact in {elapsed:.1f}s")
    assert hits == total
    assert elapsed < 10


def test_mcmc_stationarity(report):
    start = time.perf_counter()
    topo = interference_topology(5, [(0, k) for k in range(1, 5)])
    w = np.array([1, 2, 0, 1, 2])
    table = enumerate_schedules(topo)
    target = np.exp(table @ w)
    target /= target.sum()
    index = {schedule_code(r): k for k, r in enumerate(table)}
    rng = np.random.default_rng(2024)
    advice = MCMCAdvice(np.zeros(5, np.int8))
    counts = np.zeros(len(table))
    steps = 10**6
    for _ in range(steps):
        advice = mcmc_step(topo, w, advice, rng).advice
        counts[index[schedule_code(advice.sched)]] += 1
    tv = 0.5 * np.abs(counts / steps - target).sum()
    elapsed = time.perf_counter() - start
    report("MCMC stationarity", tv < 0.05 and elapsed < 30, f"TV={tv:.4f} in {elapsed:.1f}s")
    assert tv < 0.05
    assert elapsed < 30


def test_bp_optimality(report):
    start = time.perf_counter()
    hits = total = 0
    for m in (2, 3, 4):
        topo = switch_topology(m)
        pert = make_perturbation(m)
        rng = np.random.default_rng(300 + m)
        for _ in range(100):
            w = rng.integers(0, 11, topo.n)
            steps = bp_horizon(m, int(w.max()), pert.xi)
            out = run_bp(topo, w, pert, steps)
            wp = w + pert.r
            best, _ = max_weight_by_enumeration(topo, wp)
            hits += np.array_equal(out.sched, best)
            total += 1
    elapsed = time.perf_counter() - start
    ok = hits == total and elapsed < 30
    report("BP optimality", ok, f"{hits}/{total} optimal in {elapsed:.1f}s")
    assert hits == total
    assert elapsed < 30


def _traces(oracle, topology, load, replications, seed=0):
    cfg = ExperimentConfig(
        topology=topology, oracle=oracle, load=load, steps=100_000,
        replications=replications, seed=seed, stride=1000, check_invariants=False,
    )
    return [log.trace for log in run_experiment(cfg).logs]


@pytest.mark.slow
def test_switch_stability_and_ordering(report):
    start = time.perf_counter()
    traces = {k: _traces(k, "switch:10", 0.9, 5) for k in ("mw", "bp-greedy", "es", "mcmc")}
    elapsed = time.perf_counter() - start
    drifts = {k: [drift_ratio(t) for t in traces[k]] for k in ("mw", "bp-greedy")}
    stable = all(d <= 2 for v in drifts.values() for d in v)
    tails = {k: np.mean([t[len(t) // 2 :].mean() for t in v]) for k, v in traces.items()}
    ordered = tails["bp-greedy"] <= 3 * tails["mw"]
    growth = {k: sum(monotone_growth(t) for t in traces[k]) for k in ("es", "mcmc")}
    bounded = not any(growth.values())
    report("switch (a) MW/BP-greedy stable", stable,
           " ".join(f"{k}:max drift {max(v):.3f}" for k, v in drifts.items()))
    report("switch (b) BP-greedy <= 3x MW", ordered,
           f"tail means mw={tails['mw']:.1f} bp-greedy={tails['bp-greedy']:.1f}")
    report("switch (c) ES/MCMC bounded", bounded,
           " ".join(f"{k}:{g}/5 replications grow, tail {tails[k]:.0f}" for k, g in growth.items()))
    report("switch runtime < 10 min", elapsed < 600, f"{elapsed:.0f}s")
    assert stable
    assert ordered
    assert elapsed < 600
    assert bounded


@pytest.mark.slow
def test_grid_stability(report):
    start = time.perf_counter()
    drifts = {k: drift_ratio(_traces(k, "grid:4x4", 0.9, 1)[0]) for k in ("mw", "bp-es", "es", "mcmc")}
    elapsed = time.perf_counter() - start
    ok = all(d <= 2 for d in drifts.values())
    report("grid stability", ok and elapsed < 600,
           " ".join(f"{k}:{d:.3f}" for k, d in drifts.items()) + f" in {elapsed:.0f}s")
    assert ok
    assert elapsed < 600


def _omega_cases():
    for kind in KINDS:
        yield kind, "switch:3"
        if kind not in ("bp", "bp-greedy"):
            yield kind, "grid:2x3"


@pytest.mark.parametrize("kind,where", list(_omega_cases()))
def test_omega_invariant(kind, where, report):
    cfg = ExperimentConfig(topology=where, oracle=kind, load=0.9, steps=10_000, seed=7)
    topo = parse_topology(where)
    wf = cfg.weight_functions()
    pert = make_perturbation(topo.ports) if kind in ("bp", "bp-greedy") else None
    sched = Scheduler(topo, wf, Oracle(kind, topo, pert))
    state = sched.init_state()
    checker = InvariantChecker(topo, wf, state)
    proc = ArrivalProcess(load_for(topo, 0.9).rates, stream(7, 0, 0))
    violations = []

    def collect(s):
        try:
            checker(s)
        except Exception as exc:  # record every tick's failure instead of stopping
            violations.append(exc)

    final, _ = sched.run(state, 10_000, proc, stream(7, 0, 1), [collect])
    report(f"omega invariant {kind} on {where}", not violations and final.tick == 10_000,
           f"{len(violations)} violations")
    assert final.tick == 10_000
    assert not violations


CONDITION_CASES = [
    ("power 1/2,1/4 constant h", WeightFunctions("power", 0.5, 0.25), Constant(2**16), []),
    ("logpower 0.5,0.3 explinear h", WeightFunctions("logpower", 0.5, 0.3), ExpLinear(16, 16), []),
    ("power 0.4,0.3 lineargap h", WeightFunctions("power", 0.4, 0.3), LinearOverGap(1.0), []),
    ("power 1/2,1/4 randomsearch h", WeightFunctions("power", 0.5, 0.25), RandomSearch(16), []),
    ("violation a=b", WeightFunctions("power", 0.3, 0.3), Constant(2**16), ["C2"]),
    ("violation b<a^2/(1-a)", WeightFunctions("power", 0.4, 0.2), LinearOverGap(1.0), ["C6"]),
]


@pytest.mark.parametrize("name,wf,horizon,expected", CONDITION_CASES, ids=[c[0] for c in CONDITION_CASES])
def test_condition_checker(name, wf, horizon, expected, report):
    rep = check_conditions(wf, horizon)
    report(f"conditions {name}", rep.failed == expected, f"failing={rep.failed or 'none'}")
    assert rep.failed == expected


def test_cli_determinism(tmp_path, report):
    outputs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        argv = ["run", "--topology", "switch:3", "--oracle", "bp-greedy", "--steps", "2000",
                "--replications", "3", "--seed", "11", "--stride", "10", "--out-dir", str(out)]
        assert main(argv) == 0
        outputs.append([(out / n).read_bytes() for n in ("bp-greedy_runs.csv", "bp-greedy_aggregate.csv")])
    ok = outputs[0] == outputs[1]
    report("CLI determinism", ok, "byte-identical" if ok else "outputs differ")
    assert ok
