"""The scheduling loop: oracle query, arrivals, service, weight update."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import ArrivalProcess, Topology, departures, is_feasible
from .oracles import Advice, Oracle
from .weights import WeightFunctions, compute_U, round_half_away, update_weights


class InvariantViolation(RuntimeError):
    def __init__(self, tick: int, message: str):
        super().__init__(f"tick {tick}: {message}")
        self.tick = tick


@dataclass(frozen=True)
class SystemState:
    """Chain state ``(sched, weights, advice, q)`` at time ``tick``.

    ``arrivals``, ``served`` and ``changed`` describe the transition that
    produced this state (``None`` for an initial state).  They are diagnostics
    for observers and not part of the Markov state.
    """

    sched: np.ndarray
    weights: np.ndarray
    advice: Advice
    q: np.ndarray
    tick: int = 0
    arrivals: np.ndarray | None = None
    served: np.ndarray | None = None
    changed: np.ndarray | None = None

    @property
    def q_max(self) -> int:
        return int(self.q.max())


Observer = Callable[[SystemState], object]


@dataclass
class Scheduler:
    topo: Topology
    wf: WeightFunctions
    oracle: Oracle

    def init_state(self) -> SystemState:
        """Empty queues, empty schedule, ``W = round(U(0))`` and zero advice."""
        q = np.zeros(self.topo.n, dtype=np.int64)
        w = round_half_away(compute_U(self.wf, q)).astype(np.int64)
        sched = np.zeros(self.topo.n, dtype=np.int8)
        return SystemState(sched, w, self.oracle.initial_advice(), q)

    def tick(self, state: SystemState, proc: ArrivalProcess, rng: np.random.Generator | None = None) -> SystemState:
        """Advance one slot.

        The oracle output becomes the schedule of the *next* slot; service in
        this slot uses the schedule already in ``state``.
        """
        out = self.oracle.step(state.weights, state.advice, rng)
        arrivals = proc.sample()
        served = departures(state.q, state.sched)
        q = state.q + arrivals - served
        w, changed = update_weights(state.weights, compute_U(self.wf, q))
        return SystemState(out.sched, w, out.advice, q, state.tick + 1, arrivals, served, changed)

    def run(
        self,
        state: SystemState,
        steps: int,
        proc: ArrivalProcess,
        rng: np.random.Generator | None = None,
        observers: list[Observer] = (),
    ) -> tuple[SystemState, list]:
        """Apply ``steps`` ticks, calling each observer after every tick.

        Whatever an observer returns (other than ``None``) is appended to the
        log.  An observer raising ``InvariantViolation`` aborts the run.
        """
        if steps < 0:
            raise ValueError("steps must be non-negative")
        log = []
        for _ in range(steps):
            state = self.tick(state, proc, rng)
            for obs in observers:
                rec = obs(state)
                if rec is not None:
                    log.append(rec)
        return state, log


class InvariantChecker:
    """Observer asserting the state-space conditions after every tick.

    Checks schedule feasibility, ``|W_i - U_i| <= 2``, non-negative integer
    queues, unit-bounded queue changes, service only from active non-empty
    queues, and per-queue conservation ``Q(t) = arrivals - departures``
    accumulated from the starting state.
    """

    def __init__(self, topo: Topology, wf: WeightFunctions, start: SystemState):
        self.topo = topo
        self.wf = wf
        self.prev = start
        self.arrived = np.zeros(topo.n, dtype=np.int64)
        self.departed = np.zeros(topo.n, dtype=np.int64)
        self.q0 = start.q.copy()

    def __call__(self, state: SystemState):
        t = state.tick
        prev = self.prev
        if not is_feasible(self.topo, state.sched):
            raise InvariantViolation(t, "infeasible schedule")
        if np.any(state.q < 0) or np.any(state.weights < 0):
            raise InvariantViolation(t, "negative queue or weight")
        gap = np.abs(state.weights - compute_U(self.wf, state.q))
        if np.any(gap > 2):
            raise InvariantViolation(t, f"|W - U| = {gap.max():.3f} > 2")
        if np.any(np.abs(state.q - prev.q) > 1):
            raise InvariantViolation(t, "queue moved by more than one packet")
        if np.any(state.served > prev.sched) or np.any(state.served > (prev.q > 0)):
            raise InvariantViolation(t, "service from an inactive or empty queue")
        self.arrived += state.arrivals
        self.departed += state.served
        if not np.array_equal(state.q, self.q0 + self.arrived - self.departed):
            raise InvariantViolation(t, "arrival/departure conservation broken")
        self.prev = state
        return None
