"""Constrained queueing network model.

Queues are indexed from 0 internally.  Figures and docstrings that talk about
"queue 1 .. n" use the 1-based numbering, so queue ``k`` there is index
``k - 1`` here.  Schedules are ``int8`` vectors of 0/1 entries.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

GRAPH = "graph"
SWITCH = "switch"

MAX_ENUMERATION_SIZE = 24


@dataclass(frozen=True, eq=False)
class Topology:
    """Queue set plus the structure that decides which schedules are feasible.

    ``kind == "graph"``: an interference graph; a schedule is feasible iff it
    is an independent set.  ``kind == "switch"``: an ``m x m`` input-queued
    switch; queue ``i*m + j`` holds packets from input ``i`` to output ``j`` and
    a schedule is feasible iff it is a partial matching.

    Topologies are immutable and compared by identity, so they can key caches.
    """

    kind: str
    n: int
    edges: tuple[tuple[int, int], ...]
    ports: int | None = None
    rows: int | None = None
    cols: int | None = None
    neighbors: tuple[np.ndarray, ...] = field(init=False, repr=False)
    neighbor_mask: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on queue {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(
            self, "neighbors", tuple(np.array(sorted(s), dtype=np.intp) for s in nbrs)
        )
        object.__setattr__(
            self, "neighbor_mask", tuple(sum(1 << j for j in s) for s in nbrs)
        )

    @property
    def is_switch(self) -> bool:
        return self.kind == SWITCH

    @functools.cached_property
    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.intp).reshape(-1, 2)

    @functools.cached_property
    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        e = self.edge_array
        adj[e[:, 0], e[:, 1]] = True
        adj[e[:, 1], e[:, 0]] = True
        return adj


def interference_topology(n: int, edges) -> Topology:
    """Interference graph on ``n`` queues with the given undirected edges."""
    if n < 1:
        raise ValueError("need at least one queue")
    canon = sorted({(min(u, v), max(u, v)) for u, v in edges})
    return Topology(GRAPH, n, tuple(canon))


def grid_topology(rows: int, cols: int) -> Topology:
    """Grid interference graph, queues numbered row-major.

    Horizontally and vertically adjacent cells interfere.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            k = r * cols + c
            if c + 1 < cols:
                edges.append((k, k + 1))
            if r + 1 < rows:
                edges.append((k, k + cols))
    return Topology(GRAPH, rows * cols, tuple(edges), rows=rows, cols=cols)


def switch_topology(m: int) -> Topology:
    """``m x m`` input-queued switch with ``m**2`` virtual output queues.

    The conflict edges (two queues sharing an input or an output port) are
    stored as well, which makes the switch usable by oracles written for
    interference graphs.
    """
    if m < 1:
        raise ValueError("switch needs at least one port")
    edges = []
    for a in range(m * m):
        ia, ja = divmod(a, m)
        for b in range(a + 1, m * m):
            ib, jb = divmod(b, m)
            if ia == ib or ja == jb:
                edges.append((a, b))
    return Topology(SWITCH, m * m, tuple(edges), ports=m)


def is_feasible(topo: Topology, sched) -> bool:
    s = np.asarray(sched)
    if s.shape != (topo.n,):
        raise ValueError(f"schedule has shape {s.shape}, expected ({topo.n},)")
    if topo.is_switch:
        mat = s.reshape(topo.ports, topo.ports)
        return bool((mat.sum(axis=0) <= 1).all() and (mat.sum(axis=1) <= 1).all())
    if not topo.edges:
        return True
    e = topo.edge_array
    return not bool(np.any(s[e[:, 0]] & s[e[:, 1]]))


def schedule_from_queues(topo: Topology, queues, one_based: bool = False) -> np.ndarray:
    """Build a schedule activating the listed queues."""
    s = np.zeros(topo.n, dtype=np.int8)
    for k in queues:
        s[k - 1 if one_based else k] = 1
    return s


def schedule_code(sched) -> int:
    """Integer code of a schedule: bit ``i`` is queue ``i``."""
    return sum(1 << i for i, b in enumerate(np.asarray(sched)) if b)


def code_to_schedule(code: int, n: int) -> np.ndarray:
    return np.array([(code >> i) & 1 for i in range(n)], dtype=np.int8)


@functools.lru_cache(maxsize=64)
def _schedule_codes(topo: Topology) -> tuple[int, ...]:
    codes = [0]
    for i in range(topo.n):
        bit = 1 << i
        mask = topo.neighbor_mask[i]
        codes += [c | bit for c in codes if not c & mask]
    return tuple(sorted(codes))


@functools.lru_cache(maxsize=64)
def _schedule_matrix(topo: Topology) -> np.ndarray:
    codes = np.array(_schedule_codes(topo), dtype=np.int64)
    mat = ((codes[:, None] >> np.arange(topo.n)) & 1).astype(np.int8)
    mat.setflags(write=False)
    return mat


def enumerate_schedules(topo: Topology) -> np.ndarray:
    """All feasible schedules, one per row, in increasing integer-code order.

    Refuses topologies with more than 24 queues.  The result is cached per
    topology and read-only.
    """
    if topo.n > MAX_ENUMERATION_SIZE:
        raise ValueError(
            f"refusing to enumerate schedules for n={topo.n} > {MAX_ENUMERATION_SIZE}"
        )
    return _schedule_matrix(topo)


def max_weight(topo: Topology, w) -> tuple[np.ndarray, float]:
    """A feasible schedule maximising ``sched . w`` and its value.

    Switches are solved as an assignment problem, with zero-weight pairs
    dropped so that an all-zero ``w`` gives the empty schedule.  Interference
    graphs are solved by scanning the enumerated schedule list; ties go to the
    lowest integer code.
    """
    w = np.asarray(w)
    if w.shape != (topo.n,):
        raise ValueError(f"weight vector has shape {w.shape}, expected ({topo.n},)")
    if topo.is_switch:
        m = topo.ports
        mat = w.reshape(m, m)
        rows, cols = linear_sum_assignment(mat, maximize=True)
        sched = np.zeros((m, m), dtype=np.int8)
        keep = mat[rows, cols] > 0
        sched[rows[keep], cols[keep]] = 1
        sched = sched.ravel()
        return sched, float(sched @ w)
    table = enumerate_schedules(topo)
    values = table @ w
    k = int(np.argmax(values))
    return table[k].copy(), float(values[k])


def max_weight_by_enumeration(topo: Topology, w) -> tuple[np.ndarray, float]:
    """Maximum-weight schedule by full enumeration, whatever the topology kind."""
    w = np.asarray(w)
    table = enumerate_schedules(topo)
    values = table @ w
    k = int(np.argmax(values))
    return table[k].copy(), float(values[k])


@dataclass
class ArrivalProcess:
    """Independent Bernoulli arrivals with per-queue rates."""

    rates: np.ndarray
    rng: np.random.Generator

    def __post_init__(self):
        self.rates = np.asarray(self.rates, dtype=float)
        if np.any(self.rates < 0) or np.any(self.rates > 1):
            raise ValueError("arrival rates must lie in [0, 1]")

    def sample(self) -> np.ndarray:
        return (self.rng.random(self.rates.shape[0]) < self.rates).astype(np.int8)


def sample_arrivals(proc: ArrivalProcess) -> np.ndarray:
    return proc.sample()


def departures(q, sched) -> np.ndarray:
    """Packets leaving each queue when ``sched`` is used on queue state ``q``."""
    return (np.asarray(sched) * (np.asarray(q) > 0)).astype(np.int64)


def apply_service(q, sched, arrivals) -> np.ndarray:
    """One slot of queue dynamics.

    A scheduled queue is served only if it was non-empty at the start of the
    slot, so a packet arriving in the slot cannot leave in the same slot.
    """
    q = np.asarray(q, dtype=np.int64)
    return q + np.asarray(arrivals, dtype=np.int64) - departures(q, sched)
