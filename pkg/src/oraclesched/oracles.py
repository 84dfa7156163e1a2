"""Interactive oracles.

An oracle takes integer weights ``W`` and its own advice (the state it carried
over from the previous query) and returns a feasible schedule together with
updated advice.  Every step function here is pure: inputs are never mutated,
and randomised oracles only consume the generator they are handed.

Implemented oracles:

``es``         pick-and-compare exhaustive search over a binary counter
``mcmc``       Glauber dynamics over independent sets (discrete-time CSMA)
``bp``         max-product BP on a switch, threshold decoding
``bp-greedy``  same messages, greedy decoding on beliefs
``bp-es``      BP for independent sets combined with a random-flip search
``mw``         exact max-weight schedule, the baseline
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import Topology, enumerate_schedules, is_feasible, max_weight, switch_topology

KINDS = ("es", "mcmc", "bp", "bp-greedy", "bp-es", "mw")
CERTIFY_MAX_PORTS = 4
MIN_RANDOM_GAP = 2.0**-20
MAX_REDRAWS = 100


@dataclass(frozen=True)
class ESAdvice:
    rho: np.ndarray  # search index, bit i = queue i
    incumbent: np.ndarray


@dataclass(frozen=True)
class MCMCAdvice:
    sched: np.ndarray


@dataclass(frozen=True)
class BPAdvice:
    """Switch messages indexed by queue ``(i, j)`` = input ``i``, output ``j``.

    ``to_output[i, j]`` is the message from input ``i`` to output ``j`` and
    ``to_input[i, j]`` the one from output ``j`` back to input ``i``.
    """

    to_output: np.ndarray
    to_input: np.ndarray
    incumbent: np.ndarray


@dataclass(frozen=True)
class BPESAdvice:
    """``messages[k, i]`` is the message from queue ``k`` to its neighbour ``i``."""

    rho: np.ndarray
    incumbent: np.ndarray
    messages: np.ndarray


@dataclass(frozen=True)
class MWAdvice:
    pass


Advice = ESAdvice | MCMCAdvice | BPAdvice | BPESAdvice | MWAdvice


@dataclass(frozen=True)
class OracleOutput:
    sched: np.ndarray
    advice: Advice


@dataclass(frozen=True)
class PerturbationSpec:
    """Per-queue tie-breaking offsets ``r`` in [0, 1] and their certified gap.

    For every integer weight vector the maximiser of ``sched . (W + r)`` over
    matchings is unique, and beats every other matching by at least ``xi``.
    ``xi`` is ``None`` when the offsets could not be certified (random mode on
    more than four ports).
    """

    r: np.ndarray
    xi: float | None
    mode: str = "dyadic"


def _zeros(n):
    return np.zeros(n, dtype=np.int8)


def _require_switch(topo: Topology, name: str):
    if not topo.is_switch:
        raise ValueError(f"{name} oracle needs a switch topology, got {topo.kind!r}")


# --------------------------------------------------------------------------
# exhaustive search


def increment(rho: np.ndarray) -> np.ndarray:
    """Binary ``rho + 1 mod 2**n`` with bit 0 least significant."""
    out = rho.copy()
    zeros = np.flatnonzero(out == 0)
    if zeros.size == 0:
        out[:] = 0
        return out
    k = zeros[0]
    out[:k] = 0
    out[k] = 1
    return out


def es_step(topo: Topology, w, advice: ESAdvice) -> OracleOutput:
    rho, inc = advice.rho, advice.incumbent
    if is_feasible(topo, rho) and rho @ w > inc @ w:
        inc = rho.copy()
    return OracleOutput(inc, ESAdvice(increment(rho), inc))


# --------------------------------------------------------------------------
# Glauber dynamics


def activation_probability(w_i) -> float:
    """``exp(w) / (1 + exp(w))`` evaluated without overflow."""
    w_i = float(w_i)
    if w_i >= 0:
        return 1.0 / (1.0 + math.exp(-w_i))
    e = math.exp(w_i)
    return e / (1.0 + e)


def mcmc_step(topo: Topology, w, advice: MCMCAdvice, rng: np.random.Generator) -> OracleOutput:
    """One heat-bath update at a uniformly chosen queue.

    A queue with an active neighbour is switched off; otherwise it turns on
    with probability ``exp(W_i) / (1 + exp(W_i))``.
    """
    sched = advice.sched.copy()
    i = int(rng.integers(topo.n))
    if sched[topo.neighbors[i]].any():
        sched[i] = 0
    else:
        sched[i] = 1 if rng.random() < activation_probability(w[i]) else 0
    return OracleOutput(sched, MCMCAdvice(sched))


# --------------------------------------------------------------------------
# belief propagation on a switch


def make_perturbation(m: int, rng: np.random.Generator | None = None) -> PerturbationSpec:
    """Tie-breaking offsets for an ``m``-port switch.

    Without a generator the offsets are dyadic, ``r[(i, j)] = 2**-(m*i + j + 1)``
    (0-based ports).  Distinct matchings then have distinct offset sums, which
    certifies ``xi = 2**-(m*m)``.  Float64 keeps the offsets exact only while
    ``m*m`` plus the bit length of the weights stays below 53, i.e. for small
    switches; larger ones still get deterministic but lossy tie-breaking.

    With a generator the offsets are uniform on [0, 1].  For ``m <= 4`` they
    are certified by enumeration, redrawing whenever the gap is below ``2**-20``.
    """
    if m < 1:
        raise ValueError("switch needs at least one port")
    n = m * m
    if rng is None:
        r = 2.0 ** -(np.arange(n, dtype=float) + 1)
        return PerturbationSpec(r, 2.0**-n, "dyadic")
    if m > CERTIFY_MAX_PORTS:
        return PerturbationSpec(rng.random(n), None, "random")
    for _ in range(MAX_REDRAWS):
        r = rng.random(n)
        xi = offset_gap(m, r)
        if xi >= MIN_RANDOM_GAP:
            return PerturbationSpec(r, xi, "random")
    raise RuntimeError(f"could not certify random perturbation after {MAX_REDRAWS} draws")


def offset_gap(m: int, r) -> float:
    """Smallest distance to an integer of ``(s - s') . r`` over distinct matchings.

    Since ``(s - s') . W`` is an integer for integer ``W``, this bounds the gap
    between the best and second-best matching from below, uniformly in ``W``.
    """
    if m == 1:
        return 1.0
    sums = np.sort(enumerate_schedules(switch_topology(m)) @ np.asarray(r, dtype=float))
    diffs = (sums[None, :] - sums[:, None])[np.triu_indices(sums.size, 1)]
    return float(np.min(np.abs(diffs - np.round(diffs))))


def _exclusive_max(a: np.ndarray, axis: int) -> np.ndarray:
    """``out[..k..] = max(0, max of a along axis excluding position k)``."""
    a = np.maximum(a, 0.0)
    if a.shape[axis] == 1:
        return np.zeros_like(a)
    part = np.partition(a, -2, axis=axis)
    top = np.take(part, [-1], axis=axis)
    second = np.take(part, [-2], axis=axis)
    return np.where(a == top, second, top)


def _bp_round(topo: Topology, w, advice: BPAdvice, pert: PerturbationSpec):
    _require_switch(topo, "BP")
    if not isinstance(advice, BPAdvice):
        raise TypeError(f"expected BPAdvice, got {type(advice).__name__}")
    m = topo.ports
    wp = np.asarray(w, dtype=float).reshape(m, m) + pert.r.reshape(m, m)
    out_msg, in_msg = advice.to_output, advice.to_input
    # input i tells output j the best it can do with any other output k
    new_out = _exclusive_max(wp - in_msg, axis=1)
    # output j tells input i the best it can do with any other input k
    new_in = _exclusive_max(wp - out_msg, axis=0)
    return wp, new_out, new_in


def bp_step(topo: Topology, w, advice: BPAdvice, pert: PerturbationSpec) -> OracleOutput:
    """One synchronous max-product round with threshold decoding.

    Queue ``(i, j)`` is kept iff the two incoming messages do not exceed its
    perturbed weight; an infeasible decode falls back to the incumbent.
    """
    wp, new_out, new_in = _bp_round(topo, w, advice, pert)
    cand = (~(advice.to_output + advice.to_input > wp)).astype(np.int8).ravel()
    inc = cand if is_feasible(topo, cand) else advice.incumbent
    return OracleOutput(inc, BPAdvice(new_out, new_in, inc))


def greedy_matching(topo: Topology, belief) -> np.ndarray:
    """Add queues in decreasing belief order while the matching stays feasible.

    Ties go to the lower queue index.  Beliefs are not required to be positive.
    """
    m = topo.ports
    b = np.asarray(belief, dtype=float).ravel()
    order = np.argsort(-b, kind="stable")
    row_used = [False] * m
    col_used = [False] * m
    sched = _zeros(m * m)
    placed = 0
    for k in order.tolist():
        i, j = divmod(k, m)
        if not (row_used[i] or col_used[j]):
            row_used[i] = col_used[j] = True
            sched[k] = 1
            placed += 1
            if placed == m:
                break
    return sched


def bp_greedy_step(topo: Topology, w, advice: BPAdvice, pert: PerturbationSpec) -> OracleOutput:
    wp, new_out, new_in = _bp_round(topo, w, advice, pert)
    belief = wp - advice.to_output - advice.to_input
    sched = greedy_matching(topo, belief)
    return OracleOutput(sched, BPAdvice(new_out, new_in, sched))


def run_bp(
    topo: Topology,
    w,
    pert: PerturbationSpec,
    steps: int,
    advice: BPAdvice | None = None,
    greedy: bool = False,
) -> OracleOutput:
    """Result of ``steps`` consecutive BP queries with fixed weights.

    The iteration is deterministic on a finite state space, so once an advice
    value repeats the remaining steps are reduced modulo the cycle length.  The
    output is identical to calling the step function ``steps`` times.
    """
    step = bp_greedy_step if greedy else bp_step
    advice = initial_advice("bp", topo) if advice is None else advice
    out = OracleOutput(advice.incumbent, advice)
    seen: dict[bytes, int] = {}
    t = 0
    while t < steps:
        key = advice.to_output.tobytes() + advice.to_input.tobytes() + advice.incumbent.tobytes()
        if key in seen:
            period = t - seen[key]
            remaining = (steps - t) % period
            for _ in range(remaining):
                out = step(topo, w, out.advice, pert)
            return out
        seen[key] = t
        out = step(topo, w, advice, pert)
        advice = out.advice
        t += 1
    return out


def bp_horizon(m: int, w_max, xi: float) -> int:
    """Number of BP rounds that guarantees the optimum: ``ceil(2 m (W_max + 1) / xi)``."""
    return math.ceil(2 * m * (w_max + 1) / xi)


# --------------------------------------------------------------------------
# BP combined with exhaustive search on an interference graph


def bpes_step(topo: Topology, w, advice: BPESAdvice, rng: np.random.Generator) -> OracleOutput:
    """Message round, random bit flip of the search index, three-way comparison.

    The comparison uses the search index and the BP decision as they were
    *before* this query's updates.
    """
    w = np.asarray(w)
    msg = advice.messages
    inbound = msg.sum(axis=0)
    # m_hat[i, j] = (W_i - sum_{k in N(i), k != j} m[k, i])_+
    new_msg = np.maximum(w[:, None] - inbound[:, None] + msg.T, 0.0) * topo.adjacency

    rho = advice.rho
    new_rho = rho.copy()
    i = int(rng.integers(topo.n))
    new_rho[i] ^= 1

    delta = (w > inbound).astype(np.int8)
    inc = advice.incumbent
    inc_w = inc @ w
    rho_ok = is_feasible(topo, rho)
    delta_ok = is_feasible(topo, delta)
    delta_w = delta @ w
    if rho_ok and rho @ w > max(inc_w, delta_w):
        inc = rho.copy()
    elif delta_ok and delta_w > inc_w:
        inc = delta
    return OracleOutput(inc, BPESAdvice(new_rho, inc, new_msg))


# --------------------------------------------------------------------------
# max-weight baseline


def mw_step(topo: Topology, w, advice: MWAdvice) -> OracleOutput:
    return OracleOutput(max_weight(topo, w)[0], advice)


# --------------------------------------------------------------------------
# dispatch

_ADVICE_TYPES = {
    "es": ESAdvice,
    "mcmc": MCMCAdvice,
    "bp": BPAdvice,
    "bp-greedy": BPAdvice,
    "bp-es": BPESAdvice,
    "mw": MWAdvice,
}


def initial_advice(kind: str, topo: Topology) -> Advice:
    """Zero advice: empty incumbents, zero search index, zero messages."""
    n = topo.n
    if kind == "es":
        return ESAdvice(_zeros(n), _zeros(n))
    if kind == "mcmc":
        return MCMCAdvice(_zeros(n))
    if kind in ("bp", "bp-greedy"):
        _require_switch(topo, "BP")
        m = topo.ports
        return BPAdvice(np.zeros((m, m)), np.zeros((m, m)), _zeros(n))
    if kind == "bp-es":
        return BPESAdvice(_zeros(n), _zeros(n), np.zeros((n, n)))
    if kind == "mw":
        return MWAdvice()
    raise ValueError(f"unknown oracle kind {kind!r}")


def oracle_step(
    kind: str,
    topo: Topology,
    w,
    advice: Advice,
    rng: np.random.Generator | None = None,
    pert: PerturbationSpec | None = None,
) -> OracleOutput:
    expected = _ADVICE_TYPES.get(kind)
    if expected is None:
        raise ValueError(f"unknown oracle kind {kind!r}")
    if not isinstance(advice, expected):
        raise TypeError(f"{kind} oracle got {type(advice).__name__}")
    if kind == "es":
        return es_step(topo, w, advice)
    if kind == "mcmc":
        return mcmc_step(topo, w, advice, rng)
    if kind in ("bp", "bp-greedy"):
        pert = make_perturbation(topo.ports) if pert is None else pert
        step = bp_step if kind == "bp" else bp_greedy_step
        return step(topo, w, advice, pert)
    if kind == "bp-es":
        return bpes_step(topo, w, advice, rng)
    return mw_step(topo, w, advice)


@dataclass
class Oracle:
    """An oracle kind bound to a topology (and, for BP, a perturbation)."""

    kind: str
    topo: Topology
    pert: PerturbationSpec | None = None
    _step: object = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown oracle kind {self.kind!r}; choose from {KINDS}")
        if self.kind in ("bp", "bp-greedy"):
            _require_switch(self.topo, "BP")
            if self.pert is None:
                self.pert = make_perturbation(self.topo.ports)
        topo, pert = self.topo, self.pert
        self._step = {
            "es": lambda w, a, rng: es_step(topo, w, a),
            "mcmc": lambda w, a, rng: mcmc_step(topo, w, a, rng),
            "bp": lambda w, a, rng: bp_step(topo, w, a, pert),
            "bp-greedy": lambda w, a, rng: bp_greedy_step(topo, w, a, pert),
            "bp-es": lambda w, a, rng: bpes_step(topo, w, a, rng),
            "mw": lambda w, a, rng: mw_step(topo, w, a),
        }[self.kind]

    def initial_advice(self) -> Advice:
        return initial_advice(self.kind, self.topo)

    def step(self, w, advice: Advice, rng: np.random.Generator | None = None) -> OracleOutput:
        return self._step(w, advice, rng)
