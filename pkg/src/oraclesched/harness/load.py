"""Strictly admissible arrival rates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ..model import Topology, enumerate_schedules, is_feasible


@dataclass(frozen=True)
class LoadSpec:
    """Arrival rates ``load * sum_k alphas[k] * basis[k]``.

    ``basis`` rows are feasible schedules and ``alphas`` sum to one, so for
    ``load < 1`` the rates sit strictly inside the capacity region.
    """

    load: float
    basis: np.ndarray
    alphas: np.ndarray

    @property
    def rates(self) -> np.ndarray:
        return self.load * (self.alphas @ self.basis)


def _check_load(load):
    if not 0 <= load < 1:
        raise ValueError(f"load must lie in [0, 1), got {load}")


def make_switch_load(m: int, load: float) -> LoadSpec:
    """Uniform rates ``load / m`` from the ``m`` cyclic-shift permutations."""
    _check_load(load)
    basis = np.zeros((m, m * m), dtype=np.int8)
    for s in range(m):
        for i in range(m):
            basis[s, i * m + (i + s) % m] = 1
    return LoadSpec(load, basis, np.full(m, 1.0 / m))


def make_grid_load(rows: int, cols: int, load: float) -> LoadSpec:
    """Rates ``load / 2`` everywhere: an even mix of the two checkerboard colourings.

    The published grid experiment gives no rates; this is the symmetric
    point of the grid's capacity region.
    """
    _check_load(load)
    cells = np.arange(rows * cols)
    parity = (cells // cols + cells % cols) % 2
    basis = np.stack([(parity == 0), (parity == 1)]).astype(np.int8)
    return LoadSpec(load, basis, np.array([0.5, 0.5]))


def load_for(topo: Topology, load: float) -> LoadSpec:
    if topo.is_switch:
        return make_switch_load(topo.ports, load)
    if topo.rows is None:
        raise ValueError("admissible loads are only generated for grids and switches")
    return make_grid_load(topo.rows, topo.cols, load)


def capacity_scale(topo: Topology, rates) -> float:
    """Smallest ``s`` with ``rates <= s * (point of the schedule polytope)``.

    ``rates`` is strictly admissible iff the result is below one.  Switches
    use the Birkhoff-von Neumann bound (largest row or column sum); other
    topologies solve a linear program over the enumerated schedules.
    """
    rates = np.asarray(rates, dtype=float)
    if topo.is_switch:
        mat = rates.reshape(topo.ports, topo.ports)
        return float(max(mat.sum(axis=0).max(), mat.sum(axis=1).max()))
    table = enumerate_schedules(topo).astype(float)
    res = linprog(
        c=np.ones(table.shape[0]),
        A_ub=-table.T,
        b_ub=-rates,
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"admissibility LP failed: {res.message}")
    return float(res.fun)


def audit(spec: LoadSpec, topo: Topology) -> bool:
    """Independent check that ``spec`` is consistent and strictly admissible."""
    if not np.isclose(spec.alphas.sum(), 1.0) or np.any(spec.alphas < 0):
        return False
    if not all(is_feasible(topo, row) for row in spec.basis):
        return False
    return capacity_scale(topo, spec.rates) < 1
