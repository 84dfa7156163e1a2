"""Throughput-optimal scheduling of constrained queueing networks with interactive oracles."""
from .conditions import (
    Constant,
    ExpLinear,
    LinearOverGap,
    RandomSearch,
    check_conditions,
    eval_horizon,
)
from .model import (
    ArrivalProcess,
    Topology,
    apply_service,
    enumerate_schedules,
    grid_topology,
    interference_topology,
    is_feasible,
    max_weight,
    max_weight_by_enumeration,
    sample_arrivals,
    switch_topology,
)
from .oracles import Oracle, initial_advice, make_perturbation, oracle_step
from .scheduler import InvariantChecker, InvariantViolation, Scheduler, SystemState
from .weights import WeightFunctions, compute_U, update_weights

__version__ = "0.1.0"
