"""
Topologies and max-weight schedules
===================================

Two conflict structures are supported: a wireless interference graph (here a
grid) and an input-queued switch, where a schedule is a partial matching.
"""
# %%
import numpy as np

from oraclesched.model import enumerate_schedules, grid_topology, max_weight, max_weight_by_enumeration, switch_topology

# %% A 2x3 grid: queues are cells, neighbours may not transmit together.
grid = grid_topology(2, 3)
table = enumerate_schedules(grid)
print(f"{grid.n} queues, {len(grid.edges)} conflict edges, {len(table)} feasible schedules")

# %% Max-weight by enumeration picks the heaviest independent set.
w = np.array([4, 1, 3, 2, 5, 1])
sched, value = max_weight(grid, w)
print("grid schedule", sched.reshape(2, 3).tolist(), "weight", value)

# %% On a switch the same question is an assignment problem.
sw = switch_topology(3)
w = np.array([[3, 0, 1], [2, 2, 0], [0, 4, 1]]).ravel()
sched, value = max_weight(sw, w)
print("switch matching\n", sched.reshape(3, 3), "\nweight", value)
assert value == max_weight_by_enumeration(sw, w)[1]
