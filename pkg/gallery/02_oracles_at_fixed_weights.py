"""
Oracles at fixed weights
========================

Each oracle answers one query per slot and carries advice between queries.
With the weights frozen we can watch how fast each one reaches the optimum.
"""
# %%
import numpy as np

from oraclesched.model import max_weight, switch_topology
from oraclesched.oracles import Oracle, bp_horizon, make_perturbation, run_bp

rng = np.random.default_rng(5)
topo = switch_topology(3)
w = rng.integers(0, 8, topo.n)
_, best = max_weight(topo, w)
print("weights\n", w.reshape(3, 3), "\noptimum", best)

# %% Exhaustive search, Glauber dynamics and BP-ES, 600 queries each.
# Glauber dynamics samples from exp(sigma.W) rather than searching, so it
# may never land exactly on the optimum.
for kind in ("es", "mcmc", "bp-es"):
    oracle = Oracle(kind, topo)
    advice = oracle.initial_advice()
    hit = None
    for t in range(600):
        out = oracle.step(w, advice, rng)
        advice = out.advice
        if hit is None and out.sched @ w == best:
            hit = t + 1
    print(f"{kind:6s} first optimal answer at query {hit}")

# %% Belief propagation with a dyadic perturbation, run to its horizon.
pert = make_perturbation(3)
steps = bp_horizon(3, int(w.max()), pert.xi)
out = run_bp(topo, w, pert, steps)
print(f"bp after {steps} rounds: weight {out.sched @ w}")
