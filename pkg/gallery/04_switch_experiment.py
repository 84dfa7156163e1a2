"""
A small switch experiment with a plot
=====================================

Compare MW, BP-greedy and MCMC on a 4x4 switch at load 0.8, then write
the CSVs and an SVG chart into ``gallery_out/``.
"""
# %%
from pathlib import Path

from oraclesched.harness import ExperimentConfig, drift_ratio, render_plot, run_experiment, write_csv

out = Path("gallery_out")
out.mkdir(exist_ok=True)
paths = []

# %%
for oracle in ("mw", "bp-greedy", "mcmc"):
    cfg = ExperimentConfig(topology="switch:4", oracle=oracle, load=0.8, steps=20_000, replications=3, seed=1)
    res = run_experiment(cfg)
    drift = max(drift_ratio(log.trace) for log in res.logs)
    print(f"{oracle:10s} tail means {[round(x, 1) for x in res.tail_means()]}  worst drift {drift:.2f}")
    write_csv(res.logs, out / f"{oracle}_runs.csv", out / f"{oracle}_aggregate.csv")
    paths.append(out / f"{oracle}_aggregate.csv")

# %%
render_plot(paths, out / "switch4.svg", title="4x4 switch, load 0.8")
print("wrote", out / "switch4.svg")
