"""
Checking weight functions against a horizon
===========================================

The checker samples f, g and the horizon on a super-exponential grid in
high precision and reports which of C1-C6 hold.
"""
# %%
from oraclesched.conditions import Constant, ExpLinear, LinearOverGap, check_conditions
from oraclesched.weights import WeightFunctions

cases = {
    "power 1/2, 1/4, constant horizon": (WeightFunctions("power", 0.5, 0.25), Constant(2**16)),
    "logpower 0.5, 0.3, exp-linear": (WeightFunctions("logpower", 0.5, 0.3), ExpLinear(16, 16)),
    "power 0.4, 0.2, linear over gap": (WeightFunctions("power", 0.4, 0.2), LinearOverGap(1.0)),
    "log, exp-linear": (WeightFunctions.log_simple(0.1), ExpLinear(16, 16)),
}

# %%
for name, (wf, horizon) in cases.items():
    report = check_conditions(wf, horizon)
    print(f"{name:36s} failing: {', '.join(report.failed) or 'none'}")

# %% Full table for the last case.
print(check_conditions(*cases["log, exp-linear"]).table())
