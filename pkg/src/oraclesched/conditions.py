"""Oracle horizon models and a sampled checker for the throughput conditions.

The six conditions are asymptotic, so the checker can only say whether a
configuration is *consistent* with each of them on a finite sample grid.  It
is meant to catch configuration mistakes (swapped exponents, a horizon that
grows too fast for the chosen ``f``), not to prove anything.

All evaluation happens in mpmath because the grid runs far past the float
range: with the log-power family ``g(x)/f(x)`` only drops below ``1e-3`` around
``x = 10**(10**15)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .weights import WeightFunctions

# thresholds for the "tends to zero / infinity" verdicts
SMALL = mpmath.mpf("1e-3")
LARGE = mpmath.mpf("1e3")
DERIVATIVE_SMALL = mpmath.mpf("1e-6")
F0_TOL = 1e-12
FD_STEP = mpmath.mpf("1e-6")
CONCAVITY_RTOL = mpmath.mpf("1e-9")
MIN_GRID_TOP = mpmath.mpf("1e12")
DEFAULT_TOP_EXPONENT = 1e16
WORKING_DPS = 60


def _check_eta_delta(eta, delta):
    if not (0 < eta < 1 and 0 < delta < 1):
        raise ValueError("eta and delta must lie in (0, 1)")


@dataclass(frozen=True)
class Constant:
    """``h`` independent of the weights, e.g. ``2**n`` for exhaustive search."""

    value: float

    def mp(self, w_max, eta, delta):
        return mpmath.mpf(self.value)


@dataclass(frozen=True)
class ExpLinear:
    """``h = exp(c1 * W_max) * (c2 + log(1 / (eta * delta)))`` (Glauber dynamics)."""

    c1: float
    c2: float

    def mp(self, w_max, eta, delta):
        return mpmath.exp(self.c1 * mpmath.mpf(w_max)) * (
            self.c2 + mpmath.log(1 / (mpmath.mpf(eta) * delta))
        )


@dataclass(frozen=True)
class LinearOverGap:
    """``h = scale * W_max / xi`` for belief propagation with certified gap ``xi``.

    ``scale`` stands in for the unspecified constant and defaults to 1.
    """

    xi: float
    scale: float = 1.0

    def mp(self, w_max, eta, delta):
        return self.scale * mpmath.mpf(w_max) / self.xi


@dataclass(frozen=True)
class RandomSearch:
    """``h = log(delta) / log(1 - 2**-n)``: randomised search over ``n`` bits."""

    n: int

    def mp(self, w_max, eta, delta):
        return mpmath.log(delta) / mpmath.log(1 - mpmath.power(2, -self.n))


HorizonModel = Constant | ExpLinear | LinearOverGap | RandomSearch


def eval_horizon(h: HorizonModel, w_max, eta: float, delta: float) -> float:
    _check_eta_delta(eta, delta)
    with mpmath.workdps(WORKING_DPS):
        return float(h.mp(w_max, eta, delta))


def parse_horizon(text: str, n: int = 16) -> HorizonModel:
    """Parse ``constant:4096``, ``explinear[:c1,c2]``, ``lineargap:xi`` or ``randomsearch[:n]``.

    ``explinear`` without constants uses ``c1 = c2 = n``.
    """
    name, _, args = text.partition(":")
    vals = [float(v) for v in args.split(",") if v.strip()]
    name = name.strip().lower()
    if name == "constant":
        return Constant(vals[0] if vals else 2.0**n)
    if name == "explinear":
        c1, c2 = (vals + [float(n), float(n)])[:2] if len(vals) != 1 else (vals[0], float(n))
        return ExpLinear(c1, c2)
    if name in ("lineargap", "linearovergap"):
        return LinearOverGap(*vals) if vals else LinearOverGap(1.0)
    if name == "randomsearch":
        return RandomSearch(int(vals[0]) if vals else n)
    raise ValueError(f"unknown horizon model {text!r}")


def sample_grid(top_exponent: float = DEFAULT_TOP_EXPONENT, points: int = 120) -> list:
    """Sample points ``10**e``.

    The decimal exponents run linearly over ``[-3, 12]`` for the first half of
    the points and geometrically from 12 up to ``top_exponent`` for the rest.
    """
    if top_exponent < 12 or points < 8:
        raise ValueError("grid must reach 1e12 and have at least 8 points")
    half = points // 2
    lo = [-3 + 15 * k / (half - 1) for k in range(half)]
    rest = points - half
    ratio = (top_exponent / 12) ** (1 / rest)
    hi = [12 * ratio ** (k + 1) for k in range(rest)]
    with mpmath.workdps(WORKING_DPS):
        return [mpmath.power(10, mpmath.mpf(e)) for e in lo + hi]


@dataclass
class ConditionResult:
    name: str
    passed: bool
    detail: str
    witness: object = None


@dataclass
class ConditionReport:
    results: list[ConditionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]

    def __getitem__(self, name: str) -> ConditionResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def table(self) -> str:
        lines = [f"{'cond':<5} {'verdict':<7} {'witness':<14} detail"]
        for r in self.results:
            wit = "-" if r.witness is None else mpmath.nstr(r.witness, 4)
            verdict = "pass" if r.passed else "FAIL"
            lines.append(f"{r.name:<5} {verdict:<7} {wit:<14} {r.detail}")
        return "\n".join(lines)


def _slope(fn, x):
    h = FD_STEP
    return (fn(x * (1 + h)) - fn(x * (1 - h))) / (2 * x * h)


def _first_failure(seq, ok):
    for k in range(len(seq) - 1):
        if not ok(seq[k], seq[k + 1]):
            return k + 1
    return None


def _monotone_and_concave(label, fn, grid) -> tuple[bool, str, object]:
    vals = [fn(x) for x in grid]
    k = _first_failure(vals, lambda u, v: v > u)
    if k is not None:
        return False, f"{label} not increasing", grid[k]
    slopes = [_slope(fn, x) for x in grid]
    k = _first_failure(slopes, lambda u, v: v - u <= CONCAVITY_RTOL * abs(u))
    if k is not None:
        return False, f"{label} slope increases (not concave)", grid[k]
    return True, "", None


def check_conditions(
    wf: WeightFunctions,
    horizon: HorizonModel,
    c: float = 0.5,
    grid=None,
    eta: float = 0.1,
    delta: float = 0.1,
) -> ConditionReport:
    """Sampled verdicts for conditions C1-C6 of the throughput theorem.

    Each verdict carries a witness: the grid point where a sampled property
    broke, or the top of the grid for limits that were not reached.
    """
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    _check_eta_delta(eta, delta)
    report = ConditionReport()
    with mpmath.workdps(WORKING_DPS):
        grid = sample_grid() if grid is None else [mpmath.mpf(x) for x in grid]
        if len(grid) < 8 or any(x <= 0 for x in grid):
            raise ValueError("grid needs at least 8 positive points")
        if any(v <= u for u, v in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if grid[-1] < MIN_GRID_TOP:
            raise ValueError("grid must reach at least 1e12")
        top = grid[-1]
        f, g = wf.mp_f, wf.mp_g

        ok_f, why_f, wit_f = _monotone_and_concave("f", f, grid)
        ok_g, why_g, wit_g = _monotone_and_concave("g", g, grid)
        report.results.append(
            ConditionResult(
                "C1",
                ok_f and ok_g,
                why_f or why_g or "f, g increasing with non-increasing slopes",
                wit_f if not ok_f else wit_g,
            )
        )

        upper = [x for x in grid[len(grid) // 2 :] if f(x) > 0]
        ratios = [g(x) / f(x) for x in upper]
        k = _first_failure(ratios, lambda u, v: v <= u)
        g_top, ratio_top = g(top), ratios[-1] if ratios else mpmath.inf
        if k is not None:
            ok, why, wit = False, "g/f not decreasing", upper[k]
        elif not ratio_top < SMALL:
            ok, why, wit = False, f"g/f = {mpmath.nstr(ratio_top, 3)} at top", top
        elif not g_top > LARGE:
            ok, why, wit = False, f"g = {mpmath.nstr(g_top, 3)} at top", top
        else:
            ok, why, wit = True, f"g/f = {mpmath.nstr(ratio_top, 3)}, g = {mpmath.nstr(g_top, 3)}", None
        report.results.append(ConditionResult("C2", ok, why, wit))

        f0 = f(mpmath.mpf(0))
        ok = abs(f0) <= F0_TOL
        report.results.append(
            ConditionResult("C3", ok, f"f(0) = {mpmath.nstr(f0, 3)}", None if ok else mpmath.mpf(0))
        )

        df, dg = _slope(f, top), _slope(g, top)
        ok = df < DERIVATIVE_SMALL and dg < DERIVATIVE_SMALL
        report.results.append(
            ConditionResult(
                "C4", ok, f"f' = {mpmath.nstr(df, 3)}, g' = {mpmath.nstr(dg, 3)} at top",
                None if ok else top,
            )
        )

        v5 = horizon.mp(f(top), eta, delta) / top
        ok = v5 < SMALL
        report.results.append(
            ConditionResult("C5", ok, f"h(f(x))/x = {mpmath.nstr(v5, 3)} at top", None if ok else top)
        )

        z = wf.mp_f_inverse(g((1 - mpmath.mpf(c)) * top))
        v6 = _slope(f, z) * horizon.mp(f((1 + mpmath.mpf(c)) * top), eta, delta)
        ok = v6 < SMALL
        report.results.append(
            ConditionResult("C6", ok, f"composite = {mpmath.nstr(v6, 3)} at top (c={c})", None if ok else top)
        )
    return report
