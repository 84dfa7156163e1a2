"""Queue-length functions and the hysteresis weight update."""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

FAMILIES = ("power", "logpower", "log")


@dataclass(frozen=True)
class WeightFunctions:
    """The pair ``(f, g)`` behind ``U_i = max(f(Q_i), g(Q_max))``.

    ``power``:    f(x) = x**a,                 g(x) = x**b
    ``logpower``: f(x) = log(x + e)**a - 1,    g(x) = log(x + e)**b - 1
    ``log``:      f(x) = log(x + 1),           g(x) = log(x + 1)**b  (``a`` unused)

    ``f``/``g`` accept floats or arrays.  The ``mp_*`` variants take mpmath
    numbers and are what the condition checker uses, since it samples far
    beyond the float range.
    """

    family: str = "power"
    a: float = 0.25
    b: float = 0.1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}")
        if self.family != "log" and self.a <= 0:
            raise ValueError("exponent a must be positive")
        if self.b <= 0:
            raise ValueError("exponent b must be positive")

    @classmethod
    def log_simple(cls, b: float = 0.1) -> WeightFunctions:
        return cls("log", 1.0, b)

    def f(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "power":
            return x**self.a
        if self.family == "logpower":
            return np.log(x + math.e) ** self.a - 1.0
        return np.log1p(x)

    def g(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "power":
            return x**self.b
        if self.family == "logpower":
            return np.log(x + math.e) ** self.b - 1.0
        return np.log1p(x) ** self.b

    def mp_f(self, x):
        if self.family == "power":
            return mpmath.power(x, self.a)
        if self.family == "logpower":
            return mpmath.power(mpmath.log(x + mpmath.e), self.a) - 1
        return mpmath.log(x + 1)

    def mp_g(self, x):
        if self.family == "power":
            return mpmath.power(x, self.b)
        if self.family == "logpower":
            return mpmath.power(mpmath.log(x + mpmath.e), self.b) - 1
        return mpmath.power(mpmath.log(x + 1), self.b)

    def mp_f_inverse(self, y):
        if self.family == "power":
            return mpmath.power(y, 1 / mpmath.mpf(self.a))
        if self.family == "logpower":
            return mpmath.exp(mpmath.power(y + 1, 1 / mpmath.mpf(self.a))) - mpmath.e
        return mpmath.exp(y) - 1


def compute_U(wf: WeightFunctions, q) -> np.ndarray:
    q = np.asarray(q)
    return np.maximum(wf.f(q), wf.g(q.max()))


def round_half_away(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def update_weights(w, u) -> tuple[np.ndarray, np.ndarray]:
    """Hysteresis update.

    ``W_i`` jumps to the integer closest to ``U_i`` when the two are at least
    2 apart and is kept otherwise.  Returns the new weights and a boolean mask
    of the components that moved.
    """
    w = np.asarray(w, dtype=np.int64)
    u = np.asarray(u, dtype=float)
    if w.shape != u.shape:
        raise ValueError("weight and target vectors differ in length")
    changed = np.abs(w - u) >= 2
    if not changed.any():
        return w, changed
    new = w.copy()
    new[changed] = round_half_away(u[changed]).astype(np.int64)
    return new, changed
