import itertools

import numpy as np
import pytest


def brute_force_schedules(n, conflict):
    """Every 0/1 vector of length n accepted by ``conflict``-free check, by plain enumeration."""
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        if not conflict(bits):
            out.append(bits)
    return out


def graph_conflict(edges):
    return lambda bits: any(bits[u] and bits[v] for u, v in edges)


def switch_conflict(m):
    def bad(bits):
        mat = np.array(bits).reshape(m, m)
        return (mat.sum(0) > 1).any() or (mat.sum(1) > 1).any()

    return bad


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
