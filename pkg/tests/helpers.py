"""Shared fixtures data and random instance generators for the test suite."""

from pathlib import Path

import numpy as np

from logicons.boolmat import BoolMat, load_matrix
from logicons.expr import And, BoolMap, Not, Or, StateVar
from logicons.reachability import NetworkSpec, is_reachable, r_reachable_set

FIXTURES = Path(__file__).parent / "fixtures"
SCENARIOS = Path(__file__).parent.parent / "scenarios"


def fixture(name) -> BoolMat:
    return load_matrix(FIXTURES / f"{name}.txt")


def load_spec(name) -> NetworkSpec:
    return NetworkSpec(fixture(f"{name}_C"), fixture(f"{name}_V"))


def example_map() -> BoolMap:
    """F(x) = (x3 (x1 + !x2), x3 (x1 + x2) + !x3 (!x1 + x2), x1)."""
    x1, x2, x3 = StateVar(0), StateVar(1), StateVar(2)
    return BoolMap(3, 0, [
        And((x3, Or((x1, Not(x2))))),
        Or((And((x3, Or((x1, x2)))), And((Not(x3), Or((Not(x1), x2)))))),
        x1,
    ])


def random_matrix(rng, n, m=None, density=0.5) -> BoolMat:
    m = n if m is None else m
    return BoolMat.from_numpy(rng.random((n, m)) < density)


def random_reachable_spec(rng, n) -> NetworkSpec:
    """Random single-input spec whose input reaches every agent."""
    while True:
        C = random_matrix(rng, n, density=rng.uniform(0.1, 0.6))
        v = rng.random((n, 1)) < rng.uniform(0.05, 0.4)
        if not v.any():
            v[rng.integers(n), 0] = True
        spec = NetworkSpec(C, BoolMat.from_numpy(v))
        if is_reachable(spec, 0):
            return spec


def random_r_reachable_spec(rng, n, gamma) -> NetworkSpec:
    """Random single-input spec that is completely (2*gamma+1)-reachable."""
    r = 2 * gamma + 1
    while True:
        C = random_matrix(rng, n, density=rng.uniform(0.5, 0.95))
        v = np.zeros((n, 1), dtype=bool)
        roots = rng.choice(n, size=rng.integers(min(r, n), n + 1), replace=False)
        v[roots, 0] = True
        spec = NetworkSpec(C, BoolMat.from_numpy(v))
        if r_reachable_set(spec, 0, r)[1]:
            return spec
