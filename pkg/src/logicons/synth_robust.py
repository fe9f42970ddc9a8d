"""Fault-tolerant consensus synthesis with majority voting.

To tolerate ``gamma`` agents that broadcast a wrong value forever, every agent
that does not measure the input listens to ``r = 2*gamma + 1`` agents already
secured and sets its state to the majority of them: the OR over all
(gamma+1)-subsets of its sources of the AND of that subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InfeasibleError
from .expr import BoolMap, InputVar, StateVar, conj, disj
from .reachability import NetworkSpec, r_reachable_layers


@dataclass(frozen=True)
class DirectRead:
    input_index: int


@dataclass(frozen=True)
class MajorityTerms:
    sources: tuple
    terms: tuple


@dataclass(frozen=True)
class RobustSystem:
    gamma: int
    input_index: int
    rules: tuple
    layer_of: tuple
    spec: NetworkSpec

    @property
    def r(self) -> int:
        return 2 * self.gamma + 1

    @property
    def n(self) -> int:
        return len(self.rules)

    @property
    def rounds(self) -> int:
        """Number of secured layers, measuring agents included."""
        return max(self.layer_of) + 1


def synthesize_robust(spec: NetworkSpec, j: int, gamma: int) -> RobustSystem:
    """Majority-vote consensus rule for input ``j`` tolerating ``gamma`` stuck agents.

    Raises :class:`InfeasibleError` naming the lowest-index agent that cannot
    be reached with redundancy ``2*gamma + 1``.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    r = 2 * gamma + 1
    layers = r_reachable_layers(spec, j, r)
    layer_of: list[int | None] = [None] * spec.n
    for k, layer in enumerate(layers):
        for i in layer:
            layer_of[i] = k
    missing = [i for i in range(spec.n) if layer_of[i] is None]
    if missing:
        raise InfeasibleError(
            f"agent {missing[0] + 1} cannot be reached from input u{j + 1} "
            f"with redundancy {r}", agent=missing[0])

    rules = []
    for i in range(spec.n):
        if layer_of[i] == 0:
            rules.append(DirectRead(j))
            continue
        audible = [k for k in spec.senders(i) if layer_of[k] < layer_of[i]]
        sources = tuple(sorted(sorted(audible, key=lambda k: (layer_of[k], k))[:r]))
        rules.append(MajorityTerms(sources, tuple(combinations(sources, gamma + 1))))
    return RobustSystem(gamma, j, tuple(rules), tuple(layer_of), spec)


def to_bool_map(sys: RobustSystem) -> BoolMap:
    components = []
    for rule in sys.rules:
        if isinstance(rule, DirectRead):
            components.append(InputVar(rule.input_index))
        else:
            components.append(disj([conj([StateVar(k) for k in term]) for term in rule.terms]))
    return BoolMap(sys.n, sys.spec.m, components)
