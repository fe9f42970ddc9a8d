"""Reachability of agents from an input through the communication graph."""

from __future__ import annotations

from dataclasses import dataclass

from .boolmat import BoolMat, BoolVec, mat_vec
from .errors import ShapeError


@dataclass(frozen=True)
class NetworkSpec:
    """A synthesis instance.

    ``C[i, k] = 1`` iff agent i receives from agent k; ``V[i, j] = 1`` iff
    agent i measures input j.
    """

    C: BoolMat
    V: BoolMat

    def __post_init__(self):
        if self.C.nrows != self.C.ncols:
            raise ShapeError("communication matrix must be square")
        if self.V.nrows != self.C.nrows:
            raise ShapeError("visibility matrix row count must equal the agent count")
        if self.n < 1 or self.m < 1:
            raise ShapeError("need at least one agent and one input")

    @property
    def n(self) -> int:
        return self.C.nrows

    @property
    def m(self) -> int:
        return self.V.ncols

    def column(self, j: int) -> BoolVec:
        if not 0 <= j < self.m:
            raise IndexError(f"input index {j} out of range for {self.m} inputs")
        return self.V.col(j)

    def senders(self, i: int) -> list[int]:
        """Agents that ``i`` can hear, self excluded."""
        return [k for k in self.C.row(i).support() if k != i]


@dataclass(frozen=True)
class ReachabilityReport:
    R: BoolMat
    span: BoolVec
    reachable: frozenset
    unreachable: frozenset
    kappa: int
    roots: frozenset
    layers: tuple

    @property
    def nu(self) -> int:
        return len(self.roots)


def reachability_matrix(spec: NetworkSpec, j: int) -> BoolMat:
    """Columns ``V_j, C V_j, ..., C^(n-1) V_j``."""
    col = spec.column(j)
    columns = []
    for _ in range(spec.n):
        columns.append(col)
        col = mat_vec(spec.C, col)
    return BoolMat.from_columns(columns)


def bfs_layers(spec: NetworkSpec, j: int) -> list[list[int]]:
    """Agents grouped by the round in which information on input ``j`` first reaches them.

    Layer 0 holds the measuring agents; layer k the agents first reached
    after k hops.
    """
    n = spec.n
    reached = spec.column(j).bits
    frontier = reached
    layers = []
    while frontier:
        layers.append(BoolVec(n, frontier).support())
        step = mat_vec(spec.C, BoolVec(n, frontier)).bits
        frontier = step & ~reached
        reached |= frontier
    return layers


def analyze(spec: NetworkSpec, j: int) -> ReachabilityReport:
    """Reachability report for input ``j``.

    ``kappa`` counts the measurement round as round 1, so it equals the
    number of non-empty propagation layers.
    """
    R = reachability_matrix(spec, j)
    span = BoolVec(spec.n, 0)
    for k in range(R.ncols):
        span = span | R.col(k)
    layers = bfs_layers(spec, j)
    reachable = frozenset(span.support())
    return ReachabilityReport(
        R=R,
        span=span,
        reachable=reachable,
        unreachable=frozenset(range(spec.n)) - reachable,
        kappa=len(layers),
        roots=frozenset(spec.column(j).support()),
        layers=tuple(tuple(layer) for layer in layers),
    )


def is_reachable(spec: NetworkSpec, j: int) -> bool:
    return len(analyze(spec, j).reachable) == spec.n


def r_reachable_layers(spec: NetworkSpec, j: int, r: int) -> list[list[int]]:
    """Layers of the redundancy-``r`` fixed point.

    Layer 0 is the measuring agents. Each later layer holds every agent not
    yet secured that hears at least ``r`` agents secured in earlier layers.
    """
    if r < 1:
        raise ValueError("redundancy must be at least 1")
    roots = spec.column(j).support()
    secured = set(roots)
    layers = [roots] if roots else []
    while True:
        fresh = [
            i for i in range(spec.n)
            if i not in secured and sum(1 for k in spec.senders(i) if k in secured) >= r
        ]
        if not fresh:
            return layers
        layers.append(fresh)
        secured.update(fresh)


def r_reachable_set(spec: NetworkSpec, j: int, r: int) -> tuple[frozenset, bool]:
    """Agents reachable from input ``j`` with redundancy ``r``, and whether that is everyone."""
    layers = r_reachable_layers(spec, j, r)
    secured = frozenset(i for layer in layers for i in layer)
    return secured, len(secured) == spec.n
