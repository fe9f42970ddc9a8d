"""Optimal linear consensus synthesis by breadth-first input propagation.

Each input is propagated layer by layer from the agents that measure it.
Every agent reached at round k listens to exactly one agent reached at round
k-1, so the resulting update ``x(t+1) = F x(t) + B u_j(t)`` uses one message
per reached agent and settles in as many rounds as there are layers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .boolmat import BoolMat, BoolVec
from .errors import NoRootError
from .expr import BoolMap, InputVar, StateVar, disj
from .reachability import NetworkSpec, bfs_layers

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearSystem:
    """Linear update rule for one input, in the original agent order.

    ``parent[i]`` is the agent that ``i`` copies (None for measuring and
    unreachable agents). ``kappa_per_root[k]`` is the number of layers in
    the tree of ``root_order[k]``. ``P`` reorders agents tree by tree, deepest tree
    first, so that ``P.T @ F @ P`` is block-diagonal and strictly lower
    triangular.
    """

    input_index: int
    n_input: int
    F: BoolMat
    B: BoolVec
    P: BoolMat
    S: BoolMat
    parent: tuple
    root_of: tuple
    depth: tuple
    kappa_per_root: tuple
    root_order: tuple
    roots: tuple
    rounds: int
    unreachable: frozenset

    @property
    def partial(self) -> bool:
        """True when some agents could not be reached and hold their state."""
        return bool(self.unreachable)

    @property
    def n(self) -> int:
        return self.F.nrows

    @property
    def order(self) -> list[int]:
        return [next(i for i in range(self.n) if self.P[i, k]) for k in range(self.n)]


def synthesize_linear(spec: NetworkSpec, j: int) -> LinearSystem:
    """Build the minimal linear consensus rule for input ``j``.

    Parents are chosen among the previous layer by lowest agent index. Agents
    outside the reachable subgraph get all-zero rows and are listed in
    ``unreachable``. Raises :class:`NoRootError` when nobody measures input j.
    """
    n = spec.n
    Vj = spec.column(j)
    if not Vj.any():
        raise NoRootError(f"no agent measures input {j}")
    layers = bfs_layers(spec, j)

    parent: list[int | None] = [None] * n
    root_of: list[int | None] = [None] * n
    depth: list[int | None] = [None] * n
    for r in layers[0]:
        root_of[r] = r
        depth[r] = 0
    for k in range(1, len(layers)):
        previous = layers[k - 1]
        for i in layers[k]:
            p = next(p for p in previous if spec.C[i, p])
            parent[i] = p
            root_of[i] = root_of[p]
            depth[i] = k

    rows = [0] * n
    for i, p in enumerate(parent):
        if p is not None:
            rows[i] = 1 << p
    F = BoolMat(n, n, tuple(rows))

    roots = layers[0]
    tree_depth = {r: 0 for r in roots}
    for i in range(n):
        if root_of[i] is not None:
            tree_depth[root_of[i]] = max(tree_depth[root_of[i]], depth[i])
    # deepest tree first, ties by lowest root index
    tree_order = sorted(roots, key=lambda r: (-tree_depth[r], r))
    order = []
    for r in tree_order:
        members = [i for i in range(n) if root_of[i] == r]
        order += sorted(members, key=lambda i: (depth[i], i))
    unreachable = [i for i in range(n) if root_of[i] is None]
    order += unreachable
    if unreachable:
        log.info("input %d: agents %s are unreachable; their rows are zero",
                    j, [i + 1 for i in unreachable])

    return LinearSystem(
        input_index=j,
        n_input=spec.m,
        F=F,
        B=Vj,
        P=BoolMat.permutation(order),
        S=F,
        parent=tuple(parent),
        root_of=tuple(root_of),
        depth=tuple(depth),
        kappa_per_root=tuple(tree_depth[r] + 1 for r in tree_order),
        root_order=tuple(tree_order),
        roots=tuple(roots),
        rounds=len(layers),
        unreachable=frozenset(unreachable),
    )


def to_bool_map(sys: LinearSystem) -> BoolMap:
    """Expression form of ``sys``; unreachable agents hold their own state."""
    components = []
    for i in range(sys.n):
        terms = [StateVar(k) for k in sys.F.row(i).support()]
        if sys.B[i]:
            terms.append(InputVar(sys.input_index))
        components.append(disj(terms) if terms else StateVar(i))
    return BoolMap(sys.n, sys.n_input, components)
