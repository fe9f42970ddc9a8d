"""Synchronous round-based execution of consensus networks with fault injection.

The network state ``X`` is an ``n x q`` Boolean matrix: row i is agent i's
estimate of the q subterms. Each round every agent updates every subterm from
the previous round's states, then agents with a permanent fault overwrite
their whole row with their stuck value. Outputs ``Y`` (``n x p``) come from
per-agent output maps that read an input directly when the agent sees it and
fall back to the agent's state otherwise.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .boolmat import BoolMat
from .errors import ShapeError
from .expr import (BoolExpr, BoolMap, InputVar, Not, StateVar, compile_expr,
                   evaluate, state_vars, substitute)
from .reachability import NetworkSpec
from . import synth_linear, synth_robust


@dataclass(frozen=True)
class DecisionSystem:
    """Decisions ``y = f(u)`` written over subterms ``l_h = chi_h(u_{input[h]})``.

    In ``decisions`` the subterm ``l_h`` is written ``StateVar(h)``.
    ``negated[h]`` selects chi_h: identity when False, NOT when True.
    """

    m: int
    subterm_input: tuple
    negated: tuple
    decisions: tuple

    def __post_init__(self):
        if len(self.subterm_input) != len(self.negated):
            raise ShapeError("one chi per subterm is required")
        for j in self.subterm_input:
            if not 0 <= j < self.m:
                raise ShapeError(f"subterm refers to input {j} of {self.m}")
        for d in self.decisions:
            if any(h >= self.q for h in state_vars(d)):
                raise ShapeError("decision refers to an unknown subterm")

    @property
    def q(self) -> int:
        return len(self.subterm_input)

    @property
    def p(self) -> int:
        return len(self.decisions)

    @classmethod
    def from_input_decisions(cls, decisions: Sequence[BoolExpr], m: int) -> DecisionSystem:
        """Encode decisions over inputs with one identity subterm per input."""
        def to_subterm(leaf):
            if isinstance(leaf, InputVar):
                return StateVar(leaf.index)
            if isinstance(leaf, StateVar):
                raise ValueError("input decisions must not reference state variables")
            return None
        return cls(m, tuple(range(m)), (False,) * m,
                   tuple(substitute(d, to_subterm) for d in decisions))

    def subterm_expr(self, h: int) -> BoolExpr:
        leaf = InputVar(self.subterm_input[h])
        return Not(leaf) if self.negated[h] else leaf

    def subterms(self, u: Sequence) -> tuple[int, ...]:
        return tuple(int(evaluate(self.subterm_expr(h), (), u)) for h in range(self.q))

    def centralized(self, u: Sequence) -> tuple[int, ...]:
        """The decision vector ``y* = f(u)``."""
        if len(u) != self.m:
            raise ShapeError(f"input vector has {len(u)} entries, expected {self.m}")
        l = self.subterms(u)
        return tuple(int(evaluate(d, l)) for d in self.decisions)


def build_output_maps(ds: DecisionSystem, V: BoolMat) -> list[tuple[BoolExpr, ...]]:
    """Per-agent output expressions over the agent's own state row and the inputs."""
    if V.ncols != ds.m:
        raise ShapeError(f"visibility has {V.ncols} inputs, decisions use {ds.m}")
    maps = []
    for i in range(V.nrows):
        def local(leaf, i=i):
            if isinstance(leaf, StateVar):
                h = leaf.index
                return ds.subterm_expr(h) if V[i, ds.subterm_input[h]] else leaf
            return None
        maps.append(tuple(substitute(d, local) for d in ds.decisions))
    return maps


@dataclass(frozen=True)
class FaultModel:
    """``temporary``: (agent, subterm) bits flipped in X(0).
    ``permanent``: agent -> value that agent broadcasts in every subterm."""

    temporary: frozenset = frozenset()
    permanent: Mapping = field(default_factory=dict)

    @property
    def faulty(self) -> frozenset:
        return frozenset(self.permanent)


NO_FAULTS = FaultModel()


@dataclass(frozen=True)
class ConsensusSystem:
    """One update map per subterm, plus the agents each map can actually reach.

    ``maps[h]`` already applies chi_h to the input it reads. ``reachable[h]``
    is None when every agent is reached.
    """

    maps: tuple
    reachable: tuple
    visibility: BoolMat
    kind: str = "custom"
    rounds: int | None = None

    @property
    def n(self) -> int:
        return self.maps[0].n_state

    @property
    def q(self) -> int:
        return len(self.maps)


def _apply_chi(fmap: BoolMap, ds: DecisionSystem, h: int) -> BoolMap:
    if not ds.negated[h]:
        return fmap
    j = ds.subterm_input[h]
    flip = lambda leaf: Not(leaf) if isinstance(leaf, InputVar) and leaf.index == j else None
    return BoolMap(fmap.n_state, fmap.n_input, [substitute(c, flip) for c in fmap.components])


def assemble(spec: NetworkSpec, ds: DecisionSystem, maps: Sequence[BoolMap],
             reachable: Sequence, kind: str = "custom", rounds: int | None = None) -> ConsensusSystem:
    """Wrap per-subterm maps written over raw inputs into a :class:`ConsensusSystem`."""
    if len(maps) != ds.q:
        raise ShapeError(f"{len(maps)} maps for {ds.q} subterms")
    maps = tuple(_apply_chi(f, ds, h) for h, f in enumerate(maps))
    return ConsensusSystem(maps, tuple(reachable), spec.V, kind, rounds)


def build_consensus(spec: NetworkSpec, ds: DecisionSystem, mode: str = "linear",
                    gamma: int | None = None) -> ConsensusSystem:
    """Synthesize one map per subterm from the network ``spec``."""
    if ds.m != spec.m:
        raise ShapeError(f"decisions use {ds.m} inputs, network has {spec.m}")
    maps, reachable, rounds = [], [], 0
    for h in range(ds.q):
        j = ds.subterm_input[h]
        if mode == "linear":
            sys = synth_linear.synthesize_linear(spec, j)
            maps.append(synth_linear.to_bool_map(sys))
            reachable.append(None if not sys.unreachable
                             else frozenset(range(spec.n)) - sys.unreachable)
        elif mode == "robust":
            if gamma is None:
                raise ValueError("robust synthesis needs gamma")
            sys = synth_robust.synthesize_robust(spec, j, gamma)
            maps.append(synth_robust.to_bool_map(sys))
            reachable.append(None)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        rounds = max(rounds, sys.rounds)
    return assemble(spec, ds, maps, reachable, mode, rounds)


def step_batch(system: ConsensusSystem, X: np.ndarray, u: Sequence,
               stuck_mask: np.ndarray | None = None,
               stuck_values: np.ndarray | None = None) -> np.ndarray:
    """One synchronous round for a batch of network states ``X`` (``N x n x q``).

    ``stuck_mask``/``stuck_values`` (``N x n``) pin faulty agents' rows after
    the update.
    """
    X = np.asarray(X, dtype=bool)
    if X.ndim != 3 or X.shape[1:] != (system.n, system.q):
        raise ShapeError(f"state batch {X.shape} does not match ({system.n}, {system.q})")
    u = np.asarray(u, dtype=bool)
    out = np.empty_like(X)
    for h, fmap in enumerate(system.maps):
        out[:, :, h] = fmap.evaluate_batch(X[:, :, h], u)
    if stuck_mask is not None:
        out = np.where(stuck_mask[:, :, None], stuck_values[:, :, None], out)
    return out


def _stuck_arrays(faults: FaultModel, n: int):
    if not faults.permanent:
        return None, None
    mask = np.zeros((1, n), dtype=bool)
    values = np.zeros((1, n), dtype=bool)
    for agent, value in faults.permanent.items():
        mask[0, agent] = True
        values[0, agent] = bool(value)
    return mask, values


def step(system: ConsensusSystem, X, u: Sequence, faults: FaultModel = NO_FAULTS) -> np.ndarray:
    """Next network state ``X(t+1)`` from ``X(t)``."""
    X = np.asarray(X, dtype=bool)
    mask, values = _stuck_arrays(faults, system.n)
    return step_batch(system, X[None], u, mask, values)[0]


def iterate_map_batch(fmap: BoolMap, X0: np.ndarray, u: Sequence, steps: int,
                      stuck_mask: np.ndarray | None = None,
                      stuck_values: np.ndarray | None = None) -> np.ndarray:
    """Trajectories of a single-subterm map for a batch of initial states.

    Returns an array of shape ``(steps + 1, N, n)``.
    """
    X = np.asarray(X0, dtype=bool)
    u = np.asarray(u, dtype=bool)
    history = [X]
    for _ in range(steps):
        X = fmap.evaluate_batch(X, u)
        if stuck_mask is not None:
            X = np.where(stuck_mask, stuck_values, X)
        history.append(X)
    return np.stack(history)


def disagreement(Y, ds: DecisionSystem, u: Sequence, mask=None) -> int:
    """Number of output bits differing from the centralized decision ``f(u)``.

    ``mask`` (``n x p``) marks the cells that count; all cells count when None.
    """
    Y = np.asarray(Y, dtype=bool)
    y_star = np.array(ds.centralized(u), dtype=bool)
    if Y.ndim != 2 or Y.shape[1] != ds.p:
        raise ShapeError(f"output matrix {Y.shape} does not have {ds.p} columns")
    diff = Y ^ y_star[None, :]
    if mask is not None:
        diff &= np.asarray(mask, dtype=bool)
    return int(diff.sum())


@dataclass
class SimTrace:
    u: tuple
    y_star: tuple
    states: list
    outputs: list
    e: list
    counted: np.ndarray
    convergence_round: int | None
    consensus: tuple
    match: bool

    @property
    def rounds(self) -> int:
        return len(self.states) - 1

    @property
    def agreement_round(self) -> int | None:
        """First round from which the recorded disagreement stays at zero."""
        t = None
        for k in range(len(self.e) - 1, -1, -1):
            if self.e[k] != 0:
                break
            t = k
        return t

    @property
    def excluded(self) -> int:
        return int((~self.counted).sum())


def counted_cells(system: ConsensusSystem, ds: DecisionSystem, faults: FaultModel) -> np.ndarray:
    """Cells (agent, decision) that enter the disagreement count.

    Faulty agents are dropped, and so is any decision at an agent that depends
    on a subterm whose consensus never reaches that agent.
    """
    n = system.n
    mask = np.ones((n, ds.p), dtype=bool)
    for agent in faults.permanent:
        mask[agent, :] = False
    for d, dec in enumerate(ds.decisions):
        for h in state_vars(dec):
            reach = system.reachable[h]
            if reach is None:
                continue
            for i in range(n):
                if i not in reach:
                    mask[i, d] = False
    return mask


def run(system: ConsensusSystem, ds: DecisionSystem, X0, u: Sequence,
        faults: FaultModel = NO_FAULTS, t_max: int = 50) -> SimTrace:
    """Iterate from ``X0`` under constant inputs ``u`` for at most ``t_max`` rounds.

    Stops once the state repeats. ``convergence_round`` is the first t with
    ``X(t+1) = X(t)``; ``match`` holds when the run converged with zero
    disagreement over the counted cells.
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    n, q = system.n, system.q
    if ds.q != q:
        raise ShapeError(f"system has {q} subterms, decisions use {ds.q}")
    X = np.array(X0, dtype=bool).reshape(n, q)
    for agent, h in faults.temporary:
        X[agent, h] = ~X[agent, h]
    u = tuple(int(bool(v)) for v in u)
    y_star = ds.centralized(u)
    out_exprs = [[compile_expr(g) for g in row] for row in build_output_maps(ds, system.visibility)]
    counted = counted_cells(system, ds, faults)

    def outputs(X):
        return np.array([[bool(g(X[i], u)) for g in out_exprs[i]] for i in range(n)],
                        dtype=bool).reshape(n, ds.p)

    states, outs, e = [X], [outputs(X)], []
    e.append(disagreement(outs[0], ds, u, counted))
    converged = None
    for t in range(t_max):
        nxt = step(system, X, u, faults)
        if np.array_equal(nxt, X):
            converged = t
            break
        X = nxt
        states.append(X)
        outs.append(outputs(X))
        e.append(disagreement(outs[-1], ds, u, counted))

    final = outs[-1]
    consensus = []
    for d in range(ds.p):
        vals = set(final[counted[:, d], d].tolist())
        consensus.append(int(vals.pop()) if len(vals) == 1 else None)
    match = converged is not None and e[-1] == 0
    return SimTrace(u, y_star, states, outs, e, counted, converged, tuple(consensus), match)


def trace_header(n: int, q: int, p: int) -> list[str]:
    cols = ["t", "e"]
    cols += [f"X{i + 1}.{h + 1}" for i in range(n) for h in range(q)]
    cols += [f"Y{i + 1}.{d + 1}" for i in range(n) for d in range(p)]
    return cols


def trace_to_csv(trace: SimTrace) -> str:
    """CSV with one row per round: t, e, then X and Y flattened row-major."""
    n, q = trace.states[0].shape
    p = trace.outputs[0].shape[1]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(trace_header(n, q, p))
    for t, (X, Y, e) in enumerate(zip(trace.states, trace.outputs, trace.e)):
        writer.writerow([t, e] + X.astype(int).ravel().tolist() + Y.astype(int).ravel().tolist())
    return buf.getvalue()
