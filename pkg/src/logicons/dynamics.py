"""Convergence analysis of finite Boolean iteration maps.

Enumeration order throughout is lexicographic on ``(x_1, ..., x_n)``: the
integer code ``a`` of a state has ``x_k = (a >> (n - 1 - k)) & 1``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .boolmat import BoolMat, BoolVec, nilpotency_index, spectral_radius
from .errors import CapacityError, PreconditionError, ShapeError
from .expr import BoolMap, compile_expr, input_vars, state_vars

SEMANTIC_LIMIT = 20
EQUILIBRIA_LIMIT = 24
_CHUNK = 1 << 16


def all_assignments(n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows are the states with codes ``start .. stop-1`` in lexicographic order."""
    stop = (1 << n) if stop is None else stop
    codes = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(bool)


def _as_vec(x, n, what):
    values = list(x)
    if len(values) != n:
        raise ShapeError(f"{what} has {len(values)} entries, expected {n}")
    return [bool(v) for v in values]


def _depends_semantically(expr, variables: list[tuple[str, int]]) -> set[int]:
    """Positions (within ``variables``) on which ``expr`` truly depends."""
    k = len(variables)
    if k == 0:
        return set()
    table = all_assignments(k)
    xs, us = {}, {}
    for pos, (kind, idx) in enumerate(variables):
        (xs if kind == "x" else us)[idx] = table[:, pos]
    values = np.broadcast_to(compile_expr(expr)(xs, us), (1 << k,))
    codes = np.arange(1 << k)
    found = set()
    for pos in range(k):
        flipped = values[codes ^ (1 << (k - 1 - pos))]
        if np.any(values != flipped):
            found.add(pos)
    return found


def incidence_matrix(f: BoolMap, with_inputs: bool = False, mode: str = "auto") -> BoolMat:
    """Which variables each component of ``f`` depends on.

    Columns are the state variables, followed by the input variables when
    ``with_inputs`` is set. ``mode`` is ``"semantic"`` (a flip of the
    variable changes the component for some assignment), ``"structural"`` (the
    variable occurs in the expression) or ``"auto"``: semantic when the map has
    at most 20 variables in total, structural otherwise.
    """
    if mode not in ("auto", "semantic", "structural"):
        raise ValueError(f"unknown mode {mode!r}")
    total = f.n_state + f.n_input
    semantic = mode == "semantic" or (mode == "auto" and total <= SEMANTIC_LIMIT)
    ncols = total if with_inputs else f.n_state
    rows = []
    for comp in f.components:
        # only variables that occur can matter, so enumerate over the support
        support = [("x", i) for i in sorted(state_vars(comp))]
        support += [("u", j) for j in sorted(input_vars(comp))]
        if semantic:
            support = [support[p] for p in sorted(_depends_semantically(comp, support))]
        row = [0] * ncols
        for kind, idx in support:
            if kind == "x":
                row[idx] = 1
            elif with_inputs:
                row[f.n_state + idx] = 1
        rows.append(row)
    return BoolMat.from_rows(rows, ncols=ncols)


def discrete_derivative(f: BoolMap, x: Sequence, u: Sequence = ()) -> BoolMat:
    """Entry (i, j) is F_i(x) XOR F_i(x with component j flipped), inputs held at ``u``."""
    x = _as_vec(x, f.n_state, "state")
    u = _as_vec(u, f.n_input, "input")
    base = f(x, u)
    columns = []
    for j in range(f.n_state):
        neighbour = list(x)
        neighbour[j] = not neighbour[j]
        moved = f(neighbour, u)
        columns.append(BoolVec.from_list([a ^ b for a, b in zip(base, moved)]))
    if not columns:
        return BoolMat.zeros(0)
    return BoolMat.from_columns(columns)


def equilibria(f: BoolMap, u: Sequence = ()) -> list[BoolVec]:
    """All fixed points ``F(x, u) = x`` in lexicographic order (n_state <= 24)."""
    n = f.n_state
    if n > EQUILIBRIA_LIMIT:
        raise CapacityError(f"{n} state variables exceed the enumeration limit of {EQUILIBRIA_LIMIT}")
    u = _as_vec(u, f.n_input, "input")
    found = []
    total = 1 << n
    for start in range(0, total, _CHUNK):
        states = all_assignments(n, start, min(total, start + _CHUNK))
        image = f.evaluate_batch(states, u)
        for row in states[np.all(image == states, axis=1)]:
            found.append(BoolVec.from_list(row.tolist()))
    return found


def is_equilibrium(f: BoolMap, x: Sequence, u: Sequence = ()) -> bool:
    x = _as_vec(x, f.n_state, "state")
    return list(f(x, _as_vec(u, f.n_input, "input"))) == [int(v) for v in x]


def is_attractive(f: BoolMap, x: Sequence, u: Sequence = ()) -> bool:
    """Whether the equilibrium ``x`` attracts its Von Neumann neighbourhood.

    True iff the derivative at ``x`` is nilpotent and has at most one non-null
    entry per column.
    """
    if not is_equilibrium(f, x, u):
        raise PreconditionError(f"{list(x)} is not an equilibrium")
    d = discrete_derivative(f, x, u)
    if d.nrows == 0:
        return True
    if spectral_radius(d) != 0:
        return False
    return all(d.col(j).count() <= 1 for j in range(d.ncols))


def is_globally_convergent(f: BoolMap, u: Sequence = ()) -> tuple[bool, int | None]:
    """Contraction test on the state-only incidence matrix.

    Returns ``(True, q)`` with the smallest ``q`` such that ``B(F)**q = 0``
    when the incidence matrix is nilpotent, else ``(False, None)``. Inputs
    are constant during iteration, so ``u`` does not affect the answer.
    """
    _as_vec(u, f.n_input, "input")
    if f.n_state == 0:
        return True, 0
    q = nilpotency_index(incidence_matrix(f))
    return (q is not None), q


def is_compliant(f: BoolMap, c: BoolMat, v: BoolMat) -> bool:
    """Whether ``B(F(X, u)) <= (C | V)`` elementwise."""
    if c.shape != (f.n_state, f.n_state):
        raise ShapeError(f"communication matrix {c.shape} does not fit {f.n_state} agents")
    if v.shape != (f.n_state, f.n_input):
        raise ShapeError(f"visibility matrix {v.shape} does not fit ({f.n_state}, {f.n_input})")
    return incidence_matrix(f, with_inputs=True) <= c.hstack(v)


def iterate(f: BoolMap, x: Sequence, u: Sequence = (), steps: int = 1) -> tuple[int, ...]:
    state = tuple(int(b) for b in _as_vec(x, f.n_state, "state"))
    for _ in range(steps):
        state = f(state, u)
    return state
