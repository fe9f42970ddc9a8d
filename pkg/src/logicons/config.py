"""Scenario files: a JSON document describing network, decisions, faults and inputs.

Agent, input and subterm numbers in the file follow ``index_base`` (1 unless
stated otherwise); everything in memory is 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .boolmat import BoolMat
from .errors import LogiconsError
from .expr import InputVar, parse_decision
from .reachability import NetworkSpec
from .simulator import DecisionSystem, FaultModel


class ConfigError(LogiconsError, ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    spec: NetworkSpec
    decision_text: tuple
    decisions: tuple
    gamma: int | None
    faults: FaultModel
    inputs: tuple
    initial_state: np.ndarray | None
    t_max: int

    @property
    def decision_system(self) -> DecisionSystem:
        return DecisionSystem.from_input_decisions(self.decisions, self.spec.m)

    def x0(self) -> np.ndarray:
        if self.initial_state is None:
            return np.zeros((self.spec.n, self.spec.m), dtype=bool)
        return self.initial_state


def _matrix(doc, key) -> BoolMat:
    rows = doc.get(key)
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"{key} must be a non-empty list of 0/1 rows")
    if any(v not in (0, 1) or isinstance(v, bool) for r in rows for v in r):
        raise ConfigError(f"{key} entries must be 0 or 1")
    try:
        return BoolMat.from_rows(rows)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def parse_config(text: str) -> ScenarioConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("scenario must be a JSON object")
    base = doc.get("index_base", 1)
    if base not in (0, 1):
        raise ConfigError("index_base must be 0 or 1")
    try:
        spec = NetworkSpec(_matrix(doc, "C"), _matrix(doc, "V"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    n, m = spec.n, spec.m

    texts = doc.get("decisions")
    if texts is None:
        decisions = tuple(InputVar(j) for j in range(m))
        texts = tuple(f"u{j + 1}" for j in range(m))
    else:
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise ConfigError("decisions must be a list of strings")
        try:
            # decision text always names inputs u1..um
            decisions = tuple(parse_decision(t, n_input=m) for t in texts)
        except (SyntaxError, NameError) as exc:
            raise ConfigError(f"decision: {exc}") from None
        texts = tuple(texts)

    gamma = doc.get("gamma")
    if gamma is not None and (not isinstance(gamma, int) or isinstance(gamma, bool) or gamma < 0):
        raise ConfigError("gamma must be a non-negative integer")

    def agent_id(value, what):
        if not isinstance(value, int) or isinstance(value, bool) or not base <= value < n + base:
            raise ConfigError(f"{what}: agent {value!r} out of range")
        return value - base

    fdoc = doc.get("faults", {}) or {}
    if not isinstance(fdoc, dict):
        raise ConfigError("faults must be an object")
    permanent = {}
    for key, value in (fdoc.get("permanent") or {}).items():
        try:
            agent = agent_id(int(key), "permanent fault")
        except ValueError:
            raise ConfigError(f"permanent fault: bad agent {key!r}") from None
        if value not in (0, 1):
            raise ConfigError("stuck values must be 0 or 1")
        permanent[agent] = int(value)
    temporary = set()
    for item in fdoc.get("temporary") or []:
        if not isinstance(item, list) or len(item) != 2:
            raise ConfigError("temporary faults are [agent, subterm] pairs")
        agent = agent_id(item[0], "temporary fault")
        h = item[1]
        if not isinstance(h, int) or not base <= h < m + base:
            raise ConfigError(f"temporary fault: subterm {h!r} out of range")
        temporary.add((agent, h - base))
    if gamma is not None and len(permanent) > gamma:
        raise ConfigError(f"{len(permanent)} permanent faults exceed gamma = {gamma}")

    inputs = doc.get("inputs", [0] * m)
    if not isinstance(inputs, list) or len(inputs) != m or any(v not in (0, 1) for v in inputs):
        raise ConfigError(f"inputs must be a list of {m} values in {{0, 1}}")

    x0 = doc.get("initial_state")
    if x0 is not None:
        arr = np.array(x0)
        if arr.shape != (n, m) or not np.isin(arr, (0, 1)).all():
            raise ConfigError(f"initial_state must be a {n}x{m} 0/1 matrix")
        x0 = arr.astype(bool)

    t_max = doc.get("t_max", 50)
    if not isinstance(t_max, int) or t_max < 1:
        raise ConfigError("t_max must be a positive integer")

    return ScenarioConfig(
        name=str(doc.get("name", "")),
        spec=spec,
        decision_text=texts,
        decisions=decisions,
        gamma=gamma,
        faults=FaultModel(frozenset(temporary), permanent),
        inputs=tuple(int(v) for v in inputs),
        initial_state=x0,
        t_max=t_max,
    )


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)
