"""Rule files: the synthesized update rules in a line-oriented text format.

Example::

    # logical consensus update rules
    mode linear
    agents 5
    inputs 1
    input u1
    x1 <- u1
    x2 <- x1
    ...
    unreachable x5

Every ``input`` section lists one rule per agent. ``unreachable`` names the
agents that the input never reaches (they hold their own state). Text after
``#`` is a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .expr import BoolMap, format_expr, parse_expr

HEADER = "# logical consensus update rules"


class RuleFileError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class RuleSet:
    mode: str
    n: int
    m: int
    gamma: int | None = None
    maps: dict = field(default_factory=dict)
    unreachable: dict = field(default_factory=dict)

    def reachable(self, j: int):
        missing = self.unreachable.get(j, frozenset())
        return None if not missing else frozenset(range(self.n)) - missing


def format_rules(rules: RuleSet) -> str:
    lines = [HEADER, f"mode {rules.mode}", f"agents {rules.n}", f"inputs {rules.m}"]
    if rules.gamma is not None:
        lines.append(f"gamma {rules.gamma}")
    for j in sorted(rules.maps):
        lines.append(f"input u{j + 1}")
        for i, comp in enumerate(rules.maps[j].components):
            lines.append(f"x{i + 1} <- {format_expr(comp)}")
        missing = sorted(rules.unreachable.get(j, ()))
        if missing:
            lines.append("unreachable " + " ".join(f"x{i + 1}" for i in missing))
    return "\n".join(lines) + "\n"


_RULE = re.compile(r"x([0-9]+)\s*<-\s*(.+)")


def parse_rules(text: str) -> RuleSet:
    meta = {}
    sections: dict[int, dict[int, object]] = {}
    unreachable: dict[int, frozenset] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key in ("mode", "agents", "inputs", "gamma"):
            meta[key] = rest
            continue
        if key == "input":
            m = re.fullmatch(r"u([0-9]+)", rest)
            if not m or int(m.group(1)) < 1:
                raise RuleFileError(f"bad input section {rest!r}", lineno)
            current = int(m.group(1)) - 1
            if current in sections:
                raise RuleFileError(f"duplicate section for u{current + 1}", lineno)
            sections[current] = {}
            continue
        if current is None:
            raise RuleFileError(f"unexpected line {line!r} before any input section", lineno)
        if key == "unreachable":
            names = rest.split()
            if not all(re.fullmatch(r"x[1-9][0-9]*", t) for t in names):
                raise RuleFileError(f"bad unreachable list {rest!r}", lineno)
            unreachable[current] = frozenset(int(t[1:]) - 1 for t in names)
            continue
        m = _RULE.fullmatch(line)
        if not m:
            raise RuleFileError(f"cannot parse rule {line!r}", lineno)
        try:
            n = int(meta["agents"])
            n_in = int(meta["inputs"])
        except (KeyError, ValueError):
            raise RuleFileError("agents/inputs must be declared before rules", lineno) from None
        agent = int(m.group(1)) - 1
        if not 0 <= agent < n or agent in sections[current]:
            raise RuleFileError(f"bad or repeated agent x{agent + 1}", lineno)
        try:
            sections[current][agent] = parse_expr(m.group(2), n_state=n, n_input=n_in)
        except (SyntaxError, NameError) as exc:
            raise RuleFileError(str(exc), lineno) from None

    try:
        mode, n, n_in = meta["mode"], int(meta["agents"]), int(meta["inputs"])
        gamma = int(meta["gamma"]) if "gamma" in meta else None
    except (KeyError, ValueError) as exc:
        raise RuleFileError(f"missing or bad header field: {exc}") from None
    if mode not in ("linear", "robust"):
        raise RuleFileError(f"unknown mode {mode!r}")
    maps = {}
    for j, comps in sections.items():
        if not 0 <= j < n_in:
            raise RuleFileError(f"section u{j + 1} exceeds the declared {n_in} inputs")
        if sorted(comps) != list(range(n)):
            raise RuleFileError(f"section u{j + 1} does not define every agent")
        maps[j] = BoolMap(n, n_in, [comps[i] for i in range(n)])
    return RuleSet(mode, n, n_in, gamma, maps, unreachable)
