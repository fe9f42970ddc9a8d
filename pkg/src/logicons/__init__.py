"""Logical consensus over Boolean sensor networks.

Synthesizes per-agent Boolean update rules that drive every agent to the
value a centralized observer would compute, optionally tolerating agents
stuck at a wrong value, and simulates the resulting networks round by round.
"""

from .boolmat import BoolMat, BoolVec, spectral_radius
from .expr import BoolMap, parse_decision, parse_expr, format_expr
from .reachability import NetworkSpec, analyze, is_reachable, r_reachable_set
from .synth_linear import LinearSystem, synthesize_linear
from .synth_robust import RobustSystem, synthesize_robust
from .simulator import DecisionSystem, FaultModel, build_consensus, run

__version__ = "0.1.0"

__all__ = [
    "BoolMat", "BoolVec", "spectral_radius",
    "BoolMap", "parse_decision", "parse_expr", "format_expr",
    "NetworkSpec", "analyze", "is_reachable", "r_reachable_set",
    "LinearSystem", "synthesize_linear",
    "RobustSystem", "synthesize_robust",
    "DecisionSystem", "FaultModel", "build_consensus", "run",
]
