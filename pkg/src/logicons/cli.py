"""Command-line front end.

Exit codes: 0 success, 1 usage/parse/IO error, 2 infeasible specification,
3 disagreement or no convergence in a simulation.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .config import ConfigError, load_config
from .errors import InfeasibleError, NoRootError
from .reachability import analyze, r_reachable_set
from .rules import RuleFileError, RuleSet, format_rules, parse_rules
from .simulator import assemble, run, trace_to_csv
from . import synth_linear, synth_robust

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_DISAGREE = 0, 1, 2, 3

log = logging.getLogger("logicons")


def _ids(indices) -> str:
    return "{" + ", ".join(str(i + 1) for i in sorted(indices)) + "}"


def _bits(values) -> str:
    return "(" + ", ".join("-" if v is None else str(v) for v in values) + ")"


def cmd_analyze(args, out) -> int:
    cfg = load_config(args.config)
    spec = cfg.spec
    ok = True
    print(f"scenario: {cfg.name or args.config}", file=out)
    print(f"agents: {spec.n}, inputs: {spec.m}", file=out)
    for j in range(spec.m):
        rep = analyze(spec, j)
        complete = not rep.unreachable
        print(f"input u{j + 1}:", file=out)
        print(f"  roots: {_ids(rep.roots)} (nu = {rep.nu})", file=out)
        print(f"  reachable: {_ids(rep.reachable)}", file=out)
        print(f"  unreachable: {_ids(rep.unreachable)}", file=out)
        print(f"  kappa: {rep.kappa}", file=out)
        if rep.roots:
            lin = synth_linear.synthesize_linear(spec, j)
            per_root = ", ".join(f"{r + 1}: {k}" for r, k in sorted(zip(lin.root_order, lin.kappa_per_root)))
            print(f"  kappa per root: {per_root}", file=out)
        print(f"  completely reachable: {'yes' if complete else 'no'}", file=out)
        ok &= complete
        if cfg.gamma is not None:
            r = 2 * cfg.gamma + 1
            secured, full = r_reachable_set(spec, j, r)
            print(f"  r-reachable (gamma = {cfg.gamma}, r = {r}): {_ids(secured)}", file=out)
            print(f"  completely r-reachable: {'yes' if full else 'no'}", file=out)
            ok &= full
    print(f"result: {'feasible' if ok else 'infeasible'}", file=out)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_synthesize(args, out) -> int:
    cfg = load_config(args.config)
    spec = cfg.spec
    rules = RuleSet(args.mode, spec.n, spec.m)
    if args.mode == "robust":
        gamma = args.gamma if args.gamma is not None else cfg.gamma
        if gamma is None:
            raise ConfigError("robust synthesis needs gamma (scenario field or --gamma)")
        rules.gamma = gamma
    for j in range(spec.m):
        try:
            if args.mode == "linear":
                sys_ = synth_linear.synthesize_linear(spec, j)
                if sys_.unreachable and not args.allow_unreachable:
                    first = min(sys_.unreachable)
                    print(f"infeasible: agent {first + 1} is unreachable from input u{j + 1} "
                          f"(use --allow-unreachable to synthesize over the reachable subgraph)",
                          file=sys.stderr)
                    return EXIT_INFEASIBLE
                rules.maps[j] = synth_linear.to_bool_map(sys_)
                if sys_.unreachable:
                    rules.unreachable[j] = sys_.unreachable
            else:
                rules.maps[j] = synth_robust.to_bool_map(
                    synth_robust.synthesize_robust(spec, j, rules.gamma))
        except NoRootError:
            print(f"infeasible: no agent measures input u{j + 1}", file=sys.stderr)
            return EXIT_INFEASIBLE
        except InfeasibleError as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
    text = format_rules(rules)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    cfg = load_config(args.config)
    try:
        with open(args.rules, encoding="utf-8") as fh:
            rules = parse_rules(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {args.rules}: {exc.strerror}") from None
    spec = cfg.spec
    if (rules.n, rules.m) != (spec.n, spec.m):
        raise RuleFileError(f"rules are for {rules.n} agents / {rules.m} inputs, "
                            f"scenario has {spec.n} / {spec.m}")
    missing = [j for j in range(spec.m) if j not in rules.maps]
    if missing:
        raise RuleFileError(f"no rules for input u{missing[0] + 1}")
    ds = cfg.decision_system
    system = assemble(spec, ds, [rules.maps[j] for j in range(spec.m)],
                      [rules.reachable(j) for j in range(spec.m)], rules.mode)
    trace = run(system, ds, cfg.x0(), cfg.inputs, cfg.faults, cfg.t_max)
    csv_text = trace_to_csv(trace)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text)
    else:
        out.write(csv_text)

    if trace.convergence_round is None:
        status = f"no convergence within t_max={cfg.t_max}, no agreement (e={trace.e[-1]})"
    elif trace.match:
        status = f"converged at t={trace.convergence_round}, match"
    else:
        status = f"converged at t={trace.convergence_round}, no agreement (e={trace.e[-1]})"
    summary = out if args.output else sys.stderr
    print(status, file=summary)
    print(f"consensus {_bits(trace.consensus)}, centralized f(u) {_bits(trace.y_star)}", file=summary)
    if trace.excluded:
        reasons = []
        if cfg.faults.permanent:
            reasons.append(f"faulty agents {_ids(cfg.faults.permanent)}")
        if any(r is not None for r in system.reachable):
            reasons.append("unreachable agents")
        print(f"excluded {trace.excluded} output cells ({', '.join(reasons)})", file=summary)
    return EXIT_OK if trace.match else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logicons", description="Logical consensus synthesis and simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="reachability report for every input")
    p.add_argument("config")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synthesize", help="write consensus update rules")
    p.add_argument("config")
    p.add_argument("--mode", choices=("linear", "robust"), default="linear")
    p.add_argument("--gamma", type=int, default=None, help="fault budget (robust mode)")
    p.add_argument("--allow-unreachable", action="store_true",
                   help="linear mode: synthesize over the reachable subgraph only")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("simulate", help="run a scenario against a rule file")
    p.add_argument("config")
    p.add_argument("rules")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    logging.basicConfig(level=os.environ.get("LOGICONS_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (ConfigError, RuleFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
