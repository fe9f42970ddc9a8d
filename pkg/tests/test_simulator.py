import csv
import io
import itertools

import numpy as np
import pytest

from logicons.boolmat import BoolMat
from logicons.config import load_config
from logicons.errors import ShapeError
from logicons.expr import And, BoolMap, InputVar, Not, StateVar, evaluate, input_vars
from logicons.simulator import (ConsensusSystem, DecisionSystem, FaultModel, build_consensus,
                                build_output_maps, disagreement, run, step, step_batch,
                                trace_header, trace_to_csv)

from helpers import SCENARIOS, fixture, random_reachable_spec


def single(spec):
    """Consensus on y = u1 over the first input."""
    return DecisionSystem.from_input_decisions((InputVar(0),), spec.m)


def two_decisions():
    # l1 = u1, l2 = !u2; y1 = l1 l2, y2 = !l2
    return DecisionSystem(2, (0, 1), (False, True), (And((StateVar(0), StateVar(1))), Not(StateVar(1))))


def table(expr, n_state):
    """Truth table over (own state row, inputs) for a 2-input decision."""
    return [bool(evaluate(expr, x, u)) for x in itertools.product((0, 1), repeat=n_state)
            for u in itertools.product((0, 1), repeat=2)]


class TestOutputMaps:
    def test_worked_output_maps(self):
        G = build_output_maps(two_decisions(), fixture("decisions_V"))
        X1, X2, u1, u2 = StateVar(0), StateVar(1), InputVar(0), InputVar(1)
        expected = [
            (And((u1, Not(u2))), u2),
            (And((X1, X2)), Not(X2)),
            (And((X1, Not(u2))), u2),
            (And((u1, X2)), Not(X2)),
        ]
        for got, want in zip(G, expected):
            assert [table(g, 2) for g in got] == [table(w, 2) for w in want]
        assert G[1] == (And((X1, X2)), Not(X2))

    def test_full_visibility_is_centralized(self):
        ds = two_decisions()
        for g in build_output_maps(ds, BoolMat.ones(3, 2)):
            for u in itertools.product((0, 1), repeat=2):
                assert tuple(int(evaluate(e, (0, 0), u)) for e in g) == ds.centralized(u)

    def test_no_visibility_reads_state_only(self):
        for g in build_output_maps(two_decisions(), BoolMat.zeros(3, 2)):
            assert all(not input_vars(e) for e in g)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            build_output_maps(two_decisions(), BoolMat.ones(3, 3))


class TestStep:
    def test_chain_hand_iteration(self, chain5):
        system = build_consensus(chain5, single(chain5))
        X = np.zeros((5, 1), dtype=bool)
        seen = []
        for _ in range(3):
            X = step(system, X, (1,))
            seen.append(X[:4, 0].astype(int).tolist())
        assert seen == [[1, 0, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]]

    def test_zero_input_stays_zero(self, chain5, tworoots, robust5):
        for spec, mode in ((chain5, "linear"), (tworoots, "linear"), (robust5, "robust")):
            system = build_consensus(spec, single(spec), mode, gamma=1)
            X = np.zeros((5, 1), dtype=bool)
            for _ in range(5):
                X = step(system, X, (0,))
                assert not X.any()

    def test_stuck_agent_is_masked(self, robust5):
        system = build_consensus(robust5, single(robust5), "robust", gamma=1)
        trace = run(system, single(robust5), np.zeros((5, 1)), (0,), FaultModel(permanent={1: 1}))
        assert trace.match
        final = trace.states[-1][:, 0]
        assert final[1] and not final[[0, 2, 3, 4]].any()

    def test_synchronous_update(self, rng):
        # reading only X(t) means any evaluation order gives the same X(t+1)
        for _ in range(10):
            spec = random_reachable_spec(rng, 6)
            system = build_consensus(spec, single(spec))
            X = rng.random((6, 1)) < 0.5
            expected = step(system, X, (1,))
            f = system.maps[0]
            for order in itertools.islice(itertools.permutations(range(6)), 30):
                nxt = np.zeros(6, dtype=bool)
                for i in order:
                    nxt[i] = evaluate(f.components[i], X[:, 0], (1,))
                assert np.array_equal(nxt, expected[:, 0])

    def test_batch_shape_checked(self, chain5):
        system = build_consensus(chain5, single(chain5))
        with pytest.raises(ShapeError):
            step_batch(system, np.zeros((2, 4, 1)), (1,))


class TestDisagreement:
    def test_consensus_and_complement(self):
        ds = two_decisions()
        u = (1, 0)
        y = np.array(ds.centralized(u), dtype=bool)
        Y = np.tile(y, (4, 1))
        assert disagreement(Y, ds, u) == 0
        assert disagreement(~Y, ds, u) == 4 * 2

    def test_chain_mid_run(self, chain5):
        system = build_consensus(chain5, single(chain5))
        trace = run(system, single(chain5), np.zeros((5, 1)), (1,))
        assert trace.e[1] == 3
        assert trace.excluded == 1 and not trace.counted[4, 0]
        assert trace.match and trace.convergence_round == 3


class TestRun:
    def test_scenario_converges_in_two_rounds(self):
        cfg = load_config(SCENARIOS / "ids.json")
        system = build_consensus(cfg.spec, cfg.decision_system, "linear")
        trace = run(system, cfg.decision_system, cfg.x0(), cfg.inputs, t_max=cfg.t_max)
        assert trace.e[1] > 0 and trace.e[2] == 0
        assert trace.agreement_round == 2 and trace.convergence_round == 2
        assert trace.match and trace.consensus == trace.y_star

    def test_stuck_agent_breaks_linear_but_not_robust(self):
        cfg = load_config(SCENARIOS / "ids_fault.json")
        ds = cfg.decision_system
        linear = run(build_consensus(cfg.spec, ds, "linear"), ds, cfg.x0(), cfg.inputs, cfg.faults, 50)
        assert min(linear.e) > 0 and not linear.match
        robust = run(build_consensus(cfg.spec, ds, "robust", cfg.gamma), ds, cfg.x0(), cfg.inputs, cfg.faults, 50)
        assert robust.e[-1] == 0 and robust.match

    def test_attractive_equilibrium_absorbs_neighbours(self, map3):
        f = BoolMap(3, 1, map3.components)
        system = ConsensusSystem((f,), (None,), BoolMat.zeros(3, 1))
        ds = DecisionSystem(1, (0,), (False,), (StateVar(0),))
        target = np.array([0, 1, 0], dtype=bool)
        for j in range(-1, 3):
            x0 = target.copy()
            if j >= 0:
                x0[j] ^= True
            trace = run(system, ds, x0.reshape(3, 1), (0,))
            assert trace.convergence_round is not None
            assert np.array_equal(trace.states[-1][:, 0], target)

    def test_two_decisions(self):
        cfg = load_config(SCENARIOS / "decisions.json")
        ds = cfg.decision_system
        for u in itertools.product((0, 1), repeat=2):
            trace = run(build_consensus(cfg.spec, ds), ds, cfg.x0(), u, t_max=10)
            assert trace.match and trace.consensus == ds.centralized(u)

    def test_temporary_faults_heal(self, tworoots):
        system = build_consensus(tworoots, single(tworoots))
        X0 = np.ones((5, 1), dtype=bool)
        for k in range(1, 6):
            for flips in itertools.combinations(range(5), k):
                faults = FaultModel(temporary=frozenset((i, 0) for i in flips))
                trace = run(system, single(tworoots), X0, (1,), faults)
                assert trace.match and trace.convergence_round <= system.rounds

    def test_match_iff_consensus_equals_decision(self, rng):
        for _ in range(30):
            spec = random_reachable_spec(rng, int(rng.integers(1, 8)))
            system = build_consensus(spec, single(spec))
            u = (int(rng.integers(2)),)
            trace = run(system, single(spec), rng.random((spec.n, 1)) < 0.5, u)
            assert trace.convergence_round <= system.rounds
            assert trace.match == (trace.consensus == trace.y_star)
            assert all(e == 0 for e in trace.e[trace.convergence_round:])

    def test_t_max_checked(self, chain5):
        with pytest.raises(ValueError):
            run(build_consensus(chain5, single(chain5)), single(chain5), np.zeros((5, 1)), (1,), t_max=0)


class TestCsv:
    def test_header(self):
        assert trace_header(2, 1, 2) == ["t", "e", "X1.1", "X2.1", "Y1.1", "Y1.2", "Y2.1", "Y2.2"]

    def test_rows(self, chain5):
        trace = run(build_consensus(chain5, single(chain5)), single(chain5), np.zeros((5, 1)), (1,))
        rows = list(csv.reader(io.StringIO(trace_to_csv(trace))))
        assert rows[0] == trace_header(5, 1, 1)
        assert len(rows) == len(trace.states) + 1
        assert rows[2] == ["1", "3", "1", "0", "0", "0", "0", "1", "0", "0", "0", "0"]
        assert all(set(r[2:]) <= {"0", "1"} for r in rows[1:])
