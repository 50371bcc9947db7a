import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfc.circuits import build_dag, circuit
from surfc.errors import CircuitError
from surfc.generate import gen_random_circuit
from surfc.oracle import OracleBudget, optimal_pm
from surfc.profiler import para_finding, slack_tiebreak


def _layering_is_valid(layers, dag):
    assert layers.alpha == dag.alpha
    seen = set()
    for layer in layers.layers:
        seen.update(layer)
    assert seen == set(range(dag.n_gates))
    pos = layers.layer_of
    for u, v in dag.edges:
        assert pos[u] < pos[v]


class TestParaFinding:
    def test_chain(self):
        c = circuit(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        layers = para_finding(build_dag(c))
        assert layers.layers == ((0,), (1,), (2,), (3,))
        assert layers.pm == 1

    def test_independent_gates_one_layer(self):
        c = circuit(10, [(2 * i, 2 * i + 1) for i in range(5)])
        layers = para_finding(build_dag(c))
        assert layers.alpha == 1
        assert layers.pm == 5

    def test_matches_oracle_on_random_dags(self, rng):
        budget = OracleBudget(max_gates=10, max_qubits=8)
        for trial in range(40):
            n = rng.randint(3, 8)
            pairs = []
            for _ in range(rng.randint(1, 7)):
                a, b = rng.sample(range(n), 2)
                pairs.append((a, b))
            c = circuit(n, pairs)
            dag = build_dag(c)
            layers = para_finding(dag)
            _layering_is_valid(layers, dag)
            assert layers.pm >= optimal_pm(dag, budget)

    def test_seeded_random_dag_equals_oracle(self):
        c = circuit(8, [(0, 1), (2, 3), (4, 5), (6, 7), (1, 2), (5, 6), (3, 4)])
        dag = build_dag(c)
        layers = para_finding(dag)
        assert layers.pm == optimal_pm(dag, OracleBudget(max_gates=10, max_qubits=8))

    def test_empty_dag(self):
        layers = para_finding(build_dag(circuit(2, [])))
        assert layers.alpha == 0 and layers.pm == 0

    def test_disjoint_equal_chains_exact(self):
        # union of k disjoint equal-length chains: estimate is exactly k
        for k in (2, 3, 4):
            pairs = []
            for chain in range(k):
                a, b = 2 * chain, 2 * chain + 1
                pairs.extend([(a, b)] * 4)
            c = circuit(2 * k, pairs)
            layers = para_finding(build_dag(c))
            assert layers.alpha == 4
            assert layers.pm == k


class TestSlackTiebreak:
    def test_forced_gate_first(self):
        low = {0: 1, 1: 1}
        high = {0: 1, 1: 3}
        gate, layer = slack_tiebreak({0, 1}, low, high, [0, 0, 0, 0])
        assert gate == 0 and layer == 1

    def test_least_loaded_layer(self):
        low, high = {7: 1}, {7: 3}
        loads = [0, 2, 0, 1]
        gate, layer = slack_tiebreak({7}, low, high, loads)
        assert (gate, layer) == (7, 2)

    def test_documented_tie_break(self):
        low = {0: 1, 1: 1}
        high = {0: 2, 1: 2}
        gate, layer = slack_tiebreak({0, 1}, low, high, [0, 1, 1])
        assert (gate, layer) == (0, 1)

    def test_empty_candidates_error(self):
        with pytest.raises(CircuitError):
            slack_tiebreak(set(), {}, {}, [0])


class TestProfilerInvariants:
    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_pigeonhole_lower_bound(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 10)
        pairs = []
        for _ in range(rng.randint(1, 16)):
            a, b = rng.sample(range(n), 2)
            pairs.append((a, b))
        c = circuit(n, pairs)
        dag = build_dag(c)
        layers = para_finding(dag)
        _layering_is_valid(layers, dag)
        assert layers.pm >= -(-c.g // dag.alpha)

    def test_never_beats_optimum_small(self):
        budget = OracleBudget(max_gates=10, max_qubits=8)
        rng = random.Random(17)
        for _ in range(60):
            n = rng.randint(2, 7)
            g = rng.randint(1, 10)
            pairs = []
            for _ in range(g):
                a, b = rng.sample(range(n), 2)
                pairs.append((a, b))
            dag = build_dag(circuit(n, pairs))
            assert para_finding(dag).pm >= optimal_pm(dag, budget)

    def test_generated_circuits_estimate_exact(self):
        for seed in range(25):
            rng = random.Random(seed)
            n = rng.randint(4, 10)
            depth = rng.randint(1, 6)
            par = rng.randint(1, n // 2)
            c = gen_random_circuit(n, depth, par, seed=seed)
            layers = para_finding(build_dag(c))
            assert layers.pm == par
            assert layers.alpha == depth
