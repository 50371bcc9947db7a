"""Benchmark circuits regenerated from their well-known definitions.

Only the CNOT skeletons matter here.  Structurally forced cases (GHZ chains,
fan-in circuits, plain chains, Ising layer circuits) reproduce the published
depth/gate counts exactly; the rest are stand-ins with the same communication
texture and are never used as golden values.
"""
from __future__ import annotations

from .circuits import LogicalCircuit, circuit
from .errors import InfeasibleError


def ghz(n: int) -> LogicalCircuit:
    """Chain of CNOTs q[i] -> q[i+1]; depth and gate count are both n-1."""
    return circuit(n, [(i, i + 1) for i in range(n - 1)])


def bv(n: int, ones: int) -> LogicalCircuit:
    """Fan-in circuit: ``ones`` controls all targeting the last qubit."""
    if ones >= n:
        raise InfeasibleError("fan-in needs ones < n")
    return circuit(n, [(i, n - 1) for i in range(ones)])


def chain_circuit(n: int, depth: int) -> LogicalCircuit:
    """Fully sequential circuit of the given depth zigzagging along the
    register; consecutive gates always share a qubit, so the DAG is a single
    chain and the depth equals the gate count."""
    period = max(1, 2 * (n - 2)) if n > 2 else 1
    pairs = []
    for t in range(depth):
        k = t % period
        if k >= n - 1:
            k = period - k
        pairs.append((k, k + 1))
    return circuit(n, pairs)


def qft_skeleton(n: int) -> LogicalCircuit:
    """CNOT skeleton of the textbook QFT: one interaction per qubit pair."""
    return circuit(n, [(j, i) for i in range(n) for j in range(i + 1, n)])


def ising_layers(n: int, rounds: int) -> LogicalCircuit:
    """Nearest-neighbor coupling layers: even pairs then odd pairs, repeated.
    Depth is 2*rounds, gates (n-1)*rounds."""
    pairs: list[tuple[int, int]] = []
    for _ in range(rounds):
        pairs.extend((i, i + 1) for i in range(0, n - 1, 2))
        pairs.extend((i, i + 1) for i in range(1, n - 1, 2))
    return circuit(n, pairs)


def wstate(n: int) -> LogicalCircuit:
    """W-state preparation skeleton: a control cascade down the register
    followed by the unentangling chain back."""
    pairs = [(i, i + 1) for i in range(n - 1)]
    pairs.extend((i + 1, i) for i in reversed(range(n - 1)))
    return circuit(n, pairs)


def swap_test(n: int) -> LogicalCircuit:
    """Swap-test style circuit: qubit 0 is the ancilla; each mirrored pair
    exchanges through a CNOT sandwich touching the ancilla."""
    if n < 3 or n % 2 == 0:
        raise InfeasibleError("swap test needs an odd register (ancilla + pairs)")
    half = (n - 1) // 2
    pairs: list[tuple[int, int]] = []
    for k in range(half):
        x, y = 1 + k, 1 + half + k
        pairs.extend([(0, x), (x, y), (y, x), (x, y)])
    return circuit(n, pairs)


BENCHMARKS = {
    "ghz_state_n23": lambda: ghz(23),
    "bv_10": lambda: bv(10, 5),
    "bv_50": lambda: bv(50, 27),
    "qpe_like_n9": lambda: chain_circuit(9, 42),
    "qft_10": lambda: qft_skeleton(10),
    "ising_n10": lambda: ising_layers(10, 10),
    "ising_n50": lambda: ising_layers(50, 2),
    "wstate_n27": lambda: wstate(27),
    "swap_test_n25": lambda: swap_test(25),
}


def benchmark(name: str) -> LogicalCircuit:
    try:
        return BENCHMARKS[name]()
    except KeyError:
        raise InfeasibleError(
            f"unknown benchmark {name!r}; known: {', '.join(sorted(BENCHMARKS))}"
        ) from None
