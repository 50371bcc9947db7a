"""Brute-force reference computations for tiny instances.

Everything here is exhaustive-by-construction and budget-guarded: the oracle
refuses inputs beyond its budget rather than silently degrading.  It provides
the ground truth for derived test values: the true optimal layering width,
the true optimal cycle count under exactly the validator's rules, and exact
simultaneous-routability.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .chip import ChipLayout, ChipModel
from .circuits import GateDag, LogicalCircuit, build_dag
from .errors import BudgetExceededError
from .placement import CutType, TileMapping
from .router import RoutePath, _graph_for, resource_capacities

Tile = tuple[int, int]


@dataclass(frozen=True)
class OracleBudget:
    max_gates: int = 8
    max_qubits: int = 6
    max_grid: tuple[int, int] = (3, 3)
    max_routes_per_pair: int = 20000

    def check_circuit(self, g: int, n: int) -> None:
        if g > self.max_gates or n > self.max_qubits:
            raise BudgetExceededError(
                f"instance (g={g}, n={n}) exceeds oracle budget "
                f"(g<={self.max_gates}, n<={self.max_qubits})"
            )

    def check_grid(self, rows: int, cols: int) -> None:
        if rows > self.max_grid[0] or cols > self.max_grid[1]:
            raise BudgetExceededError(
                f"grid {rows}x{cols} exceeds oracle budget {self.max_grid}"
            )


DEFAULT_BUDGET = OracleBudget()


def optimal_pm(dag: GateDag, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """True circuit parallelism: minimum over all minimum-length layerings of
    the widest layer, by exhaustive assignment."""
    budget.check_circuit(dag.n_gates, 0)
    g = dag.n_gates
    if g == 0:
        return 0
    alpha = dag.alpha
    order = sorted(range(g), key=lambda v: (dag.depth_from_source[v], v))
    high = [alpha - dag.depth_to_sink[v] + 1 for v in range(g)]
    layer = [0] * g
    loads = [0] * (alpha + 1)
    best = g  # trivially achievable width bound

    def dfs(idx: int, width: int) -> None:
        nonlocal best
        if width >= best:
            return
        if idx == len(order):
            best = width
            return
        v = order[idx]
        lo = 1 + max((layer[p] for p in dag.parents[v]), default=0)
        for L in range(lo, high[v] + 1):
            layer[v] = L
            loads[L] += 1
            dfs(idx + 1, max(width, loads[L]))
            loads[L] -= 1
        layer[v] = 0

    dfs(0, 0)
    return best


def _all_minimal_routes(
    layout: ChipLayout,
    ta: Tile,
    tb: Tile,
    data_tiles: frozenset[Tile],
    budget: OracleBudget,
) -> list[frozenset]:
    """Resource sets of every inclusion-minimal simple route between two tiles.
    A route whose resources contain another route's resources can never help a
    packing, so dropping it keeps the search exact."""
    graph = _graph_for(layout, data_tiles)
    model = layout.model
    if model is ChipModel.LATTICE_SURGERY and abs(ta[0] - tb[0]) + abs(ta[1] - tb[1]) == 1:
        return [frozenset()]
    goals = set(graph.terminals(tb))
    found: list[tuple[tuple[Tile, ...], frozenset]] = []
    count = 0

    def resources_of(nodes: tuple[Tile, ...]) -> frozenset:
        return frozenset(RoutePath(model, nodes).resources())

    def dfs(node: Tile, visited: set[Tile], path: list[Tile]) -> None:
        nonlocal count
        count += 1
        if count > budget.max_routes_per_pair:
            raise BudgetExceededError("route enumeration exceeded oracle budget")
        for nxt, _seg in graph.neighbors(node):
            if nxt in visited:
                continue
            if nxt in goals and len(path) >= 1:
                found.append((tuple(path + [nxt]), resources_of(tuple(path + [nxt]))))
            visited.add(nxt)
            path.append(nxt)
            dfs(nxt, visited, path)
            path.pop()
            visited.remove(nxt)

    for start in sorted(graph.terminals(ta)):
        dfs(start, {start}, [start])
    minimal: list[frozenset] = []
    for _, res in sorted(found, key=lambda fr: len(fr[1])):
        if not any(other <= res for other in minimal):
            minimal.append(res)
    return minimal


_ROUTE_CACHE: dict = {}  # (layout, pair, data_tiles) -> minimal route resource sets


def _minimal_routes_cached(layout, pair, data_tiles, budget) -> list[frozenset]:
    key = (layout, pair, data_tiles)
    if key not in _ROUTE_CACHE:
        if len(_ROUTE_CACHE) > 50000:
            _ROUTE_CACHE.clear()
        _ROUTE_CACHE[key] = _all_minimal_routes(layout, pair[0], pair[1], data_tiles, budget)
    return _ROUTE_CACHE[key]


def _simul_routable(
    layout: ChipLayout,
    pairs: list[tuple[Tile, Tile]],
    fixed_usage: dict,
    data_tiles: frozenset[Tile],
    budget: OracleBudget,
    route_cache: dict,
) -> bool:
    """Exact test: can all pairs be routed at once on top of fixed usage?"""
    cap = resource_capacities(layout)

    def options(pair) -> list[frozenset]:
        if pair not in route_cache:
            route_cache[pair] = _minimal_routes_cached(layout, pair, data_tiles, budget)
        return route_cache[pair]

    ordered = sorted(pairs, key=lambda p: len(options(p)))

    def fits(res: frozenset, usage: dict) -> bool:
        return all(usage.get(r, 0) + 1 <= cap(r) for r in res)

    def dfs(idx: int, usage: dict) -> bool:
        if idx == len(ordered):
            return True
        for res in options(ordered[idx]):
            if fits(res, usage):
                for r in res:
                    usage[r] = usage.get(r, 0) + 1
                if dfs(idx + 1, usage):
                    return True
                for r in res:
                    usage[r] -= 1
        return False

    return dfs(0, dict(fixed_usage))


def routing_feasible(
    layout: ChipLayout,
    tile_pairs: list[tuple[Tile, Tile]],
    data_tiles: frozenset[Tile] = frozenset(),
    budget: OracleBudget = DEFAULT_BUDGET,
) -> bool:
    """Exhaustive simultaneous-routability of independent tile pairs."""
    budget.check_grid(layout.array_r, layout.array_c)
    if not tile_pairs:
        return True
    return _simul_routable(layout, tile_pairs, {}, data_tiles, budget, {})


def optimal_cycles(
    circuit: LogicalCircuit,
    layout: ChipLayout,
    mapping: TileMapping,
    cuts: dict[int, CutType] | None,
    budget: OracleBudget = DEFAULT_BUDGET,
    upper_bound: int | None = None,
) -> int:
    """Exact minimum cycle count by branch-and-bound over per-cycle action sets,
    under exactly the validator's rules (1-cycle braids/bells, 3-cycle direct
    same-cut executions holding their route, 3-cycle tile-local cut changes)."""
    budget.check_circuit(circuit.g, circuit.n)
    budget.check_grid(layout.array_r, layout.array_c)
    g = circuit.g
    if g == 0:
        return 0
    model = layout.model
    dag = build_dag(circuit)
    data_tiles = mapping.data_tiles(layout) if model is ChipModel.LATTICE_SURGERY else frozenset()
    cap = resource_capacities(layout)
    route_cache: dict = {}

    def op_tiles(v: int) -> tuple[Tile, Tile]:
        gate = circuit.gates[v]
        if model is ChipModel.LATTICE_SURGERY:
            return (mapping.abs_tile(layout, gate.control), mapping.abs_tile(layout, gate.target))
        return (mapping.tile_of(gate.control), mapping.tile_of(gate.target))

    def routes(v: int) -> list[frozenset]:
        pair = op_tiles(v)
        if pair not in route_cache:
            route_cache[pair] = _minimal_routes_cached(layout, pair, data_tiles, budget)
        return route_cache[pair]

    qubit_tile = dict(mapping.positions)
    tiles_sorted = sorted(mapping.positions.values())
    tile_index = {tile: i for i, tile in enumerate(tiles_sorted)}
    tile_qubit = {tile: q for q, tile in mapping.positions.items()}
    init_cuts: tuple[CutType, ...] | None = None
    if model is ChipModel.DOUBLE_DEFECT:
        assert cuts is not None, "double-defect oracle needs initial cuts"
        init_cuts = tuple(cuts[tile_qubit[t]] for t in tiles_sorted)

    parents_mask = [0] * g
    for v in range(g):
        for p in dag.parents[v]:
            parents_mask[v] |= 1 << p
    gates_of_qubit: dict[int, list[int]] = {}
    for v, gate in enumerate(circuit.gates):
        for q in gate.qubits:
            gates_of_qubit.setdefault(q, []).append(v)

    full_mask = (1 << g) - 1
    if upper_bound is None:
        upper_bound = 4 * g + 4
    best = upper_bound

    def lower_bound(mask: int, inflight) -> int:
        lb = 0
        for v in range(g):
            if not mask & (1 << v):
                lb = max(lb, dag.depth_to_sink[v])
        for entry in inflight:
            if entry[0] == "d":
                lb = max(lb, entry[2] + dag.depth_to_sink[entry[1]] - 1)
            else:
                lb = max(lb, entry[2])
        return lb

    seen: dict[tuple, int] = {}

    def dfs(t: int, mask: int, cuts_t, inflight: frozenset) -> None:
        nonlocal best
        if t + lower_bound(mask, inflight) >= best:
            return
        if mask == full_mask and not inflight:
            best = t
            return
        key = (mask, cuts_t, inflight)
        prev = seen.get(key)
        if prev is not None and prev <= t:
            return
        seen[key] = t

        busy: set[Tile] = set()
        fixed_usage: dict = {}
        for entry in inflight:
            if entry[0] == "d":
                _, v, _rem, res = entry
                ta, tb = op_tiles(v)
                busy.add(ta)
                busy.add(tb)
                for r in res:
                    fixed_usage[r] = fixed_usage.get(r, 0) + 1
            else:
                _, tile, _rem, _cut = entry
                busy.add(tile)

        ready = [
            v for v in range(g)
            if not mask & (1 << v) and (parents_mask[v] & mask) == parents_mask[v]
            and not any(entry[0] == "d" and entry[1] == v for entry in inflight)
        ]
        ready = [v for v in ready if not (set(op_tiles(v)) & busy)]

        braidable = []
        same_cut = []
        for v in ready:
            if model is ChipModel.LATTICE_SURGERY:
                braidable.append(v)
            else:
                ca = cuts_t[tile_index[mapping.tile_of(circuit.gates[v].control)]]
                cb = cuts_t[tile_index[mapping.tile_of(circuit.gates[v].target)]]
                (braidable if ca is not cb else same_cut).append(v)

        # cut modifications worth trying: tiles whose qubit still has work
        mod_tiles: list[Tile] = []
        if model is ChipModel.DOUBLE_DEFECT:
            for tile in tiles_sorted:
                if tile in busy:
                    continue
                q = tile_qubit[tile]
                if any(not mask & (1 << w) for w in gates_of_qubit.get(q, [])):
                    mod_tiles.append(tile)

        def directs_options(v: int):
            ta, tb = op_tiles(v)
            return [(v, res, (ta, tb)) for res in routes(v)]

        # enumerate lasting choices: subsets of modifies and direct starts
        mod_subsets = [()]
        for k in range(1, len(mod_tiles) + 1):
            mod_subsets.extend(itertools.combinations(mod_tiles, k))

        for mods in mod_subsets:
            busy2 = busy | set(mods)
            sc_avail = [v for v in same_cut if not (set(op_tiles(v)) & busy2)]
            direct_choices: list[list] = [[]]
            for v in sc_avail:
                new_choices = []
                for chosen in direct_choices:
                    new_choices.append(chosen)  # skip v
                    taken_tiles = set()
                    for (_, _, tls) in chosen:
                        taken_tiles.update(tls)
                    if not (set(op_tiles(v)) & taken_tiles):
                        for opt in directs_options(v):
                            new_choices.append(chosen + [opt])
                direct_choices = new_choices
            for directs in direct_choices:
                usage = dict(fixed_usage)
                ok = True
                for (_v, res, _tls) in directs:
                    for r in res:
                        usage[r] = usage.get(r, 0) + 1
                        if usage[r] > cap(r):
                            ok = False
                    if not ok:
                        break
                if not ok:
                    continue
                busy3 = set(busy2)
                for (_v, _res, tls) in directs:
                    busy3.update(tls)
                cand = [v for v in braidable if not (set(op_tiles(v)) & busy3)]
                # maximal braid subsets: adding a compatible braid never hurts
                for bset in _maximal_braid_sets(cand, usage, op_tiles, layout, data_tiles, budget, route_cache):
                    if not mods and not directs and not bset and not inflight:
                        continue  # pure idling with nothing in flight cannot help
                    new_mask = mask
                    for v in bset:
                        new_mask |= 1 << v
                    new_inflight = []
                    new_cuts = list(cuts_t)
                    for entry in inflight:
                        if entry[2] > 1:
                            new_inflight.append((entry[0], entry[1], entry[2] - 1, entry[3]))
                        elif entry[0] == "d":
                            new_mask |= 1 << entry[1]
                        else:
                            new_cuts[tile_index[entry[1]]] = entry[3]
                    for (v, res, _tls) in directs:
                        new_inflight.append(("d", v, 3 - 1, res))
                    for tile in mods:
                        new_cuts_val = cuts_t[tile_index[tile]].flipped
                        new_inflight.append(("m", tile, 3 - 1, new_cuts_val))
                    dfs(t + 1, new_mask, tuple(new_cuts), frozenset(new_inflight))

    had_hint = upper_bound < 4 * g + 4
    dfs(0, 0, init_cuts, frozenset())
    if not had_hint and best == 4 * g + 4:
        # 4 cycles per gate always suffice when single-gate routes exist, so
        # hitting the cap means some pair can never be routed on this mapping
        raise BudgetExceededError("instance is unschedulable: some gate has no route")
    return best


def _maximal_braid_sets(cand, usage, op_tiles, layout, data_tiles, budget, route_cache):
    """All maximal subsets of candidate one-cycle gates that are simultaneously
    routable on top of ``usage``.  Route choices are existential here: a
    one-cycle route leaves no trace in the next state, and executing a strict
    superset of gates never hurts, so only maximal sets need exploring."""
    feasible: dict[frozenset, bool] = {frozenset(): True}
    by_size: list[list[frozenset]] = [[frozenset()]]
    for size in range(1, len(cand) + 1):
        layer: list[frozenset] = []
        for prev in by_size[size - 1]:
            for v in cand:
                if v in prev:
                    continue
                trial = prev | {v}
                if trial in feasible:
                    continue
                ok = _simul_routable(
                    layout, [op_tiles(w) for w in sorted(trial)],
                    usage, data_tiles, budget, route_cache,
                )
                feasible[trial] = ok
                if ok:
                    layer.append(trial)
        if not layer:
            break
        by_size.append(layer)
    good = [s for s, ok in feasible.items() if ok]
    maximal = [tuple(sorted(s)) for s in good
               if not any(s < o for o, ok in feasible.items() if ok)]
    return maximal or [()]
