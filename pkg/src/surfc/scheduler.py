"""Cycle-by-cycle schedule construction and validation.

Two producers:

* ``schedule_limited`` — greedy per-cycle list scheduling for scarce fabric.
  Ready gates are served in priority order (longest dependent chain first,
  then most dependents, then gate id).  Lattice-surgery gates and
  opposite-cut braids take one cycle if a route is free.  A same-cut pair is
  either executed directly (three cycles, route held throughout) or one tile's
  cut is modified first (three cycles tile-local, then a one-cycle braid);
  the choice is scored by the M-value, which weighs cycles against lane
  pressure.  A tile that has sat idle lets the modification be backdated into
  those idle cycles, which is exactly the idle credit the M-value assumes.

* ``schedule_sufficient`` — when the chip capacity covers the layering width,
  each layer becomes one cycle of batch-routed gates.  For double defect the
  layer stream is cut into maximal prefixes whose communication sub-graph
  stays bipartite; each prefix runs under a two-coloring of its sub-graph and
  successive prefixes are separated by a three-cycle global cut remap.

``validate`` replays any schedule against the raw rules (completeness,
dependency order, per-cycle capacities, multi-cycle contiguity, cut
bookkeeping) and is run on every schedule the test suite produces.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .chip import ChipLayout, ChipModel
from .circuits import GateDag, LogicalCircuit, build_dag, two_coloring
from .errors import InfeasibleError, SchedulingError
from .placement import CutType, TileMapping
from .profiler import LayerSchedule
from .router import (
    CycleOccupancy,
    RoutePath,
    _bfs_route,
    _graph_for,
    find_path,
    resource_capacities,
    route_batch_guaranteed,
    tile_corners,
)

Tile = tuple[int, int]


class ActionKind(Enum):
    BRAID = "braid"     # double defect, opposite cuts, one cycle
    BELL = "bell"       # lattice surgery, one cycle, possibly empty route
    DIRECT = "direct"   # double defect, same cuts, three cycles with route held
    MODIFY = "modify"   # cut-type change, three cycles, tile-local


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    gate: int | None = None
    route: RoutePath | None = None
    tile: Tile | None = None
    new_cut: CutType | None = None
    phase: int | None = None  # 1..3 for DIRECT / MODIFY

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "gate": self.gate,
            "route": [list(n) for n in self.route.nodes] if self.route is not None else None,
            "tile": list(self.tile) if self.tile is not None else None,
            "cut": self.new_cut.value if self.new_cut is not None else None,
            "phase": self.phase,
        }


@dataclass
class EncodedSchedule:
    model: ChipModel
    cycles: list[list[Action]]
    layout: ChipLayout
    mapping: TileMapping
    initial_cuts: dict[int, CutType] | None
    strategy: str = ""

    @property
    def delta(self) -> int:
        return len(self.cycles)

    def to_json_dict(self) -> dict:
        return {
            "delta": self.delta,
            "cycles": [
                {"index": i, "actions": [a.to_json_dict() for a in acts]}
                for i, acts in enumerate(self.cycles)
            ],
        }


@dataclass(frozen=True)
class GatePriority:
    criticality: int  # longest chain of dependents, counting the gate itself
    remaining: int    # transitive dependents, counting the gate itself

    def sort_key(self, gid: int) -> tuple:
        return (-self.criticality, -self.remaining, gid)


def gate_priority(dag: GateDag, gate: int) -> GatePriority:
    return GatePriority(
        criticality=dag.depth_to_sink[gate],
        remaining=dag.descendant_counts()[gate] + 1,
    )


@dataclass(frozen=True)
class MValueInputs:
    m_t: int
    m_s: int
    theta: float

    @property
    def value(self) -> float:
        return self.m_t + self.theta * self.m_s


def m_value(
    circuit: LogicalCircuit,
    dag: GateDag,
    cuts: dict[int, CutType],
    gate: int,
    qubit: int,
    idle_cycles: int,
    ready_others: int,
    total_bandwidth: int,
    ) -> MValueInputs:
    """Score modifying ``qubit``'s tile to unblock a same-cut ``gate``.

    m_t: cycle delta of modify-then-braid (4) against direct (3), minus the
    idle credit — every cycle the tile already sat idle is a cycle the
    modification could have been running.  m_s: lane-cycle delta; a braid
    after modification holds one route-cycle against three for direct, so the
    baseline is -1, nudged by whether children on this qubit would end up
    same-cut (bad) or opposite-cut (good) after the flip.  theta scales lane
    pressure: many ready gates over little total bandwidth makes lanes
    precious.  Scaling theta further by the qubit count was ablation-tested
    and consistently wastes cycles, so pressure is demand over supply alone.
    """
    credit = min(3, idle_cycles)
    m_t = (4 - credit) - 3
    flipped = cuts[qubit].flipped
    m_s = -1
    for child in dag.children[gate]:
        cq, tq = circuit.gates[child].qubits
        if qubit in (cq, tq):
            other = tq if cq == qubit else cq
            m_s += 1 if cuts[other] is flipped else -1
    theta = 2.0 * ready_others / max(total_bandwidth, 1)
    return MValueInputs(m_t=m_t, m_s=m_s, theta=theta)


class _State:
    """Mutable bookkeeping for one limited-resources scheduling job."""

    def __init__(self, circuit: LogicalCircuit, layout: ChipLayout,
                 mapping: TileMapping, cuts: dict[int, CutType] | None):
        self.circuit = circuit
        self.layout = layout
        self.mapping = mapping
        self.dag = build_dag(circuit)
        self.occ = CycleOccupancy(layout)
        self.cycles: list[list[Action]] = []
        self.cuts_initial = dict(cuts) if cuts else None
        self.tile_cut: dict[Tile, CutType] = {}
        if cuts:
            for q, cell in mapping.positions.items():
                self.tile_cut[cell] = cuts[q]
        self.pending_flips: list[tuple[int, Tile, CutType]] = []  # (effective cycle, tile, cut)
        self.last_busy: dict[Tile, int] = {}
        self.indeg = [len(self.dag.parents[v]) for v in range(circuit.g)]
        self.earliest = [0] * circuit.g
        self.started: set[int] = set()
        self.done = 0
        if layout.model is ChipModel.LATTICE_SURGERY:
            self.data_tiles = mapping.data_tiles(layout)
        else:
            self.data_tiles = frozenset()

    def ensure_cycle(self, t: int) -> None:
        while len(self.cycles) <= t:
            self.cycles.append([])

    def add_action(self, t: int, action: Action) -> None:
        self.ensure_cycle(t)
        self.cycles[t].append(action)

    def op_tile(self, q: int) -> Tile:
        if self.layout.model is ChipModel.LATTICE_SURGERY:
            return self.mapping.abs_tile(self.layout, q)
        return self.mapping.tile_of(q)

    def busy(self, t: int, tile: Tile) -> bool:
        return self.occ.tile_busy(t, tile)

    def hold_tile(self, tile: Tile, start: int, duration: int) -> None:
        self.occ.commit_tile(tile, start, duration)
        self.last_busy[tile] = max(self.last_busy.get(tile, -1), start + duration - 1)

    def idle_cycles(self, tile: Tile, t: int) -> int:
        return t - self.last_busy.get(tile, -1) - 1

    def apply_flips(self, t: int) -> None:
        for eff, tile, cut in list(self.pending_flips):
            if eff <= t:
                self.tile_cut[tile] = cut
                self.pending_flips.remove((eff, tile, cut))

    def complete(self, gate: int, tc: int) -> None:
        self.started.add(gate)
        self.done += 1
        for c in self.dag.children[gate]:
            self.indeg[c] -= 1
            self.earliest[c] = max(self.earliest[c], tc + 1)


def schedule_limited(
    circuit: LogicalCircuit,
    layout: ChipLayout,
    mapping: TileMapping,
    cuts: dict[int, CutType] | None,
    order: str = "priority",
    samecut: str = "mvalue",
    strategy: str = "ecmas",
) -> EncodedSchedule:
    """Greedy per-cycle scheduling under scarce communication resources.

    ``order``: "priority" (criticality, dependents, id) or "program".
    ``samecut``: "mvalue" | "time" (min completion cycle) | "channel"
    (min lane occupation, i.e. always modify).
    """
    model = layout.model
    if model is ChipModel.DOUBLE_DEFECT and cuts is None:
        raise InfeasibleError("double-defect scheduling needs an initial cut assignment")
    st = _State(circuit, layout, mapping, cuts)
    g = circuit.g
    if g == 0:
        return EncodedSchedule(model, [], layout, mapping, st.cuts_initial, strategy)
    desc = st.dag.descendant_counts()
    prio = {
        v: GatePriority(st.dag.depth_to_sink[v], desc[v] + 1).sort_key(v)
        for v in range(g)
    }
    t = 0
    guard = 0
    while st.done < g:
        st.apply_flips(t)
        ready = [
            v for v in range(g)
            if v not in st.started and st.indeg[v] == 0 and st.earliest[v] <= t
        ]
        ready.sort(key=(lambda v: prio[v]) if order == "priority" else (lambda v: v))
        committed = False
        for v in ready:
            if _try_gate(st, t, v, ready_count=len(ready), samecut=samecut):
                committed = True
        if not committed and not st.occ.busy_tiles(t):
            stuck = ready[0] if ready else None
            raise SchedulingError(
                f"gate {stuck} cannot be routed on this chip "
                f"(cycle {t}, model {model.value}); mapping leaves it unreachable"
            )
        guard += 1
        if guard > 40 * g + 1000:
            raise SchedulingError("scheduler failed to converge; suspected livelock")
        t += 1
    while st.cycles and not st.cycles[-1]:
        st.cycles.pop()
    return EncodedSchedule(model, st.cycles, layout, mapping, st.cuts_initial, strategy)


def _merged_usage(st: _State, start: int, duration: int) -> dict:
    usage: dict = {}
    for t in range(start, start + duration):
        for res, u in st.occ.usage_map(t).items():
            usage[res] = max(usage.get(res, 0), u)
        if st.layout.model is ChipModel.LATTICE_SURGERY:
            for tile in st.occ.busy_tiles(t):
                usage[("t", tile[0], tile[1])] = 1
    return usage


def _route_over(st: _State, start: int, duration: int, ta: Tile, tb: Tile) -> RoutePath | None:
    graph = _graph_for(st.layout, st.data_tiles)
    cap = resource_capacities(st.layout)
    usage = _merged_usage(st, start, duration)
    return _bfs_route(graph, cap, usage, ta, tb, st.layout)


def _try_gate(st: _State, t: int, v: int, ready_count: int, samecut: str) -> bool:
    gate = st.circuit.gates[v]
    ta, tb = st.op_tile(gate.control), st.op_tile(gate.target)
    if st.busy(t, ta) or st.busy(t, tb):
        return False
    model = st.layout.model
    if model is ChipModel.LATTICE_SURGERY:
        path = find_path(st.layout, st.occ, t, ta, tb, st.data_tiles)
        if path is None:
            return False
        st.occ.commit_route(path, t, 1)
        st.hold_tile(ta, t, 1)
        st.hold_tile(tb, t, 1)
        st.add_action(t, Action(ActionKind.BELL, gate=v, route=path))
        st.complete(v, t)
        return True
    ca, cb = st.mapping.tile_of(gate.control), st.mapping.tile_of(gate.target)
    if st.tile_cut[ca] is not st.tile_cut[cb]:
        path = find_path(st.layout, st.occ, t, ca, cb)
        if path is None:
            return False
        st.occ.commit_route(path, t, 1)
        st.hold_tile(ca, t, 1)
        st.hold_tile(cb, t, 1)
        st.add_action(t, Action(ActionKind.BRAID, gate=v, route=path))
        st.complete(v, t)
        return True
    return _try_same_cut(st, t, v, ca, cb, ready_count, samecut)


def _try_same_cut(st: _State, t: int, v: int, ca: Tile, cb: Tile,
                  ready_count: int, samecut: str) -> bool:
    gate = st.circuit.gates[v]
    idle_a, idle_b = st.idle_cycles(ca, t), st.idle_cycles(cb, t)
    if samecut == "channel":
        choice = "modify"
    elif samecut == "time":
        # modify-then-braid finishes at t - min(3, idle) + 3; direct at t + 2
        best_idle = max(idle_a, idle_b)
        choice = "modify" if (3 - min(3, best_idle)) + 1 <= 2 else "direct"
    else:
        mv_a = m_value(st.circuit, st.dag, _qubit_cuts(st), v, gate.control,
                       idle_a, ready_count - 1, st.layout.total_bandwidth)
        mv_b = m_value(st.circuit, st.dag, _qubit_cuts(st), v, gate.target,
                       idle_b, ready_count - 1, st.layout.total_bandwidth)
        best = min(mv_a.value, mv_b.value)
        choice = "modify" if best < 0 else "direct"
    if choice == "modify":
        if samecut == "mvalue":
            pick_a = mv_a.value <= mv_b.value
        else:
            pick_a = idle_a >= idle_b
        tile, qubit, idle = (ca, gate.control, idle_a) if pick_a else (cb, gate.target, idle_b)
        return _commit_modify(st, t, tile, idle)
    path = _route_over(st, t, 3, ca, cb)
    if path is None:
        return False
    st.occ.commit_route(path, t, 3)
    st.hold_tile(ca, t, 3)
    st.hold_tile(cb, t, 3)
    for phase in (1, 2, 3):
        st.add_action(t + phase - 1, Action(ActionKind.DIRECT, gate=v, route=path, phase=phase))
    st.complete(v, t + 2)
    return True


def _commit_modify(st: _State, t: int, tile: Tile, idle: int) -> bool:
    """Start (possibly backdated) cut modification; the waiting gate braids
    once the flip lands.  Returns True: the modification itself is progress."""
    start = t - min(3, max(0, idle))
    new_cut = st.tile_cut[tile].flipped
    st.hold_tile(tile, start, 3)
    for phase in (1, 2, 3):
        st.add_action(start + phase - 1,
                      Action(ActionKind.MODIFY, tile=tile, new_cut=new_cut, phase=phase))
    st.pending_flips.append((start + 3, tile, new_cut))
    st.apply_flips(t)  # a fully backdated modify is already effective
    return True


def _qubit_cuts(st: _State) -> dict[int, CutType]:
    return {q: st.tile_cut[cell] for q, cell in st.mapping.positions.items()}


def baseline_schedule(
    kind: str,
    circuit: LogicalCircuit,
    layout: ChipLayout,
    mapping: TileMapping,
    cuts: dict[int, CutType] | None,
) -> EncodedSchedule:
    if kind == "circuit-order":
        return schedule_limited(circuit, layout, mapping, cuts,
                                order="program", strategy=kind)
    if kind == "time-first":
        return schedule_limited(circuit, layout, mapping, cuts,
                                samecut="time", strategy=kind)
    if kind == "channel-first":
        return schedule_limited(circuit, layout, mapping, cuts,
                                samecut="channel", strategy=kind)
    raise InfeasibleError(f"unknown baseline scheduler {kind!r}")


def bipartite_prefix(
    layers: LayerSchedule,
    start: int,
    circuit: LogicalCircuit,
) -> tuple[dict[int, int], int]:
    """Grow a communication sub-graph one layer at a time from ``start`` while
    it stays bipartite.  Returns (two-coloring, first unconsumed layer index).
    Any two adjacent layers have maximum degree two per qubit and cannot close
    an odd ring, so at least two layers are always consumed when available."""
    edges: set[tuple[int, int]] = set()
    coloring: dict[int, int] = {}
    end = start
    while end < layers.alpha:
        trial = set(edges)
        for gid in layers.layers[end]:
            a, b = circuit.gates[gid].qubits
            trial.add((min(a, b), max(a, b)))
        colors = two_coloring(circuit.n, trial)
        if colors is None:
            break
        coloring, edges = colors, trial
        end += 1
    if end == start:  # a single layer is a matching, always bipartite
        raise AssertionError("bipartite prefix consumed no layers")
    assert end - start >= 2 or end == layers.alpha, "two adjacent layers must be consumable"
    return coloring, end


def schedule_sufficient(
    layers: LayerSchedule,
    layout: ChipLayout,
    mapping: TileMapping,
    circuit: LogicalCircuit,
) -> tuple[EncodedSchedule, dict[int, CutType] | None]:
    """One batch-routed cycle per layer; double defect additionally remaps cut
    types between maximal bipartite layer prefixes (three cycles per remap)."""
    model = layout.model
    if layout.capacity < layers.pm:
        raise InfeasibleError(
            f"chip capacity {layout.capacity} < layering width {layers.pm}; "
            "use schedule_limited"
        )
    occ = CycleOccupancy(layout)
    cycles: list[list[Action]] = []
    if circuit.g == 0:
        return EncodedSchedule(model, [], layout, mapping, None, "resu"), None

    def batch(layer_gates, t: int, kind: ActionKind, data=frozenset()):
        if model is ChipModel.LATTICE_SURGERY:
            pairs = [
                (mapping.abs_tile(layout, circuit.gates[gid].control),
                 mapping.abs_tile(layout, circuit.gates[gid].target))
                for gid in layer_gates
            ]
        else:
            pairs = [
                (mapping.tile_of(circuit.gates[gid].control),
                 mapping.tile_of(circuit.gates[gid].target))
                for gid in layer_gates
            ]
        paths = route_batch_guaranteed(layout, pairs, data)
        acts = []
        for gid, path, (ta, tb) in zip(layer_gates, paths, pairs):
            occ.commit_route(path, t, 1)
            occ.commit_tile(ta, t, 1)
            occ.commit_tile(tb, t, 1)
            acts.append(Action(kind, gate=gid, route=path))
        return acts

    if model is ChipModel.LATTICE_SURGERY:
        data = mapping.data_tiles(layout)
        for i, layer in enumerate(layers.layers):
            cycles.append(batch(layer, i, ActionKind.BELL, data))
        return EncodedSchedule(model, cycles, layout, mapping, None, "resu"), None

    initial_cuts: dict[int, CutType] | None = None
    tile_cut: dict[Tile, CutType] = {}
    start = 0
    t = 0
    while start < layers.alpha:
        coloring, end = bipartite_prefix(layers, start, circuit)
        seg_cuts = {q: (CutType.Z if coloring.get(q) == 1 else CutType.X)
                    for q in range(circuit.n)}
        if initial_cuts is None:
            initial_cuts = seg_cuts
            for q, cell in mapping.positions.items():
                tile_cut[cell] = seg_cuts[q]
        else:
            # three-cycle global remap; only tiles whose cut flips act
            flips = []
            for q in coloring:
                cell = mapping.tile_of(q)
                want = seg_cuts[q]
                if tile_cut[cell] is not want:
                    flips.append((cell, want))
            if flips:
                for phase in (1, 2, 3):
                    cycles.append([
                        Action(ActionKind.MODIFY, tile=cell, new_cut=want, phase=phase)
                        for cell, want in flips
                    ])
                for cell, want in flips:
                    occ.commit_tile(cell, t, 3)
                    tile_cut[cell] = want
                t += 3
        for i in range(start, end):
            cycles.append(batch(layers.layers[i], t, ActionKind.BRAID))
            t += 1
        start = end
    return (
        EncodedSchedule(ChipModel.DOUBLE_DEFECT, cycles, layout, mapping,
                        initial_cuts, "resu"),
        initial_cuts,
    )


# ---------------------------------------------------------------------------
# validation

def validate(
    schedule: EncodedSchedule,
    circuit: LogicalCircuit,
    layout: ChipLayout,
    mapping: TileMapping,
) -> list[str]:
    """Replay a schedule against the ground rules; returns all violations."""
    v: list[str] = []
    model = schedule.model
    dag = build_dag(circuit)
    cap = resource_capacities(layout)
    data_tiles = mapping.data_tiles(layout) if model is ChipModel.LATTICE_SURGERY else frozenset()

    # gather per-gate execution spans and per-cycle resource/tile usage
    gate_span: dict[int, tuple[int, int]] = {}
    modify_runs: dict[tuple[Tile, int], list[tuple[int, CutType]]] = {}
    seen_direct: dict[int, list[tuple[int, int, RoutePath]]] = {}
    for t, actions in enumerate(schedule.cycles):
        tiles_this_cycle: list[Tile] = []
        usage: dict = {}
        for a in actions:
            if a.kind in (ActionKind.BRAID, ActionKind.BELL):
                if a.gate in gate_span:
                    v.append(f"gate {a.gate} executed more than once")
                gate_span[a.gate] = (t, t)
                _count_route(usage, a.route)
                tiles_this_cycle.extend(_operand_tiles(a.gate, circuit, mapping, layout, model))
                _check_route(v, a, circuit, mapping, layout, model, data_tiles)
            elif a.kind is ActionKind.DIRECT:
                seen_direct.setdefault(a.gate, []).append((t, a.phase, a.route))
                _count_route(usage, a.route)
                tiles_this_cycle.extend(_operand_tiles(a.gate, circuit, mapping, layout, model))
            elif a.kind is ActionKind.MODIFY:
                modify_runs.setdefault((a.tile, a.phase), []).append((t, a.new_cut))
                tiles_this_cycle.append(a.tile)
        for res, used in usage.items():
            if used > cap(res):
                v.append(f"cycle {t}: resource {res} used {used} > capacity {cap(res)}")
        seen_tiles = set()
        for tile in tiles_this_cycle:
            if tile in seen_tiles:
                v.append(f"cycle {t}: tile {tile} used by two actions")
            seen_tiles.add(tile)
        if model is ChipModel.LATTICE_SURGERY:
            for a in actions:
                if a.route is not None:
                    for node in a.route.nodes:
                        if node in data_tiles:
                            v.append(f"cycle {t}: route crosses data tile {node}")
                        if node in seen_tiles:
                            v.append(f"cycle {t}: route tile {node} collides with an operand")

    # direct gates: three consecutive phases with a pinned route
    for gid, entries in seen_direct.items():
        entries.sort()
        if [p for _, p, _ in entries] != [1, 2, 3]:
            v.append(f"gate {gid}: direct execution phases are {[p for _, p, _ in entries]}")
            continue
        times = [t for t, _, _ in entries]
        if times[1] != times[0] + 1 or times[2] != times[0] + 2:
            v.append(f"gate {gid}: direct execution not contiguous at {times}")
        if len({e[2].nodes for e in entries}) != 1:
            v.append(f"gate {gid}: direct execution changed route between phases")
        if gid in gate_span:
            v.append(f"gate {gid} executed more than once")
        gate_span[gid] = (times[0], times[2])

    # modify actions: group phase-1 starts, demand contiguity
    flips: list[tuple[int, Tile, CutType]] = []  # (effective cycle, tile, cut)
    for (tile, phase), entries in sorted(
        modify_runs.items(), key=lambda kv: (kv[0][1], kv[0][0])
    ):
        if phase != 1:
            continue
        for t0, cut in entries:
            for ph in (2, 3):
                follow = [e for e in modify_runs.get((tile, ph), []) if e[0] == t0 + ph - 1]
                if not follow:
                    v.append(f"tile {tile}: cut modification at {t0} missing phase {ph}")
            flips.append((t0 + 3, tile, cut))

    for gid in range(circuit.g):
        if gid not in gate_span:
            v.append(f"gate {gid} never executed")
    for u in range(circuit.g):
        for w in dag.children[u]:
            if u in gate_span and w in gate_span:
                if gate_span[u][1] >= gate_span[w][0]:
                    v.append(
                        f"dependency violated: gate {w} starts at {gate_span[w][0]} "
                        f"but parent {u} completes at {gate_span[u][1]}"
                    )

    # cut bookkeeping: braids need opposite cuts, directs equal cuts
    if model is ChipModel.DOUBLE_DEFECT and schedule.initial_cuts is not None:
        tile_cut = {
            mapping.tile_of(q): schedule.initial_cuts[q]
            for q in mapping.positions
        }
        flips.sort()
        fi = 0
        timeline = sorted(
            [(span[0], gid) for gid, span in gate_span.items()], key=lambda x: (x[0], x[1])
        )
        for t, gid in timeline:
            while fi < len(flips) and flips[fi][0] <= t:
                _, tile, cut = flips[fi]
                tile_cut[tile] = cut
                fi += 1
            ca = mapping.tile_of(circuit.gates[gid].control)
            cb = mapping.tile_of(circuit.gates[gid].target)
            kind = _gate_kind(schedule, gid)
            if kind is ActionKind.BRAID and tile_cut[ca] is tile_cut[cb]:
                v.append(f"gate {gid}: braid between same-cut tiles at cycle {t}")
            if kind is ActionKind.DIRECT and tile_cut[ca] is not tile_cut[cb]:
                v.append(f"gate {gid}: 3-cycle direct execution between opposite cuts at {t}")
    return v


def _gate_kind(schedule: EncodedSchedule, gid: int) -> ActionKind | None:
    for actions in schedule.cycles:
        for a in actions:
            if a.gate == gid:
                return a.kind
    return None


def _operand_tiles(gid, circuit, mapping, layout, model) -> list[Tile]:
    gate = circuit.gates[gid]
    if model is ChipModel.LATTICE_SURGERY:
        return [mapping.abs_tile(layout, gate.control), mapping.abs_tile(layout, gate.target)]
    return [mapping.tile_of(gate.control), mapping.tile_of(gate.target)]


def _count_route(usage: dict, route: RoutePath | None) -> None:
    if route is None:
        return
    for res in route.resources():
        usage[res] = usage.get(res, 0) + 1


def _check_route(v, action, circuit, mapping, layout, model, data_tiles) -> None:
    gate = circuit.gates[action.gate]
    route = action.route
    if model is ChipModel.LATTICE_SURGERY:
        ta = mapping.abs_tile(layout, gate.control)
        tb = mapping.abs_tile(layout, gate.target)
        nodes = route.nodes
        if not nodes:
            if abs(ta[0] - tb[0]) + abs(ta[1] - tb[1]) != 1:
                v.append(f"gate {action.gate}: empty route between non-adjacent tiles")
            return
        chain = [ta, *nodes, tb]
        for x, y in zip(chain, chain[1:]):
            if abs(x[0] - y[0]) + abs(x[1] - y[1]) != 1:
                v.append(f"gate {action.gate}: route chain broken between {x} and {y}")
        return
    ta, tb = mapping.tile_of(gate.control), mapping.tile_of(gate.target)
    nodes = route.nodes
    if len(nodes) < 2:
        v.append(f"gate {action.gate}: corridor route must hold at least one segment")
        return
    if nodes[0] not in tile_corners(ta) or nodes[-1] not in tile_corners(tb):
        v.append(f"gate {action.gate}: route endpoints not on operand tiles")
    for (i1, j1), (i2, j2) in zip(nodes, nodes[1:]):
        if abs(i1 - i2) + abs(j1 - j2) != 1:
            v.append(f"gate {action.gate}: junction route broken at {(i1, j1)}->{(i2, j2)}")
