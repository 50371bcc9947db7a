"""surfc: a surface-code circuit mapping and scheduling compiler.

Transforms logical CNOT circuits into cycle-by-cycle encoded schedules on a
2D-lattice chip, for both the double-defect (braiding) and lattice-surgery
models, minimizing the cycle count.
"""
from .chip import (
    ChipLayout,
    ChipModel,
    ChipSpec,
    channel_bandwidth,
    chip_capacity,
    config_dims,
    derive_layout,
    dims_for_avg_bandwidth,
)
from .circuits import CnotGate, CommGraph, GateDag, LogicalCircuit, build_comm_graph, build_dag, circuit
from .errors import (
    BudgetExceededError,
    CircuitError,
    InfeasibleError,
    QasmError,
    SchedulingError,
    SurfcError,
)
from .generate import gen_3sat_gadget, gen_random_circuit
from .harness import RunConfig, RunReport, compare, run, run_full, sweep
from .oracle import OracleBudget, optimal_cycles, optimal_pm, routing_feasible
from .placement import (
    ArrayShape,
    CutType,
    TileMapping,
    adjust_bandwidth,
    baseline_cuts,
    baseline_mapping,
    determine_shape,
    establish_mapping,
    init_cut_types,
    mapping_cost,
)
from .profiler import LayerSchedule, para_finding, slack_tiebreak
from .qasm import parse_qasm
from .router import CycleOccupancy, RoutePath, commit, find_path, route_batch_guaranteed
from .scheduler import (
    EncodedSchedule,
    GatePriority,
    MValueInputs,
    baseline_schedule,
    bipartite_prefix,
    gate_priority,
    m_value,
    schedule_limited,
    schedule_sufficient,
    validate,
)

__version__ = "0.1.0"
