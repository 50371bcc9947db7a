"""End-to-end pipeline: configuration, runs, sweeps, comparisons.

A run is parse/generate -> profile -> layout -> map -> (adjust) -> (cuts) ->
schedule -> validate, wrapped in a ``RunReport``.  Reports from invalid
schedules are never tabulated: the harness raises instead.  Sweeps fan runs
out over a worker pool (rows are independent) and emit one CSV row per run,
including the compile-time ratio against the minimum-viable chip row of the
same group.
"""
from __future__ import annotations

import csv
import io
import json
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import bench
from .chip import ChipLayout, ChipModel, ChipSpec, config_dims, derive_layout
from .circuits import LogicalCircuit, build_comm_graph, build_dag
from .errors import InfeasibleError, SurfcError
from .generate import gen_random_circuit
from .placement import (
    ArrayShape,
    CutType,
    TileMapping,
    adjust_bandwidth,
    baseline_cuts,
    baseline_mapping,
    establish_mapping,
    init_cut_types,
    repair_mapping,
)
from .profiler import para_finding
from .qasm import parse_qasm
from .scheduler import (
    EncodedSchedule,
    baseline_schedule,
    schedule_limited,
    schedule_sufficient,
    validate,
)

SCHEDULERS = ("ecmas", "resu", "circuit-order", "time-first", "channel-first")
MAPPINGS = ("ecmas", "snake", "random")
CUTS = ("ecmas", "random", "maxcut")


@dataclass(frozen=True)
class RunConfig:
    qasm_path: str | None = None
    benchmark: str | None = None
    random_params: tuple[int, int, int] | None = None  # n, depth, parallelism
    model: ChipModel = ChipModel.DOUBLE_DEFECT
    chip: str = "min"          # min | 4x | sufficient | <m1>x<m2>
    d: int = 3
    scheduler: str = "ecmas"
    mapping: str = "ecmas"
    cuts: str = "ecmas"
    seed: int = 0
    trials: int = 16
    timing_runs: int = 1
    label: str = ""

    def __post_init__(self):
        if self.scheduler not in SCHEDULERS:
            raise InfeasibleError(f"unknown scheduler {self.scheduler!r}")
        if self.mapping not in MAPPINGS:
            raise InfeasibleError(f"unknown mapping kind {self.mapping!r}")
        if self.cuts not in CUTS:
            raise InfeasibleError(f"unknown cut kind {self.cuts!r}")
        if self.model is ChipModel.LATTICE_SURGERY and self.cuts != "ecmas":
            raise InfeasibleError("cut-type options only apply to the double-defect model")
        sources = [self.qasm_path, self.benchmark, self.random_params]
        if sum(s is not None for s in sources) != 1:
            raise InfeasibleError("exactly one circuit source must be given")


@dataclass
class RunReport:
    label: str
    n: int
    alpha: int
    g: int
    pm_estimate: int
    model: str
    chip: str
    chip_dims: tuple[int, int]
    bandwidth: int
    capacity: int
    delta: int
    compile_seconds: float
    valid: bool
    scheduler: str
    mapping: str
    cuts: str
    seed: int

    def to_json_dict(self) -> dict:
        return dict(self.__dict__)


CSV_FIELDS = [
    "label", "n", "alpha", "g", "pm_estimate", "model", "chip", "chip_dims",
    "bandwidth", "capacity", "delta", "compile_seconds", "valid",
    "scheduler", "mapping", "cuts", "seed", "time_ratio",
]


def load_circuit(config: RunConfig) -> LogicalCircuit:
    if config.qasm_path is not None:
        with open(config.qasm_path, "r", encoding="utf-8") as fh:
            return parse_qasm(fh.read())
    if config.benchmark is not None:
        return bench.benchmark(config.benchmark)
    n, depth, parallelism = config.random_params
    return gen_random_circuit(n, depth, parallelism, config.seed)


def chip_dims(config: RunConfig, n: int, pm: int) -> tuple[int, int]:
    if "x" in config.chip and config.chip not in ("4x",):
        m1, m2 = config.chip.split("x", 1)
        return (int(m1), int(m2))
    return config_dims(config.chip, n, config.d, config.model, pm=pm)


def compile_once(config: RunConfig, circuit: LogicalCircuit):
    """One full pipeline pass; returns (schedule, layout, mapping, layers)."""
    comm = build_comm_graph(circuit)
    dag = build_dag(circuit)
    layers = para_finding(dag)
    dims = chip_dims(config, circuit.n, layers.pm)
    spec = ChipSpec(config.model, dims[0], dims[1], config.d)
    if circuit.n == 0:
        layout = derive_layout(spec, 0)
        mapping = TileMapping(ArrayShape(0, 0), {})
        return schedule_limited(circuit, layout, mapping, {}, strategy=config.scheduler), layout, mapping, layers
    if config.scheduler == "resu":
        layout = derive_layout(spec, circuit.n, distribute=True)
    else:
        layout = derive_layout(spec, circuit.n, distribute=False)
    shape = ArrayShape(layout.array_r, layout.array_c)
    if config.mapping == "ecmas":
        mapping = establish_mapping(comm, shape, trials=config.trials,
                                    seed=config.seed, layout=layout)
    else:
        mapping = baseline_mapping(config.mapping, circuit.n, shape, seed=config.seed)
    if config.scheduler != "resu":
        layout = adjust_bandwidth(layout, mapping, circuit)
        if config.mapping == "ecmas":
            mapping = repair_mapping(mapping, comm, layout)
    cuts: dict[int, CutType] | None = None
    if config.model is ChipModel.DOUBLE_DEFECT and config.scheduler != "resu":
        if config.cuts == "ecmas":
            cuts = init_cut_types(circuit, mapping)
        else:
            cuts = baseline_cuts(config.cuts, comm, seed=config.seed)
        mapping = mapping.with_cuts(cuts)
    if config.scheduler == "resu":
        schedule, initial = schedule_sufficient(layers, layout, mapping, circuit)
        if initial is not None:
            mapping = mapping.with_cuts(initial)
            schedule.mapping = mapping
    elif config.scheduler == "ecmas":
        schedule = schedule_limited(circuit, layout, mapping, cuts, strategy="ecmas")
    else:
        schedule = baseline_schedule(config.scheduler, circuit, layout, mapping, cuts)
    return schedule, layout, mapping, layers


def _execute(config: RunConfig) -> tuple[RunReport, EncodedSchedule]:
    circuit = load_circuit(config)
    times = []
    schedule = layout = mapping = layers = None
    for _ in range(max(1, config.timing_runs)):
        t0 = time.monotonic()
        schedule, layout, mapping, layers = compile_once(config, circuit)
        times.append(time.monotonic() - t0)
    violations = validate(schedule, circuit, layout, mapping)
    if violations:
        raise SurfcError(
            f"schedule failed validation ({len(violations)} violations): "
            + "; ".join(violations[:5])
        )
    dag = build_dag(circuit)
    if schedule.delta < dag.alpha:
        raise SurfcError(f"delta {schedule.delta} below critical path {dag.alpha}")
    report = RunReport(
        label=config.label or (config.benchmark or config.qasm_path or
                               f"random{config.random_params}"),
        n=circuit.n,
        alpha=dag.alpha,
        g=circuit.g,
        pm_estimate=layers.pm,
        model=config.model.value,
        chip=config.chip,
        chip_dims=(layout.m1, layout.m2),
        bandwidth=layout.bandwidth,
        capacity=layout.capacity,
        delta=schedule.delta,
        compile_seconds=statistics.median(times),
        valid=True,
        scheduler=config.scheduler,
        mapping=config.mapping,
        cuts=config.cuts,
        seed=config.seed,
    )
    return report, schedule


def run(config: RunConfig) -> RunReport:
    return _execute(config)[0]


def run_full(config: RunConfig) -> tuple[RunReport, EncodedSchedule]:
    """Like ``run`` but also returns the schedule for serialization."""
    return _execute(config)


def _run_one(config: RunConfig) -> tuple[RunConfig, RunReport | None, str]:
    try:
        return (config, run(config), "")
    except SurfcError as exc:
        return (config, None, str(exc))


def sweep(configs: list[RunConfig], workers: int = 1) -> tuple[list[dict], str]:
    """Run every config (partial failures recorded per row); returns
    (rows, csv_text).  Rows carry the compile-time ratio against the
    minimum-chip row of the same (label, model, scheduler) group."""
    results: list[tuple[RunConfig, RunReport | None, str]] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, configs))
    else:
        results = [_run_one(c) for c in configs]
    min_time: dict[tuple, float] = {}
    for config, report, _err in results:
        if report and config.chip == "min":
            key = (report.label, report.model, report.scheduler, report.seed)
            min_time[key] = report.compile_seconds
    rows: list[dict] = []
    for config, report, err in results:
        if report is None:
            rows.append({"label": config.label, "valid": False, "error": err})
            continue
        row = report.to_json_dict()
        key = (report.label, report.model, report.scheduler, report.seed)
        base = min_time.get(key)
        row["time_ratio"] = (
            round(report.compile_seconds / base, 3) if base else ""
        )
        rows.append(row)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS + ["error"], extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return rows, buf.getvalue()


def compare(report_a: RunReport | dict, report_b: RunReport | dict) -> float:
    """Cycle reduction of B against A as a percentage: (dA - dB) / dA * 100."""
    a = report_a.to_json_dict() if isinstance(report_a, RunReport) else report_a
    b = report_b.to_json_dict() if isinstance(report_b, RunReport) else report_b
    for key in ("label", "chip_dims", "model"):
        if tuple(map(str, _as_tuple(a.get(key)))) != tuple(map(str, _as_tuple(b.get(key)))):
            raise InfeasibleError(f"reports disagree on {key}: {a.get(key)} vs {b.get(key)}")
    da, db = a["delta"], b["delta"]
    if da == 0:
        return 0.0
    return (da - db) / da * 100.0


def _as_tuple(v):
    return tuple(v) if isinstance(v, (list, tuple)) else (v,)


def parse_config_file(text: str) -> dict:
    """Key/value config: one ``key = value`` per line, ``#`` comments.
    Values: integers, true/false, or bare strings.  Keys mirror CLI flags."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InfeasibleError(f"config line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if value.lower() in ("true", "false"):
            out[key] = value.lower() == "true"
        else:
            try:
                out[key] = int(value)
            except ValueError:
                out[key] = value
    return out


def config_from_mapping(data: dict) -> RunConfig:
    kwargs: dict = {}
    plain = {"chip", "scheduler", "mapping", "cuts", "d", "seed", "trials",
             "timing_runs", "label"}
    for key, value in data.items():
        if key == "model":
            kwargs["model"] = ChipModel(value)
        elif key == "qasm":
            kwargs["qasm_path"] = value
        elif key == "benchmark":
            kwargs["benchmark"] = value
        elif key == "random":
            n, depth, par = (int(x) for x in str(value).split(","))
            kwargs["random_params"] = (n, depth, par)
        elif key in plain:
            kwargs[key] = value
        else:
            raise InfeasibleError(f"unknown config key {key!r}")
    return RunConfig(**kwargs)


def report_json(report: RunReport) -> str:
    return json.dumps(report.to_json_dict(), indent=2, sort_keys=True)
