"""Command-line interface.

Subcommands: profile | chip | map | schedule | oracle | sweep | compare.
Exit codes: 0 ok, 1 usage error, 2 validation failure, 3 infeasible input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .bench import BENCHMARKS, benchmark
from .chip import ChipModel, ChipSpec, config_dims, derive_layout
from .circuits import build_comm_graph, build_dag
from .errors import BudgetExceededError, CircuitError, InfeasibleError, QasmError, SurfcError
from .generate import gen_random_circuit
from .harness import (
    RunConfig,
    config_from_mapping,
    compare,
    parse_config_file,
    report_json,
    run,
    run_full,
    sweep,
)
from .oracle import OracleBudget, optimal_cycles, optimal_pm, routing_feasible
from .placement import ArrayShape, establish_mapping, init_cut_types
from .profiler import para_finding
from .qasm import parse_qasm

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_INFEASIBLE = 0, 1, 2, 3


def _add_circuit_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--qasm", help="OpenQASM 2 file")
    src.add_argument("--bench", choices=sorted(BENCHMARKS), help="regenerated benchmark")
    src.add_argument("--random", metavar="N,DEPTH,PAR",
                     help="seeded random circuit with exact depth/parallelism")
    p.add_argument("--seed", type=int, default=0)


def _add_run_args(p: argparse.ArgumentParser) -> None:
    _add_circuit_args(p)
    p.add_argument("--model", choices=["dd", "ls"], default="dd")
    p.add_argument("--chip", default="min",
                   help="min | 4x | sufficient | <m1>x<m2>")
    p.add_argument("-d", "--distance", type=int, default=3)
    p.add_argument("--scheduler", default="ecmas",
                   choices=["ecmas", "resu", "circuit-order", "time-first", "channel-first"])
    p.add_argument("--mapping", default="ecmas", choices=["ecmas", "snake", "random"])
    p.add_argument("--cuts", default="ecmas", choices=["ecmas", "random", "maxcut"])
    p.add_argument("--trials", type=int, default=16)
    p.add_argument("--out", help="write the primary artifact here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default="json")


def _load_circuit(args):
    if args.qasm:
        with open(args.qasm, "r", encoding="utf-8") as fh:
            return parse_qasm(fh.read())
    if args.bench:
        return benchmark(args.bench)
    n, depth, par = (int(x) for x in args.random.split(","))
    return gen_random_circuit(n, depth, par, args.seed)


def _config_from_args(args) -> RunConfig:
    kwargs = dict(
        model=ChipModel(args.model),
        chip=args.chip,
        d=args.distance,
        scheduler=args.scheduler,
        mapping=args.mapping,
        cuts=args.cuts if args.model == "dd" else "ecmas",
        seed=args.seed,
        trials=args.trials,
    )
    if args.qasm:
        kwargs["qasm_path"] = args.qasm
    elif args.bench:
        kwargs["benchmark"] = args.bench
    else:
        n, depth, par = (int(x) for x in args.random.split(","))
        kwargs["random_params"] = (n, depth, par)
    return RunConfig(**kwargs)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)


def cmd_profile(args) -> int:
    circuit = _load_circuit(args)
    layers = para_finding(build_dag(circuit))
    _emit(json.dumps({
        "alpha": layers.alpha, "g": circuit.g, "pm_estimate": layers.pm,
    }), getattr(args, "out", None))
    return EXIT_OK


def cmd_chip(args) -> int:
    model = ChipModel(args.model)
    if args.chip in ("min", "4x", "sufficient"):
        dims = config_dims(args.chip, args.qubits, args.distance, model, pm=args.pm)
    else:
        m1, m2 = (int(x) for x in args.chip.split("x", 1))
        dims = (m1, m2)
    layout = derive_layout(ChipSpec(model, dims[0], dims[1], args.distance), args.qubits)
    _emit(json.dumps(layout.describe(), indent=2), args.out)
    return EXIT_OK


def cmd_map(args) -> int:
    circuit = _load_circuit(args)
    config = _config_from_args(args)
    dims = config_dims(args.chip, circuit.n, args.distance, config.model, pm=None) \
        if args.chip in ("min", "4x") else None
    if dims is None:
        m1, m2 = (int(x) for x in args.chip.split("x", 1))
        dims = (m1, m2)
    layout = derive_layout(ChipSpec(config.model, dims[0], dims[1], args.distance), circuit.n)
    comm = build_comm_graph(circuit)
    shape = ArrayShape(layout.array_r, layout.array_c)
    mapping = establish_mapping(comm, shape, trials=args.trials, seed=args.seed, layout=layout)
    if config.model is ChipModel.DOUBLE_DEFECT:
        mapping = mapping.with_cuts(init_cut_types(circuit, mapping))
    _emit(json.dumps(mapping.to_json_dict(), indent=2), args.out)
    return EXIT_OK


def cmd_schedule(args) -> int:
    config = _config_from_args(args)
    report, schedule = run_full(config)
    payload = {"report": report.to_json_dict(), "schedule": schedule.to_json_dict()}
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    budget = OracleBudget(max_gates=args.max_gates, max_qubits=args.max_qubits)
    circuit = _load_circuit(args)
    if args.query == "pm":
        value = optimal_pm(build_dag(circuit), budget)
        _emit(json.dumps({"pm_optimal": value}), getattr(args, "out", None))
        return EXIT_OK
    raise InfeasibleError(f"unsupported oracle query {args.query!r}")


def cmd_sweep(args) -> int:
    configs = []
    for path in args.config:
        with open(path, "r", encoding="utf-8") as fh:
            configs.append(config_from_mapping(parse_config_file(fh.read())))
    _rows, text = sweep(configs, workers=args.workers)
    _emit(text, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    with open(args.report_a, "r", encoding="utf-8") as fh:
        a = json.load(fh)
    with open(args.report_b, "r", encoding="utf-8") as fh:
        b = json.load(fh)
    pct = compare(a, b)
    _emit(json.dumps({"reduction_percent": round(pct, 1)}), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surfc",
                                     description="surface-code mapping and scheduling compiler")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="alpha, gate count, parallelism estimate")
    _add_circuit_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("chip", help="describe a chip layout")
    p.add_argument("action", choices=["describe"])
    p.add_argument("--model", choices=["dd", "ls"], default="dd")
    p.add_argument("--chip", default="min")
    p.add_argument("-d", "--distance", type=int, default=3)
    p.add_argument("-n", "--qubits", type=int, required=True)
    p.add_argument("--pm", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_chip)

    p = sub.add_parser("map", help="emit the initial tile mapping")
    _add_run_args(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("schedule", help="full compile: report plus encoded schedule")
    _add_run_args(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("oracle", help="exhaustive reference queries (tiny inputs only)")
    _add_circuit_args(p)
    p.add_argument("query", choices=["pm"])
    p.add_argument("--max-gates", type=int, default=8)
    p.add_argument("--max-qubits", type=int, default=6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="run configs from key=value files, emit CSV")
    p.add_argument("config", nargs="+", help="config files (key = value lines)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="cycle reduction percentage between two reports")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (QasmError, CircuitError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (InfeasibleError, BudgetExceededError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SurfcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
