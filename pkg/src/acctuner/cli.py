"""Command-line interface.

Subcommands mirror the pipeline stages so each step can run on its own:

    acctuner analyze        loop tree and access dump
    acctuner gate           profiling gate verdict
    acctuner check          per-loop parallelizability verdicts
    acctuner plan-transfers data-directive plan for a genome bitstring
    acctuner emit           annotated source for a genome bitstring
    acctuner tune           the full search pipeline

Genome bitstrings are written most-significant-first in genome-map order:
the leftmost character controls the lowest eligible loop id.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import (
    DEFAULT_GATE_THRESHOLD,
    ExternalOracle,
    build_genome_map,
    check_all_parallelizable,
    gate,
    load_profile,
)
from .emitter import emit_annotated
from .errors import (
    AutotunerError,
    EmptyGenome,
    ExternalOracleError,
    InvalidGenome,
    ModelError,
    ParseError,
    ProfileError,
    SpawnError,
)
from .ga import GAConfig
from .loops import build_loop_tree, extract_accesses
from .parser import parse
from .pipeline import (
    EXIT_EVALUATOR_FAILURE,
    EXIT_GATE_REJECT,
    EXIT_NO_OFFLOADABLE_LOOPS,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    EXIT_PROFILE_ERROR,
    PipelineConfig,
    run_pipeline,
)
from .transfer import plan_to_dict, plan_transfers

_ERROR_EXIT_CODES = (
    (ParseError, EXIT_PARSE_ERROR),
    (ProfileError, EXIT_PROFILE_ERROR),
    (EmptyGenome, EXIT_NO_OFFLOADABLE_LOOPS),
    ((ModelError, SpawnError, ExternalOracleError), EXIT_EVALUATOR_FAILURE),
)


def _exit_code_for(exc: AutotunerError) -> int:
    for types, code in _ERROR_EXIT_CODES:
        if isinstance(exc, types):
            return code
    return 1


def _load_program(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read source: {exc}", 1, 1, path) from exc
    program = parse(text, path)
    return program, build_loop_tree(program), extract_accesses(program)


def _emit_json(data: dict, out: str | None):
    text = json.dumps(data, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_source(p: argparse.ArgumentParser):
    p.add_argument("--source", required=True, help="C-like source file")


def _add_ga_flags(p: argparse.ArgumentParser):
    p.add_argument("--pop", type=int, default=30, help="population size M")
    p.add_argument("--gens", type=int, default=20, help="generation count T")
    p.add_argument("--pc", type=float, default=0.9, help="crossover rate")
    p.add_argument("--pm", type=float, default=0.05, help="mutation rate")
    p.add_argument("--timeout", type=float, default=180.0,
                   help="per-measurement timeout in seconds")
    p.add_argument("--penalty", type=float, default=1000.0,
                   help="assumed seconds for timed-out or invalid individuals")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--workers", type=int, default=1,
                   help="concurrent evaluations per generation")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acctuner",
        description="GPU-offload autotuner for C-like sources")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="dump the loop tree and variable accesses")
    _add_source(p)
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("gate", help="profiling gate on loop iteration counts")
    _add_source(p)
    p.add_argument("--profile", required=True, help="loop-count profile JSON")
    p.add_argument("--gate-threshold", type=int, default=DEFAULT_GATE_THRESHOLD)
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("check", help="per-loop parallelizability verdicts")
    _add_source(p)
    p.add_argument("--oracle", default="builtin",
                   help="'builtin' or cmd:<config.json> with a compile_cmd template")
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("plan-transfers", help="data-directive plan for a genome")
    _add_source(p)
    p.add_argument("--genome", required=True, help="0/1 bitstring over eligible loops")
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("emit", help="annotated source for a genome")
    _add_source(p)
    p.add_argument("--genome", required=True, help="0/1 bitstring over eligible loops")
    p.add_argument("--out", help="write the annotated source here instead of stdout")

    p = sub.add_parser("tune", help="full pipeline: gate, search, emit, report")
    _add_source(p)
    p.add_argument("--profile", required=True, help="loop-count profile JSON")
    p.add_argument("--evaluator", required=True,
                   help="sim:<costmodel.json> or cmd:<config.json>")
    p.add_argument("--gate-threshold", type=int, default=DEFAULT_GATE_THRESHOLD)
    _add_ga_flags(p)
    p.add_argument("--out", required=True, help="annotated best source path")
    p.add_argument("--report", required=True, help="JSON report path")

    return parser


def _cmd_analyze(args) -> int:
    program, tree, accesses = _load_program(args.source)
    data = {
        "functions": [fn.name for fn in program.functions],
        "loops": [
            {
                "loop_id": n.loop_id,
                "kind": n.kind,
                "parent": n.parent,
                "function": n.function,
                "line": n.header_pos.line,
                "col": n.header_pos.col,
                "canonical": n.canonical,
            }
            for n in tree.nodes
        ],
        "accesses": [
            {
                "var": a.var,
                "kind": a.kind,
                "is_array": a.is_array,
                "line": a.pos.line,
                "col": a.pos.col,
                "loop_path": list(a.loop_path),
                "function": a.function,
            }
            for a in accesses
        ],
    }
    _emit_json(data, args.out)
    return EXIT_OK


def _cmd_gate(args) -> int:
    _, tree, _ = _load_program(args.source)
    profile = load_profile(args.profile, tree)
    decision = gate(tree, profile, args.gate_threshold)
    _emit_json({
        "pass": decision.passed,
        "max_total_iterations": decision.max_total_iterations,
        "threshold": decision.threshold,
        "loop_id": decision.loop_id,
    }, args.out)
    return EXIT_OK if decision.passed else EXIT_GATE_REJECT


def _cmd_check(args) -> int:
    program, tree, accesses = _load_program(args.source)
    oracle = None
    if args.oracle != "builtin":
        if not args.oracle.startswith("cmd:"):
            raise ExternalOracleError(
                f"--oracle must be 'builtin' or cmd:<config.json>, got {args.oracle!r}")
        config = json.loads(Path(args.oracle[4:]).read_text())
        oracle = ExternalOracle(program, tree, config["compile_cmd"],
                                config.get("workdir"))
    verdicts = check_all_parallelizable(tree, accesses, oracle)
    eligible = sorted(v.loop_id for v in verdicts if v.eligible)
    _emit_json({
        "verdicts": [
            {"loop_id": v.loop_id, "eligible": v.eligible, "reason": v.reason}
            for v in verdicts
        ],
        "genome_map": eligible,
        "gene_length": len(eligible),
    }, args.out)
    return EXIT_OK


def _genome_context(source: str):
    program, tree, accesses = _load_program(source)
    verdicts = check_all_parallelizable(tree, accesses)
    genome_map = build_genome_map(verdicts)
    return program, tree, accesses, genome_map


def _cmd_plan_transfers(args) -> int:
    program, tree, accesses, genome_map = _genome_context(args.source)
    plan = plan_transfers(program, tree, accesses, args.genome, genome_map)
    _emit_json(plan_to_dict(plan), args.out)
    return EXIT_OK


def _cmd_emit(args) -> int:
    program, tree, accesses, genome_map = _genome_context(args.source)
    plan = plan_transfers(program, tree, accesses, args.genome, genome_map)
    annotated = emit_annotated(program, tree, args.genome, genome_map, plan)
    if args.out:
        Path(args.out).write_text(annotated.text)
    else:
        sys.stdout.write(annotated.text)
    return EXIT_OK


def _cmd_tune(args) -> int:
    ga = GAConfig(
        population=args.pop,
        generations=args.gens,
        crossover_rate=args.pc,
        mutation_rate=args.pm,
        timeout_seconds=args.timeout,
        penalty_seconds=args.penalty,
        rng_seed=args.seed,
        workers=args.workers,
    )
    cfg = PipelineConfig(
        source=args.source,
        profile=args.profile,
        evaluator=args.evaluator,
        ga=ga,
        gate_threshold=args.gate_threshold,
        out=args.out,
        report=args.report,
    )
    code, report = run_pipeline(cfg)
    sys.stdout.write(f"{report['result']}\n")
    return code


_COMMANDS = {
    "analyze": _cmd_analyze,
    "gate": _cmd_gate,
    "check": _cmd_check,
    "plan-transfers": _cmd_plan_transfers,
    "emit": _cmd_emit,
    "tune": _cmd_tune,
}


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InvalidGenome as exc:
        sys.stderr.write(json.dumps({"error": {
            "type": "InvalidGenome", "message": str(exc), "exit_code": 1}}) + "\n")
        return 1
    except AutotunerError as exc:
        code = _exit_code_for(exc)
        sys.stderr.write(json.dumps({"error": {
            "type": type(exc).__name__, "message": str(exc), "exit_code": code}}) + "\n")
        return code


if __name__ == "__main__":
    raise SystemExit(main())
