"""End-to-end tuning pipeline: analyze, gate, eligibility, GA search, emit.

Every stage failure maps to its own exit code so scripts can branch on why
a run stopped.  Reports are plain JSON built in a fixed order; two runs
with the same inputs and seed produce byte-identical reports and annotated
sources.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .analysis import (
    DEFAULT_GATE_THRESHOLD,
    GateDecision,
    GenomeMap,
    ParallelizabilityVerdict,
    Profile,
    build_genome_map,
    check_all_parallelizable,
    gate,
    load_profile,
)
from .emitter import emit_annotated
from .errors import EmptyGenome, ModelError, ParseError
from .evaluation import (
    CommandEvaluatorConfig,
    CostModel,
    Measurement,
    MeasurementCache,
    command_evaluate,
    load_command_config,
    load_cost_model,
    simulate_time,
)
from .ga import GAConfig, SearchResult, run_ga
from .loops import LoopTree, build_loop_tree, extract_accesses
from .parser import parse
from .transfer import plan_transfers

EXIT_OK = 0
EXIT_PARSE_ERROR = 10
EXIT_PROFILE_ERROR = 11
EXIT_GATE_REJECT = 12
EXIT_NO_OFFLOADABLE_LOOPS = 13
EXIT_EVALUATOR_FAILURE = 14


@dataclass
class PipelineConfig:
    source: str
    profile: str
    evaluator: str                  # 'sim:<costmodel.json>' or 'cmd:<config.json>'
    ga: GAConfig
    gate_threshold: int = DEFAULT_GATE_THRESHOLD
    out: str | None = None          # annotated best source
    report: str | None = None       # JSON report


def _write(path: str | None, text: str):
    if path is not None:
        Path(path).write_text(text)


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _gate_dict(decision: GateDecision) -> dict:
    return {
        "pass": decision.passed,
        "max_total_iterations": decision.max_total_iterations,
        "threshold": decision.threshold,
        "loop_id": decision.loop_id,
    }


def _verdict_dicts(verdicts: list[ParallelizabilityVerdict]) -> list[dict]:
    return [{"loop_id": v.loop_id, "eligible": v.eligible, "reason": v.reason}
            for v in verdicts]


def _config_dict(cfg: PipelineConfig, effective_population: int | None = None) -> dict:
    out = {
        "source": str(cfg.source),
        "profile": str(cfg.profile),
        "evaluator": cfg.evaluator,
        "population": cfg.ga.population,
        "generations": cfg.ga.generations,
        "crossover_rate": cfg.ga.crossover_rate,
        "mutation_rate": cfg.ga.mutation_rate,
        "timeout_seconds": cfg.ga.timeout_seconds,
        "penalty_seconds": cfg.ga.penalty_seconds,
        "seed": cfg.ga.rng_seed,
        "fitness_exponent": cfg.ga.fitness_exponent,
        "gate_threshold": cfg.gate_threshold,
    }
    if effective_population is not None:
        out["effective_population"] = effective_population
    return out


def _search_dicts(result: SearchResult) -> tuple[list[dict], dict]:
    generations = [
        {
            "gen": s.generation,
            "best_seconds": s.best_seconds,
            "best_fitness": s.best_fitness,
            "mean_fitness": s.mean_fitness,
            "evals": s.evaluations_performed,
            "cache_hits": s.cache_hits,
        }
        for s in result.history
    ]
    best = {
        "genome": result.best.genome,
        "seconds": result.best.seconds,
        "fitness": result.best.fitness,
        "status": result.best.status,
    }
    return generations, best


def make_sim_evaluator(model: CostModel, program, tree: LoopTree, accesses,
                       genome_map: GenomeMap, profile: Profile):
    """Evaluator closure: plan transfers for the genome, then price it with
    the cost model."""
    def evaluate(bits: str) -> Measurement:
        plan = plan_transfers(program, tree, accesses, bits, genome_map)
        return simulate_time(model, bits, genome_map, tree, profile, plan)
    return evaluate


def make_cmd_evaluator(config: CommandEvaluatorConfig, program, tree: LoopTree,
                       accesses, genome_map: GenomeMap):
    """Evaluator closure: write the annotated source for the genome into the
    working directory, then compile and run it."""
    workdir = Path(config.workdir) if config.workdir else Path.cwd()

    def evaluate(bits: str) -> Measurement:
        plan = plan_transfers(program, tree, accesses, bits, genome_map)
        annotated = emit_annotated(program, tree, bits, genome_map, plan)
        src_path = workdir / f"trial_{bits}.c"
        src_path.write_text(annotated.text)
        return command_evaluate(config, src_path)
    return evaluate


def build_evaluator(spec: str, program, tree: LoopTree, accesses,
                    genome_map: GenomeMap, profile: Profile, ga: GAConfig):
    """Resolve an evaluator spec string into an evaluate(bits) callable."""
    if spec.startswith("sim:"):
        model = load_cost_model(spec[4:])
        return make_sim_evaluator(model, program, tree, accesses, genome_map, profile)
    if spec.startswith("cmd:"):
        config = load_command_config(spec[4:])
        # the GA flags are the single source of truth for these two knobs
        config.timeout_seconds = ga.timeout_seconds
        config.penalty_seconds = ga.penalty_seconds
        return make_cmd_evaluator(config, program, tree, accesses, genome_map)
    raise ModelError(f"evaluator spec {spec!r} must start with 'sim:' or 'cmd:'")


def run_pipeline(cfg: PipelineConfig) -> tuple[int, dict]:
    """Full tuning run.  Returns (exit_code, report dict).

    The report is written to cfg.report on every path that produces a
    verdict (gate reject, no offloadable loops, success); hard errors such
    as unparseable input or a broken evaluator leave no partial report and
    surface through their exception, mapped to an exit code by the CLI.
    """
    try:
        source_text = Path(cfg.source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read source: {exc}", 1, 1, str(cfg.source)) from exc
    program = parse(source_text, str(cfg.source))
    tree = build_loop_tree(program)
    accesses = extract_accesses(program)

    profile = load_profile(cfg.profile, tree)

    decision = gate(tree, profile, cfg.gate_threshold)
    if not decision.passed:
        report = {
            "config": _config_dict(cfg),
            "gate": _gate_dict(decision),
            "result": "gate-reject",
        }
        _write(cfg.report, render_report(report))
        return EXIT_GATE_REJECT, report

    verdicts = check_all_parallelizable(tree, accesses)
    try:
        genome_map = build_genome_map(verdicts)
    except EmptyGenome:
        report = {
            "config": _config_dict(cfg),
            "gate": _gate_dict(decision),
            "verdicts": _verdict_dicts(verdicts),
            "result": "no-offloadable-loops",
        }
        _write(cfg.report, render_report(report))
        return EXIT_NO_OFFLOADABLE_LOOPS, report

    evaluate = build_evaluator(cfg.evaluator, program, tree, accesses,
                               genome_map, profile, cfg.ga)
    result = run_ga(cfg.ga, genome_map, tree, evaluate, MeasurementCache())

    if result.best.status == "invalid":
        # degenerate corner: every individual of every generation was an
        # invalid nesting, so there is no code worth emitting
        generations, best = _search_dicts(result)
        report = {
            "config": _config_dict(cfg, result.effective_population),
            "gate": _gate_dict(decision),
            "verdicts": _verdict_dicts(verdicts),
            "genome_map": list(genome_map.loop_ids),
            "generations": generations,
            "best": best,
            "result": "no-valid-genome-evaluated",
        }
        _write(cfg.report, render_report(report))
        return EXIT_NO_OFFLOADABLE_LOOPS, report

    best_plan = plan_transfers(program, tree, accesses, result.best.genome, genome_map)
    annotated = emit_annotated(program, tree, result.best.genome, genome_map, best_plan)
    _write(cfg.out, annotated.text)

    generations, best = _search_dicts(result)
    report = {
        "config": _config_dict(cfg, result.effective_population),
        "gate": _gate_dict(decision),
        "verdicts": _verdict_dicts(verdicts),
        "genome_map": list(genome_map.loop_ids),
        "generations": generations,
        "best": best,
        "result": "ok",
    }
    _write(cfg.report, render_report(report))
    return EXIT_OK, report
