"""Genome performance measurement.

Two evaluators sit behind one interface: a deterministic cost-model
simulator for desk-scale testing, and an external-command evaluator that
really compiles and runs the annotated source under a wall-clock timeout.
A thread-safe cache keyed by genome bitstring guarantees each genome is
measured at most once.
"""

from __future__ import annotations

import json
import subprocess
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .analysis import GenomeMap, Profile
from .errors import ModelError, SpawnError
from .loops import LoopTree
from .transfer import TransferPlan, directive_exec_counts, selected_loops

MEASURED = "measured"
TIMEOUT = "timeout"
INVALID = "invalid"

DEFAULT_PENALTY_SECONDS = 1000.0
DEFAULT_TIMEOUT_SECONDS = 180.0


@dataclass(frozen=True)
class Measurement:
    seconds: float
    status: str                 # 'measured' | 'timeout' | 'invalid'


@dataclass(frozen=True)
class LoopCost:
    cpu_us_per_iter: float      # cost of the loop's immediate body, nested loops excluded
    gpu_speedup: float
    kernel_launch_us: float


@dataclass(frozen=True)
class CostModel:
    loops: dict[int, LoopCost]
    var_bytes: dict[str, float]
    transfer_fixed_us: float
    transfer_us_per_kib: float


def load_cost_model(path: str | Path) -> CostModel:
    """Load a cost model:
    {"loops":{"0":{"cpu_us_per_iter":1.0,"gpu_speedup":10.0,"kernel_launch_us":100.0}},
     "vars":{"a":{"size_bytes":4194304}},
     "transfer_fixed_us":10.0,"transfer_us_per_kib":1.0}
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot read cost model {path}: {exc}") from exc
    try:
        loops = {}
        for key, rec in data["loops"].items():
            cost = LoopCost(float(rec["cpu_us_per_iter"]),
                            float(rec["gpu_speedup"]),
                            float(rec["kernel_launch_us"]))
            if cost.cpu_us_per_iter < 0 or cost.kernel_launch_us < 0:
                raise ModelError(f"cost model {path}: loop {key} has a negative cost")
            if cost.gpu_speedup <= 0:
                raise ModelError(f"cost model {path}: loop {key} needs gpu_speedup > 0")
            loops[int(key)] = cost
        var_bytes = {name: float(rec["size_bytes"])
                     for name, rec in data.get("vars", {}).items()}
        fixed = float(data["transfer_fixed_us"])
        per_kib = float(data["transfer_us_per_kib"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"cost model {path}: malformed entry: {exc!r}") from exc
    if fixed < 0 or per_kib < 0 or any(b < 0 for b in var_bytes.values()):
        raise ModelError(f"cost model {path}: costs must be non-negative")
    return CostModel(loops, var_bytes, fixed, per_kib)


def directive_cost_us(model: CostModel, directive_vars: tuple[str, ...]) -> float:
    """One execution of one data directive, in microseconds."""
    total = model.transfer_fixed_us
    for var in directive_vars:
        if var not in model.var_bytes:
            raise ModelError(f"cost model has no size for variable {var!r}")
        total += model.var_bytes[var] / 1024.0 * model.transfer_us_per_kib
    return total


def simulate_time(model: CostModel, genome_bits: str, genome_map: GenomeMap,
                  tree: LoopTree, profile: Profile,
                  plan: TransferPlan) -> Measurement:
    """Deterministic cost-model time for a valid genome.

    CPU loops cost iterations x per-iteration weight; each selected region
    runs its whole subtree cost divided by its speedup plus one kernel
    launch per region entry; each planned directive pays its transfer cost
    once per execution.
    """
    chosen = selected_loops(genome_bits, genome_map)

    def loop_cost(loop_id: int) -> LoopCost:
        if loop_id not in model.loops:
            raise ModelError(f"cost model has no entry for loop {loop_id}")
        return model.loops[loop_id]

    total_us = 0.0
    region_work: dict[int, float] = {region: 0.0 for region in sorted(chosen)}
    for node in tree.nodes:
        work = profile.total_iterations(node.loop_id) * loop_cost(node.loop_id).cpu_us_per_iter
        region = next((r for r in (node.loop_id, *tree.ancestors(node.loop_id))
                       if r in chosen), None)
        if region is None:
            total_us += work
        else:
            region_work[region] += work

    for region in sorted(chosen):
        cost = loop_cost(region)
        total_us += region_work[region] / cost.gpu_speedup
        total_us += profile.entry_count(region) * cost.kernel_launch_us

    exec_counts = directive_exec_counts(plan, tree, profile)
    for directive in plan.directives:
        total_us += exec_counts[directive] * directive_cost_us(model, directive.vars)

    return Measurement(total_us / 1e6, MEASURED)


@dataclass
class CommandEvaluatorConfig:
    compile_cmd: str            # shell template with {src} and {bin}
    run_cmd: str                # shell template with {bin}
    timeout_seconds: float = DEFAULT_TIMEOUT_SECONDS
    penalty_seconds: float = DEFAULT_PENALTY_SECONDS
    workdir: str | None = None

    def __post_init__(self):
        if not self.compile_cmd or not self.run_cmd:
            raise ValueError("compile_cmd and run_cmd must be non-empty")


def load_command_config(path: str | Path) -> CommandEvaluatorConfig:
    try:
        data = json.loads(Path(path).read_text())
        return CommandEvaluatorConfig(
            compile_cmd=data["compile_cmd"],
            run_cmd=data["run_cmd"],
            timeout_seconds=float(data.get("timeout_seconds", DEFAULT_TIMEOUT_SECONDS)),
            penalty_seconds=float(data.get("penalty_seconds", DEFAULT_PENALTY_SECONDS)),
            workdir=data.get("workdir"),
        )
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SpawnError(f"cannot load command evaluator config {path}: {exc}") from exc


def command_evaluate(config: CommandEvaluatorConfig,
                     annotated_source_path: str | Path) -> Measurement:
    """Compile and run one annotated source, timing only the run.

    Compile failure or a nonzero run exit yields Invalid; a run exceeding
    the timeout is killed and yields Timeout; both carry the penalty time.
    A shell that cannot be spawned raises SpawnError instead, so
    infrastructure trouble never looks like a slow genome.
    """
    src = Path(annotated_source_path)
    bin_path = src.with_suffix(".bin")
    compile_cmd = config.compile_cmd.format(src=str(src), bin=str(bin_path))
    try:
        proc = subprocess.run(compile_cmd, shell=True, capture_output=True,
                              cwd=config.workdir)
    except OSError as exc:
        raise SpawnError(f"cannot spawn compile command {compile_cmd!r}: {exc}") from exc
    if proc.returncode != 0:
        return Measurement(config.penalty_seconds, INVALID)

    run_cmd = config.run_cmd.format(bin=str(bin_path))
    start = time.perf_counter()
    try:
        proc = subprocess.run(run_cmd, shell=True, capture_output=True,
                              cwd=config.workdir, timeout=config.timeout_seconds)
    except subprocess.TimeoutExpired:
        return Measurement(config.penalty_seconds, TIMEOUT)
    except OSError as exc:
        raise SpawnError(f"cannot spawn run command {run_cmd!r}: {exc}") from exc
    elapsed = time.perf_counter() - start
    if proc.returncode != 0:
        return Measurement(config.penalty_seconds, INVALID)
    if elapsed > config.timeout_seconds:
        return Measurement(config.penalty_seconds, TIMEOUT)
    return Measurement(elapsed, MEASURED)


class MeasurementCache:
    """Genome-bitstring -> Measurement memo with insert-once semantics.

    Safe under concurrent lookup/insert: when several threads race on one
    genome, exactly one computes and the rest wait for its result.  Errors
    are never cached; a waiter retries the computation itself.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._done: dict[str, Measurement] = {}
        self._inflight: dict[str, threading.Event] = {}

    def __contains__(self, key: str) -> bool:
        with self._lock:
            return key in self._done

    def __len__(self) -> int:
        with self._lock:
            return len(self._done)

    def get(self, key: str) -> Measurement | None:
        with self._lock:
            return self._done.get(key)

    def put(self, key: str, measurement: Measurement):
        with self._lock:
            self._done.setdefault(key, measurement)

    def get_or_compute(self, key: str, compute) -> tuple[Measurement, bool]:
        """Return (measurement, served_from_cache)."""
        while True:
            with self._lock:
                if key in self._done:
                    return self._done[key], True
                event = self._inflight.get(key)
                if event is None:
                    event = threading.Event()
                    self._inflight[key] = event
                    break
            event.wait()
        try:
            measurement = compute()
        except BaseException:
            with self._lock:
                del self._inflight[key]
            event.set()
            raise
        with self._lock:
            self._done[key] = measurement
            del self._inflight[key]
        event.set()
        return measurement, False


def cached_evaluate(cache: MeasurementCache, genome_bits: str, inner) -> Measurement:
    """Evaluate through the dedup cache: a repeated genome reuses the stored
    measurement without invoking the inner evaluator again."""
    measurement, _ = cache.get_or_compute(genome_bits, lambda: inner(genome_bits))
    return measurement
