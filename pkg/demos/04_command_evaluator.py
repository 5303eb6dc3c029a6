"""Walkthrough: the external-command evaluator protocol.

A real deployment points compile_cmd at an OpenACC compiler and run_cmd at
a benchmark.  Here stub shell commands exercise the whole contract: compile
failure becomes Invalid, a run past the timeout becomes Timeout, and both
are priced at the penalty time for fitness purposes.
"""

import tempfile
from pathlib import Path

from acctuner.evaluation import CommandEvaluatorConfig, command_evaluate
from acctuner.ga import fitness_from_time

workdir = Path(tempfile.mkdtemp(prefix="acctuner_demo_"))
src = workdir / "trial.c"
src.write_text("int main() { return 0; }\n")

cases = [
    ("compiler rejects the directives",
     CommandEvaluatorConfig("false", "true", timeout_seconds=2.0)),
    ("benchmark overruns a 1s timeout",
     CommandEvaluatorConfig("true", "sleep 3", timeout_seconds=1.0)),
    ("healthy compile and run",
     CommandEvaluatorConfig("cp '{src}' '{bin}'", "test -f '{bin}'",
                            timeout_seconds=2.0)),
]

for label, config in cases:
    measurement = command_evaluate(config, src)
    fitness = fitness_from_time(measurement.seconds, measurement.status,
                                penalty_seconds=config.penalty_seconds)
    print(f"{label}:")
    print(f"  status={measurement.status} seconds={measurement.seconds:.6g} "
          f"fitness={fitness:.6g}\n")
