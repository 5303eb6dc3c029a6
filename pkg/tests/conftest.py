"""Shared fixtures: parsed fixture programs and their profiles/models."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pytest

import acctuner as at

FIXTURES = Path(__file__).parent / "fixtures"

TUNE_FIXTURES = ("siblings3", "nested3", "synergy5", "deep3", "mix10")


@dataclass
class LoadedFixture:
    name: str
    source: str
    program: object
    tree: at.LoopTree
    accesses: list
    profile: at.Profile
    genome_map: at.GenomeMap
    model: at.CostModel

    def evaluator(self):
        return at.make_sim_evaluator(self.model, self.program, self.tree,
                                     self.accesses, self.genome_map, self.profile)


def load_fixture(name: str, directory: str = "tune") -> LoadedFixture:
    base = FIXTURES / directory
    source = (base / f"{name}.c").read_text()
    program = at.parse(source)
    tree = at.build_loop_tree(program)
    accesses = at.extract_accesses(program)
    profile = at.load_profile(base / f"{name}_profile.json", tree)
    verdicts = at.check_all_parallelizable(tree, accesses)
    genome_map = at.build_genome_map(verdicts)
    model = at.load_cost_model(base / f"{name}_model.json")
    return LoadedFixture(name, source, program, tree, accesses, profile,
                         genome_map, model)


@pytest.fixture(scope="session")
def tune_fixtures() -> dict[str, LoadedFixture]:
    return {name: load_fixture(name) for name in TUNE_FIXTURES}


@pytest.fixture(scope="session")
def stress_fixture() -> LoadedFixture:
    return load_fixture("stress75", "stress")


def analyze(source: str):
    program = at.parse(source)
    return program, at.build_loop_tree(program), at.extract_accesses(program)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "test_acceptance" in item.nodeid:
        terminal = item.config.pluginmanager.get_plugin("terminalreporter")
        if terminal is not None:
            verdict = "PASS" if report.passed else "FAIL"
            terminal.write_line(f"[acceptance] {item.name}: {verdict}")
