import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ncbound import Coupling, QuantumNumbers, solve_level  # noqa: E402

_acceptance = []


@lru_cache(maxsize=None)
def solved(n, l, alpha_z, omega=None):
    """Cached solve_level; several modules reuse the same levels."""
    coupling = Coupling(alpha_z) if omega is None else Coupling(alpha_z, omega)
    return solve_level(QuantumNumbers(n, l), coupling)


@pytest.fixture
def solve():
    return solved


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::", 1)[1].split("[", 1)[0]
        _acceptance.append((name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    verdict = {}
    for name, outcome in _acceptance:
        verdict[name] = verdict.get(name, True) and outcome == "passed"
    terminalreporter.section("acceptance criteria")
    for name, ok in verdict.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
