from __future__ import annotations

import pytest


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            if "test_acceptance.py::test_criterion_" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1]
            lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines, key=lambda x: int(x[0].split("_")[2])):
            terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture
def curve():
    from fmcalc import GerbeyCurve

    return GerbeyCurve("C")
