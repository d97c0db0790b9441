"""Shared fixtures for the figure-tool tests, plus acceptance reporting."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from pkhelpers import write_orders_csv, write_summary_csv, write_trace_csv

# Criterion results recorded by the acceptance tests in this package;
# printed as a terminal section at the end of the session so the pass/fail
# lines are visible in normal (captured) pytest runs.
CRITERION_LINES: dict[int, str] = {}
_CRITERION_PARTS: dict[int, list[tuple[bool, str]]] = {}


def _record_part(number: int, ok: bool, detail: str) -> None:
    _CRITERION_PARTS.setdefault(number, []).append((ok, detail))
    parts = _CRITERION_PARTS[number]
    verdict = "PASS" if all(p[0] for p in parts) else "FAIL"
    joined = "; ".join(p[1] for p in parts)
    CRITERION_LINES[number] = (
        f"[SECONDARY] criterion {number}: {verdict} — {joined}"
    )


@pytest.fixture
def record_criterion_part():
    """Record one sub-check of an acceptance criterion (number, ok, detail)."""
    return _record_part


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria (secondary)")
    for number in sorted(CRITERION_LINES):
        terminalreporter.write_line(CRITERION_LINES[number])


@pytest.fixture
def trace_csv(tmp_path: Path) -> Path:
    return write_trace_csv(
        tmp_path / "run.csv",
        [(0, 0.1, -1.0, 0.2), (1, 0.2, -2.0, 0.1), (2, 0.35, -2.2, 0.05)],
    )


@pytest.fixture
def orders_csv(tmp_path: Path) -> Path:
    return write_orders_csv(
        tmp_path / "orders.csv",
        [
            ("all", 0, 0.5, 0.9),
            ("all", 1, 0.3, 0.8),
            ("all", 2, 0.01, 0.02),
            ("0", 0, 0.4, 0.4),
            ("0", 1, 0.25, 0.5),
        ],
    )


@pytest.fixture
def summary_csv(tmp_path: Path) -> Path:
    return write_summary_csv(
        tmp_path / "summary.csv", [(1.0, -22.5, 0.4, 5, 0)]
    )
