"""Session fixtures: acceptance-criterion reporting for the solver package.

Each acceptance test records a ``[PRIMARY] criterion N: PASS/FAIL`` line;
the lines are printed in a terminal-summary section so they are visible in
ordinary (output-captured) pytest runs.
"""

from __future__ import annotations

from contextlib import contextmanager

import pytest

CRITERION_LINES: dict[int, str] = {}


def _record(number: int, ok: bool, detail: str) -> None:
    verdict = "PASS" if ok else "FAIL"
    CRITERION_LINES[number] = f"[PRIMARY] criterion {number}: {verdict} — {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria (primary)")
    for number in sorted(CRITERION_LINES):
        terminalreporter.write_line(CRITERION_LINES[number])


@pytest.fixture
def criterion_reporter():
    """Context manager that records one criterion's verdict and asserts it.

    Usage::

        with criterion_reporter(3, "screening") as info:
            ...
            info["ok"] = everything_held
            info["detail"] = "measured ... (tol ...)"

    The verdict line is recorded even if the body raises.
    """

    @contextmanager
    def reporter(number: int, title: str):
        info = {"ok": False, "detail": title}
        try:
            yield info
        except BaseException as exc:
            _record(
                number,
                False,
                f"{info['detail']} — aborted by {exc.__class__.__name__}: {exc}",
            )
            raise
        _record(number, info["ok"], info["detail"])
        print(CRITERION_LINES[number])
        assert info["ok"], f"criterion {number}: {info['detail']}"

    return reporter


@pytest.fixture(scope="session")
def acceptance_state() -> dict:
    """Mutable cross-test store for artifacts shared between criteria."""
    return {}
