import time
from contextlib import contextmanager

import pytest


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """
    Context manager timing one acceptance criterion against its budget and
    recording a one-line PASS/FAIL verdict for the terminal summary.
    """

    @contextmanager
    def run(number, title, budget_s):
        notes = {}
        start = time.perf_counter()
        try:
            yield notes
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            request.config.acceptance_lines.append(
                f"[FAIL] {number}. {title} ({elapsed:.2f}s): "
                f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
            raise
        elapsed = time.perf_counter() - start
        ok = elapsed < budget_s
        detail = ", ".join(f"{k}={v}" for k, v in notes.items())
        request.config.acceptance_lines.append(
            f"[{'PASS' if ok else 'FAIL'}] {number}. {title} "
            f"({elapsed:.2f}s / {budget_s:g}s budget){': ' + detail if detail else ''}")
        assert ok, f"criterion {number} took {elapsed:.2f}s > {budget_s}s"

    return run
