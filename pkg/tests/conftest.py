import time

import pytest

_START = time.perf_counter()
SUITE_BUDGET = 60.0
ACCEPTANCE: list = []


def record(n: int, ok: bool, detail: str):
    """Log one acceptance line; the summary prints them all at the end."""
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - _START
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
        ok = elapsed < SUITE_BUDGET
        terminalreporter.write_line(
            f"criterion 11 (suite runtime): {'PASS' if ok else 'FAIL'}  {elapsed:.1f} s < {SUITE_BUDGET:.0f} s")


def pytest_sessionfinish(session, exitstatus):
    # the runtime half of criterion 11 can only be judged once everything ran
    if ACCEPTANCE and time.perf_counter() - _START >= SUITE_BUDGET and exitstatus == 0:
        session.exitstatus = 1


def run_cli(argv, capsys=None):
    """(exit code, stdout, stderr, seconds) of an in-process CLI invocation."""
    import contextlib
    import io

    from gtd.cli import main

    out, err = io.StringIO(), io.StringIO()
    t0 = time.perf_counter()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue(), time.perf_counter() - t0


@pytest.fixture(scope="session")
def verify_all_output():
    """`verify --model all --samples 100 --seed 42`, run once per session."""
    return run_cli(["verify", "--model", "all", "--samples", "100", "--seed", "42"])
