from __future__ import annotations


def naive_period(a: int, b: int, m: int, c: int = 0, d: int = 1) -> int:
    """Eventual cycle length by storing every state seen; no shared code with
    the library."""
    seen = {}
    u, v = c % m, d % m
    n = 0
    while (u, v) not in seen:
        seen[(u, v)] = n
        u, v = v, (a * v + b * u) % m
        n += 1
    return n - seen[(u, v)]


# --- acceptance summary ---------------------------------------------------------

import pytest  # noqa: E402

_acceptance: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        verdict = "PASS" if report.outcome == "passed" else "FAIL"
        _acceptance[n] = (verdict, title)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        verdict, title = _acceptance[n]
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {title}")
