import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, title, elapsed = RESULTS[number]
        terminalreporter.write_line(
            f"[{'PASS' if ok else 'FAIL'}] {number}. {title} ({elapsed * 1e3:.2f} ms)")
