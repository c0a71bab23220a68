import json
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import REPORT, RESULTS  # noqa: E402


def pytest_sessionfinish(session):
    path = os.environ.get("DEFORMA_ACCEPTANCE_REPORT")
    if path and REPORT:
        with open(path, "w") as fh:
            json.dump({str(k): REPORT[k] for k in sorted(REPORT)}, fh, indent=1, sort_keys=True)
            fh.write("\n")


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, title = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
