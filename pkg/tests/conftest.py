import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    failed = call.excinfo is not None and not call.excinfo.errisinstance(KeyboardInterrupt)
    if call.when == "call" or failed:
        prev = _criteria.get(num, (title, "PASS"))[1]
        _criteria[num] = (title, "FAIL" if failed or prev == "FAIL" else "PASS")

def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, status = _criteria[num]
        terminalreporter.write_line(f"{status}  criterion {num:>2}: {title}")
