import re

CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")


def pytest_terminal_summary(terminalreporter):
    verdicts: dict[int, bool] = {}
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            match = CRITERION.search(getattr(report, "nodeid", ""))
            if not match or (key == "passed" and report.when != "call"):
                continue
            k = int(match.group(1))
            verdicts[k] = verdicts.get(k, True) and key == "passed"
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(verdicts):
        terminalreporter.write_line(f"ACCEPTANCE criterion {k}: {'PASS' if verdicts[k] else 'FAIL'}")
