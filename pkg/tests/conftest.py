import sys


def pytest_runtest_logreport(report):
    """Print one PASS/FAIL line per acceptance criterion as it runs."""
    if report.when != "call":
        return
    path = report.nodeid.split("::", 1)[0]
    if not path.endswith("test_acceptance.py"):
        return
    status = "PASS" if report.passed else "FAIL"
    name = report.nodeid.split("::", 1)[1]
    sys.stderr.write(f"\n{status}: {name}\n")
