"""Print one PASS/FAIL line per acceptance criterion as it completes."""


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid or report.when != "call":
        return
    label = report.nodeid.split("::")[-1]
    if label.startswith("test_"):
        label = label[len("test_"):]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {label}: {outcome} ({report.duration:.1f}s)",
          flush=True)
