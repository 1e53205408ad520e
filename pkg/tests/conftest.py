import re

_CRITERION_LABELS = {
    1: "off-rate constant 0.11593 within 1e-4 (under 10 s)",
    2: "lifetime invariant under split point c in {0.5, 1, 2, 4}",
    3: "time-integrated rate equals ka/kd for h in {0.1, 1, 10}",
    4: "identity suite residuals < 1e-7 at r0/a in {1.1, 1.5, 2, 5}",
    5: "three rate routes agree within 1e-5 on 24-point grid",
    6: "convolution identity residual < 1e-5 at four times",
    7: "detailed-balance residual < 1e-8 on 3x3 grid",
    8: "survival matches PDE oracle within 1e-3",
    9: "limiting behaviour (t -> 0, t -> inf, rate decay)",
}

_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")

_outcomes = {}


def pytest_runtest_logreport(report):
    match = _PATTERN.search(report.nodeid)
    if not match:
        return
    num = int(match.group(1))
    if report.when == "call":
        _outcomes[num] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _outcomes[num] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_outcomes):
        status = {"passed": "PASS", "failed": "FAIL"}.get(
            _outcomes[num], _outcomes[num].upper())
        label = _CRITERION_LABELS.get(num, "")
        terminalreporter.write_line(
            "criterion %d: %s  [%s]" % (num, status, label))
