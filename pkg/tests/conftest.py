"""Shared fixtures and the acceptance summary printed at the end of a run."""

from collections import OrderedDict

import pytest

ACCEPTANCE = OrderedDict()

TITLES = {
    "AC1": "martingale check",
    "AC2": "characteristic function oracle",
    "AC3": "level rate table",
    "AC4": "savings factors",
    "AC5": "Asian complexity slope",
    "AC6": "telescoping oracle",
    "AC7": "structural invariants",
    "AC8": "D_n decay exponents",
}


@pytest.fixture
def record():
    """``record(criterion, label, ok, detail)`` stores one sub-check."""

    def _record(criterion, label, ok, detail=""):
        ACCEPTANCE.setdefault(criterion, []).append((label, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance")
    for key in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[key]
        ok = all(c[1] for c in checks)
        failed = [f"{c[0]} ({c[2]})" for c in checks if not c[1]]
        line = f"{key} {'PASS' if ok else 'FAIL'} {TITLES.get(key, '')}: {sum(c[1] for c in checks)}/{len(checks)}"
        if failed:
            line += " failing: " + "; ".join(failed)
        tr.write_line(line)
