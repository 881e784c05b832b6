import numpy as np
import pytest


@pytest.fixture
def rng():
    """Fresh seeded generator per test; reseed locally if you need a second stream."""
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = []
    for key, ok in (("passed", True), ("failed", False), ("error", False)):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(rep, "when", "call") in ("call", "setup"):
                rows.append((nodeid.split("::")[-1], ok))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        seen = set()
        for name, ok in sorted(rows):
            if name in seen:
                continue
            seen.add(name)
            terminalreporter.write_line(("PASS  " if ok else "FAIL  ") + name)
