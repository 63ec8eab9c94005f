import json

import numpy as np
import pytest

from nfseer.nfbank import NFBank
from nfseer.registry import load_registry


@pytest.fixture(scope="session")
def reg():
    return load_registry()


@pytest.fixture
def registry_doc(reg):
    return json.loads(json.dumps(reg.to_dict()))


@pytest.fixture
def default_bank(reg):
    return NFBank.from_registry(reg)


def random_monotone_bank(reg, rng):
    """Random positive bank whose tables respect each parameter's direction."""
    C = np.empty((len(reg), 18))
    for i, p in enumerate(reg):
        steps = np.sort(rng.uniform(0.6, 1.6, 18))
        C[i] = steps if p.direction.value == "MONOTONE_INCREASING" else steps[::-1]
    return NFBank.from_registry(reg).with_consequents(reg, C)


ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome and wall time for the summary."""
    import time

    record = {"name": request.node.name, "detail": ""}
    start = time.perf_counter()
    yield record
    record["seconds"] = time.perf_counter() - start
    report = getattr(request.node, "rep_call", None)
    record["passed"] = bool(report and report.passed)
    ACCEPTANCE_RESULTS.append(record)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for r in ACCEPTANCE_RESULTS:
        status = "PASS" if r["passed"] else "FAIL"
        terminalreporter.write_line(f"{status}  {r['name']}  ({r['seconds']:.2f}s)  {r['detail']}")
