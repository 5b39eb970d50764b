import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def extension_pair():
    from cvxgeo.gallery import strong_extension_pair

    return strong_extension_pair()


@pytest.fixture(scope="session")
def sharp_family():
    from cvxgeo.gallery import counterexample_sharp

    return counterexample_sharp()


@pytest.fixture
def triangle_centroid():
    from cvxgeo import PointConfig

    return PointConfig.from_items([("a", (0, 0)), ("b", (3, 0)), ("c", (0, 3)), ("m", (1, 1))])


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion, printed in the terminal summary."""
    import time

    state = {"start": time.perf_counter(), "label": None, "limit": None}

    def declare(label, limit=None):
        state["label"], state["limit"] = label, limit
        state["start"] = time.perf_counter()

    yield declare
    elapsed = time.perf_counter() - state["start"]
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    limit = f" (limit {state['limit']} s)" if state["limit"] else ""
    line = f"{'PASS' if ok else 'FAIL'}  {state['label']}  [{elapsed:.2f} s{limit}]"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
