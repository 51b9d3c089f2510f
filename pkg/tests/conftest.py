import pytest

ACCEPTANCE_FILE = "test_acceptance.py"


def pytest_configure(config):
    config.addinivalue_line("markers", "invariant: module invariant or property check (acceptance criterion 11)")
    config._acceptance_lines = []
    config._invariant_outcomes = {}


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so criterion 11 can read the invariant outcomes
    items.sort(key=lambda item: item.path.name == ACCEPTANCE_FILE)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("invariant") is None:
        return
    store = item.config._invariant_outcomes
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        store[item.nodeid] = rep.outcome


@pytest.fixture
def acceptance(request):
    """Record and print one pass/fail line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"CRITERION {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config._acceptance_lines.append(line)
        print(line)
        return ok

    return record


@pytest.fixture
def invariant_outcomes(request):
    return request.config._invariant_outcomes


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config._acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
