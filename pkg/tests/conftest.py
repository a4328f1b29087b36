import pytest

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record a measured-value summary for the acceptance report."""
    notes = []
    _CRITERIA[request.node.nodeid] = {"title": request.node.function.__doc__, "notes": notes}
    return notes.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    entry = _CRITERIA.get(item.nodeid)
    if entry is not None and rep.when == "call":
        entry["passed"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for nodeid in sorted(_CRITERIA):
        entry = _CRITERIA[nodeid]
        status = "PASS" if entry.get("passed") else "FAIL"
        title = (entry["title"] or nodeid).strip().splitlines()[0]
        detail = "; ".join(entry["notes"])
        tr.write_line(f"{status}  {title}" + (f"  [{detail}]" if detail else ""))
