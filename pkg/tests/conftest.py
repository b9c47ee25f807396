import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _RESULTS[number] = (title, rep.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, outcome, detail = _RESULTS[number]
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{status}] {number:2d}. {title}"
        if detail:
            line += f"  ({detail})"
        tr.write_line(line)
    passed = sum(1 for _, o, _ in _RESULTS.values() if o == "passed")
    tr.write_line(f"{passed}/{len(_RESULTS)} acceptance criteria passed")
