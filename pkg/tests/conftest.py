import pytest

from powersum.newforms import load_level

FIXTURE_LEVELS = (640, 1664, 2176, 3712, 4736, 5248)


@pytest.fixture(scope="session")
def forms_by_level():
    """Every shipped newform level that is present, keyed by level."""
    out = {}
    for level in FIXTURE_LEVELS:
        try:
            out[level] = load_level(level)
        except FileNotFoundError:
            pass
    return out


@pytest.fixture(scope="session")
def forms640():
    return load_level(640)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion reported in the summary")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    number, title = marker.args
    results = item.config._acceptance.setdefault(number, {"title": title, "ok": True, "parts": []})
    if rep.when == "call" or rep.failed:
        results["ok"] &= rep.passed
        results["parts"].append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        r = results[number]
        status = "PASS" if r["ok"] else "FAIL"
        failed = [name for name, outcome in r["parts"] if outcome != "passed"]
        detail = f" ({', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {r['title']}{detail}")
