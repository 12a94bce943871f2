import pytest

_verdicts = []


class Criterion:
    def __init__(self, name):
        self.name = name
        self.details = []

    def note(self, text):
        self.details.append(text)

    def check(self, ok, text=""):
        if text:
            self.note(text)
        assert ok, f"{self.name}: {text}"


@pytest.fixture
def criterion(request):
    c = Criterion(request.node.get_closest_marker("criterion").args[0])
    yield c
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    _verdicts.append((passed, c.name, "; ".join(c.details)))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for passed, name, detail in _verdicts:
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
