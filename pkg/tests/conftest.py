import pytest

ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE_KEY, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(log, key=lambda c: int(c[1:])):
        ok, summary = log[cid]
        terminalreporter.write_line(f"{cid} {'PASS' if ok else 'FAIL'}  {summary}")
