import pytest
from hypothesis import settings

from rfr_transition import fixtures
from rfr_transition.bootstrap import bootstrap_ibor, bootstrap_ois


@pytest.fixture(scope="session")
def quotes_2019():
    return fixtures.load("2019")


@pytest.fixture(scope="session")
def quotes_2020():
    return fixtures.load("2020")


@pytest.fixture(scope="session")
def curves_2019(quotes_2019):
    ois, irs = quotes_2019
    disc = bootstrap_ois(ois)
    return disc, bootstrap_ibor(irs, disc)


settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(criterion: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
