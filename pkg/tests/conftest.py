import pytest

# (criterion number, title, passed, detail), filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num:>2}: {title} -- {detail}")


@pytest.fixture(scope="session")
def iid_table():
    """The i.i.d. error table at desk scale: 3 densities x 4 sizes x 100 replications."""
    from gammakernel.distributions import PAPER_DISTRIBUTIONS
    from gammakernel.simulation import DataMode, StudyConfig, replication_study

    cfg = StudyConfig(PAPER_DISTRIBUTIONS, [100, 500, 1000, 2000], 100, DataMode.IID)
    return {(r.distribution, r.n): r for r in replication_study(cfg)}
