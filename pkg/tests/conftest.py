import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("matred", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("matred")

SQRT6 = np.sqrt(6.0)

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria[k] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        status, title = _criteria[k]
        terminalreporter.write_line(f"criterion {k}: {status}  {title}")


@pytest.fixture(scope="session")
def w2x2():
    from matred.examples import nonunitary_2x2_weight
    return nonunitary_2x2_weight()


@pytest.fixture(scope="session")
def ref2x2():
    from matred.examples import nonunitary_2x2_reference
    return nonunitary_2x2_reference()


@pytest.fixture(scope="session")
def geg11():
    from matred.examples import gegenbauer_weight
    return gegenbauer_weight(1, 1.0)
