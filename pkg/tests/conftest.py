import os

import pytest

from linegeom import classify, build_model, export_structure, field_make
from linegeom.reguli import enumerate_reguli, skew_triple_table

ACCEPTANCE_RESULTS = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run q >= 4 exhaustive checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow") or os.environ.get("LINEGEOM_SLOW"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE_RESULTS


@pytest.fixture(scope="session")
def model2():
    return build_model(field_make(2))


@pytest.fixture(scope="session")
def model3():
    return build_model(field_make(3))


@pytest.fixture(scope="session")
def s2(model2):
    return export_structure(model2)


@pytest.fixture(scope="session")
def s3(model3):
    return export_structure(model3)


@pytest.fixture(scope="session")
def g2(s2):
    return classify(s2)


@pytest.fixture(scope="session")
def g3(s3):
    return classify(s3)


@pytest.fixture(scope="session")
def table2(s2):
    return skew_triple_table(s2)


@pytest.fixture(scope="session")
def table3(s3):
    return skew_triple_table(s3)


@pytest.fixture(scope="session")
def reguli2(s2, table2):
    return enumerate_reguli(s2, table2)


@pytest.fixture(scope="session")
def reguli3(s3, table3):
    return enumerate_reguli(s3, table3)
