import functools

import pytest

from nilgeo.algebra import catalog_index, load_catalog_file
from nilgeo.cli import DATA_DIR
from nilgeo.degeneration import load_table_file, verify_table

CATALOGS = ("ly4", "bol4", "comp3", "comp4")


@functools.lru_cache(maxsize=None)
def catalog(name):
    return catalog_index(load_catalog_file(DATA_DIR / f"{name}.json"))


@functools.lru_cache(maxsize=None)
def table_report(name):
    tname, claims = load_table_file(DATA_DIR / f"{name}_table.json")
    return verify_table(claims, catalog(name), tname)


@pytest.fixture(scope="session")
def ly4():
    return catalog("ly4")


@pytest.fixture(scope="session")
def bol4():
    return catalog("bol4")


@pytest.fixture(scope="session")
def comp3():
    return catalog("comp3")


@pytest.fixture(scope="session")
def comp4():
    return catalog("comp4")


@functools.lru_cache(maxsize=None)
def certificate_verdict(name, probes=1000, seed=42):
    from nilgeo.nondegeneration import load_certificate_file, verify_certificate
    cert = load_certificate_file(DATA_DIR / f"{name}.json")
    return verify_certificate(cert, catalog("bol4"), probes, seed)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))
