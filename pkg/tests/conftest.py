from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"

# make test-local helper modules (genrecords, rdfcheck) importable
sys.path.insert(0, str(TESTS_DIR))

from scriptorium.tei import parse_work_record  # noqa: E402


@pytest.fixture(scope="session")
def fixture_270_text() -> str:
    return (FIXTURES / "270.xml").read_text("utf-8")


@pytest.fixture(scope="session")
def fixture_270(fixture_270_text):
    return parse_work_record(fixture_270_text)


@pytest.fixture(scope="session")
def fixture_narsai_text() -> str:
    return (FIXTURES / "0.xml").read_text("utf-8")


@pytest.fixture(scope="session")
def fixture_narsai(fixture_narsai_text):
    return parse_work_record(fixture_narsai_text)


@pytest.fixture(scope="session")
def catalogue_text() -> str:
    return (FIXTURES / "catalogue-demo.xml").read_text("utf-8")


@pytest.fixture()
def registry_root(tmp_path):
    from scriptorium.registry import Registry

    return Registry(tmp_path / "data", create=True)
