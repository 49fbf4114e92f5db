import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from stylesearch import CatalogStore, FixtureProviders, load_default_taxonomy

REPO_ROOT = Path(__file__).parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def relevance() -> list[dict]:
    return json.loads((FIXTURES_DIR / "relevance.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def taxonomy():
    return load_default_taxonomy()


@pytest.fixture(scope="session")
def providers() -> FixtureProviders:
    return FixtureProviders(FIXTURES_DIR)


@pytest.fixture()
def store() -> CatalogStore:
    """Fresh store loaded with the demo catalog."""
    s = CatalogStore()
    report = s.ingest_file(FIXTURES_DIR / "catalog.ndjson")
    assert not report.rejected
    return s
