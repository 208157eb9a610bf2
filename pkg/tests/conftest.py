import sys
from pathlib import Path

import pytest

from ldrank import load_bundle

# Make the sibling oracles module importable regardless of invocation dir.
sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def basic_dir() -> Path:
    return FIXTURES / "basic"


@pytest.fixture()
def basic_bundle(basic_dir):
    return load_bundle(
        basic_dir / "graph.tsv",
        basic_dir / "texts.jsonl",
        basic_dir / "serp.tsv",
        basic_dir / "query.txt",
    )
