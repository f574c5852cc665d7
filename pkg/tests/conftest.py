import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS_DIR))

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "annaforge" / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def mini_corpus_dir() -> Path:
    return DATA_DIR / "mini_corpus"


@pytest.fixture(scope="session")
def registry_path() -> Path:
    return DATA_DIR / "registry.txt"


@pytest.fixture(scope="session")
def goldens_dir() -> Path:
    return TESTS_DIR / "goldens"
