import sys
from pathlib import Path

import pytest

sys.setrecursionlimit(100_000)

CORPUS = Path(__file__).parent / "corpus"


@pytest.fixture
def corpus():
    return CORPUS
