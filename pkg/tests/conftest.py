import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rgraph_topos import corpus


@pytest.fixture(scope="session")
def small_corpus():
    return corpus.identification_corpus()
