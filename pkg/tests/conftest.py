import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from util import append_signature


@pytest.fixture(scope="session")
def fig_sig():
    """The elaborated append signature used throughout the suite."""
    return append_signature()


@pytest.fixture(scope="session")
def data_dir():
    return Path(__file__).parent / "data"
