import os
import sys

import pytest

# Add the project root to Python path for imports.
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algebra.ff import ff_make
from algebra.series import SeriesCtx


@pytest.fixture(autouse=True)
def telemetry_sink(tmp_path, monkeypatch):
    """Keep JSONL events out of /tmp and let tests read them back."""
    path = tmp_path / "events.jsonl"
    monkeypatch.setenv("BTMONO_TELEMETRY_EVENTS", str(path))
    return path


@pytest.fixture(scope="session")
def f2():
    return ff_make(2, 1)


@pytest.fixture(scope="session")
def f3():
    return ff_make(3, 1)


@pytest.fixture(scope="session")
def f4():
    return ff_make(2, 2)


@pytest.fixture(scope="session")
def ctx2(f2):
    """F_2((t)) at the default precision."""
    return SeriesCtx(f2, 1, 64)


@pytest.fixture(scope="session")
def ctx3(f3):
    return SeriesCtx(f3, 1, 64)


@pytest.fixture(scope="session")
def ctx4(f4):
    return SeriesCtx(f4, 1, 64)
