import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from iis_core import SymmetricParams, build_special_symmetric  # noqa: E402


def P(a, b, c, u) -> SymmetricParams:
    return SymmetricParams.of(*(Fraction(v) for v in (a, b, c, u)))


@pytest.fixture
def ten_four():
    """(10, 4, 1, 2): two ordinary iterations back to (5, 4, 1, 2)."""
    return build_special_symmetric(P(10, 4, 1, 2))


@pytest.fixture(autouse=True)
def isolated_output(tmp_path, monkeypatch):
    monkeypatch.setenv("IISYM_OUTPUT_DIR", str(tmp_path / "out"))
    monkeypatch.setenv("IISYM_LOG_FILE", str(tmp_path / "runs.jsonl"))
    monkeypatch.delenv("IISYM_WORKERS", raising=False)
    monkeypatch.delenv("IISYM_HEIGHT", raising=False)
