"""
Общие фикстуры тестов.
"""

from pathlib import Path
from typing import Sequence

import numpy as np
import pytest

from config.settings import get_settings
from numerics.rng import RandomStream


@pytest.fixture(autouse=True)
def quiet_settings(monkeypatch):
    """Без прогресс-баров и с одним потоком, если тест не задает иное."""
    settings = get_settings()
    monkeypatch.setattr(settings, "show_progress", False)
    monkeypatch.setattr(settings, "workers", 1)
    monkeypatch.setattr(settings, "log_format", "plain")
    return settings


@pytest.fixture
def stream() -> RandomStream:
    return RandomStream(master_seed=12345, stream_id=0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


def write_returns_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    lines = [",".join(header)] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def returns_csv(tmp_path):
    """Фабрика CSV-файлов доходностей во временном каталоге."""

    def make(header: Sequence[str], rows: Sequence[Sequence], name: str = "returns.csv") -> Path:
        return write_returns_csv(tmp_path / name, header, rows)

    return make
