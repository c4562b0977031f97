import pytest

from src.utils.config import ORDER_ENV_VAR


@pytest.fixture(autouse=True)
def _no_order_override(monkeypatch):
    monkeypatch.delenv(ORDER_ENV_VAR, raising=False)
