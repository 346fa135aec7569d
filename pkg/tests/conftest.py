import pytest
from unittest.mock import MagicMock

from toric_contact.builders import (
    fan_hirzebruch,
    fan_p1_power,
    fan_projective_space,
    fan_projectivized_tangent_p1_power,
    product_fan,
)
from toric_contact.state import STATE


@pytest.fixture(autouse=True)
def mock_redis_client(monkeypatch):
    """
    Mock the redis client to avoid actual network calls and connection errors.
    """
    mock_redis = MagicMock()
    mock_redis.lock.return_value.acquire.return_value = True

    monkeypatch.setattr("toric_contact.redis_client.redis_client", mock_redis)
    monkeypatch.setattr("toric_contact.redis_client.get_redis_client", lambda: mock_redis)

    return mock_redis


@pytest.fixture(autouse=True)
def clear_state_before_each_test():
    STATE.clear_all()
    yield


def catalog():
    """Smooth projective toric fans of dimension <= 3."""
    return [
        ("P1", fan_projective_space(1)),
        ("P2", fan_projective_space(2)),
        ("P3", fan_projective_space(3)),
        ("P1^2", fan_p1_power(2)),
        ("P1^3", fan_p1_power(3)),
        ("F0", fan_hirzebruch(0)),
        ("F1", fan_hirzebruch(1)),
        ("F2", fan_hirzebruch(2)),
        ("F3", fan_hirzebruch(3)),
        ("P1xP2", product_fan(fan_projective_space(1), fan_projective_space(2))),
        ("P1xF1", product_fan(fan_projective_space(1), fan_hirzebruch(1))),
        ("P(T_P1xP1)", fan_projectivized_tangent_p1_power(2)),
    ]


CATALOG = catalog()
CATALOG_IDS = [name for name, _ in CATALOG]
CATALOG_FANS = [fan for _, fan in CATALOG]
