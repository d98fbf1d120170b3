import pytest

from defektum._parallel import THREADS_ENV, ordered_map, resolve_threads


def test_env_caps_threads(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "2")
    assert resolve_threads(8) == 2
    assert resolve_threads(1) == 1
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ValueError):
        resolve_threads(4)


def test_default_at_least_one(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads() >= 1
    assert resolve_threads(0) == 1


@pytest.mark.parametrize("threads", [1, 2, 8])
def test_order_preserved(threads):
    assert ordered_map(lambda x: x * x, range(50), threads) == [x * x for x in range(50)]

