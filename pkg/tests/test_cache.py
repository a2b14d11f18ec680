import json

from linkshom.arnold import GenParity
from linkshom.cache import ENV_VAR, RankCache


def test_put_get_and_immutability(tmp_path):
    c = RankCache(tmp_path)
    assert c.get(2, 1, GenParity.ODD, 3, 4, "rank") is None
    c.put(2, 1, GenParity.ODD, 3, 4, "rank", 17)
    assert c.get(2, 1, GenParity.ODD, 3, 4, "rank") == 17
    assert c.get(2, 1, GenParity.EVEN, 3, 4, "rank") is None
    c.put(2, 1, GenParity.ODD, 3, 4, "rank", 99)  # entries are never overwritten
    assert c.get(2, 1, GenParity.ODD, 3, 4, "rank") == 17
    assert not list(tmp_path.glob("*.tmp"))


def test_version_bump_invalidates(tmp_path):
    RankCache(tmp_path, version="0.1").put(1, 1, GenParity.ODD, 1, 1, "dim", 5)
    assert RankCache(tmp_path, version="0.2").get(1, 1, GenParity.ODD, 1, 1, "dim") is None


def test_only_integers_stored(tmp_path):
    c = RankCache(tmp_path)
    c.put(1, 1, "even", 2, 3, "dim", 4)
    (entry,) = tmp_path.glob("*.json")
    data = json.loads(entry.read_text())
    assert data["value"] == 4 and data["key"]["parity"] == "even"


def test_env_and_override(tmp_path, monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    assert RankCache.from_env() is None
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "a"))
    assert RankCache.from_env().root == tmp_path / "a"
    assert RankCache.from_env(str(tmp_path / "b")).root == tmp_path / "b"


def test_corrupt_entry_is_a_miss(tmp_path):
    c = RankCache(tmp_path)
    c.put(1, 1, GenParity.ODD, 1, 1, "dim", 5)
    (entry,) = tmp_path.glob("*.json")
    entry.write_text("{not json")
    assert c.get(1, 1, GenParity.ODD, 1, 1, "dim") is None
