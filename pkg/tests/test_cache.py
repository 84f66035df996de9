import json

from extremecycles import arith
from extremecycles.arith import Factorization
from extremecycles.cache import FactorCache, decode_entry, encode_entry


def test_round_trip(tmp_path):
    path = tmp_path / "f.jsonl"
    c = FactorCache(path)
    f = arith.factor(6**20 - 1)
    c.put(6**20 - 1, f)
    c.put(6**20 - 1, f)
    assert len(path.read_text().splitlines()) == 1
    again = FactorCache(path)
    assert again.get(6**20 - 1) == f and len(again) == 1


def test_entry_format():
    line = encode_entry(9331, Factorization(((7, 1), (31, 1), (43, 1))))
    assert json.loads(line) == {"value": "9331", "factorization": [["7", 1], ["31", 1], ["43", 1]]}
    assert decode_entry(line)[0] == 9331


def test_bad_lines_are_skipped(tmp_path):
    path = tmp_path / "f.jsonl"
    good = encode_entry(9331, arith.factor(9331))
    path.write_text(
        "\n".join(
            [
                good,
                "not json",
                json.dumps({"value": "10", "factorization": [["3", 1], ["5", 1]]}),
                json.dumps({"value": "15", "factorization": [["15", 1]]}),
                json.dumps({"value": "21"}),
                '{"value": "35", "factorization": [["5", 1], ["7"',
            ]
        )
    )
    c = FactorCache(path)
    assert len(c) == 1 and 9331 in c and c.skipped == 5


def test_factor_uses_installed_cache(tmp_path):
    c = FactorCache(tmp_path / "f.jsonl")
    token = arith.factor_cache.set(c)
    try:
        n = 2**67 - 1
        f = arith.factor(n)
        assert c.get(n) == f
        assert arith.factor(n) == f
    finally:
        arith.factor_cache.reset(token)
    assert FactorCache(tmp_path / "f.jsonl").get(2**67 - 1) == f
