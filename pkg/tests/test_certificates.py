import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extremecycles import arith
from extremecycles import certificates as cert
from extremecycles.cycles import Instance, Verdict, classify
from extremecycles.errors import HypothesisViolation

C, NP, INC, INCONC = Verdict.COMPLETE, Verdict.NOT_PRIMITIVE, Verdict.INCOMPLETE, Verdict.INCONCLUSIVE


def rechecks(g, m, c):
    """Witness c really is g**j mod m, by direct exponentiation."""
    w = c.witness
    return w["exponent"] < arith.order(g, m) and pow(g, w["exponent"], m) == w["c"] % m


def test_th2_12():
    c = cert.th2_12(6, 7)
    assert c.verdict is C and c.witness["c"] == -1 and rechecks(6, 7, c)
    c = cert.th2_12(4, 67)
    assert c.verdict is C and rechecks(4, 67, c)
    assert cert.th2_12(6, 55987).verdict is INCONC


def test_th2_12_example_witness_three_is_not_in_group():
    # 4**3 = -3 (mod 67); +3 is not a power of 4, the rule fires through -2 instead.
    assert cert.group_log(4, 67, 3) is None
    assert cert.group_log(4, 67, -3) == 3


def test_th2_13():
    c = cert.th2_13(4, 251)
    assert c.verdict is C and c.witness["c"] == 5 and rechecks(4, 251, c)
    assert cert.th2_13(6, 55987).verdict is INCONC
    with pytest.raises(HypothesisViolation):
        cert.th2_13(4, 11)


def test_th2_13_consistent_with_classify():
    m = 21845 * 2 + 1
    c = cert.th2_13(4, m)
    if c.verdict is C:
        assert classify(Instance(4, m)).verdict is C


def test_th2_18():
    assert cert.th2_18(4, 5, 3).verdict is C
    assert cert.th2_18(6, 7, 1).verdict is C
    assert cert.th2_18(6, 55987, 1).verdict is INCONC
    with pytest.raises(HypothesisViolation):
        cert.th2_18(6, 9, 1)


def test_th2_18_family_closure():
    for p in arith._sieve(1000):
        if p <= 3:
            continue
        for n in range(1, 4):
            assert cert.th2_18(4, p, n).verdict is C
            if p**n <= 10**7:
                assert classify(Instance(4, p**n)).verdict is C, (p, n)


def test_lem2_24():
    with pytest.raises(HypothesisViolation):
        cert.lem2_24(4, 1, 5)
    c = cert.lem2_24(6, 25, 7)
    assert c.rule == "LEM_2_24" and c.verdict in (NP, INCONC)
    if c.verdict is NP:
        assert not classify(Instance(6, 175)).primitive
    c = cert.lem2_24(4, 3, 2731 * 8191)
    if c.verdict is NP:
        assert not classify(Instance(4, 3 * 2731 * 8191)).primitive


def test_lem2_24_uses_exact_threshold():
    c = cert.lem2_24(6, 25, 7)
    assert c.witness["threshold"] == "29/9"


def test_lem2_29():
    assert cert.lem2_29(6, 13, 1).verdict is NP
    assert cert.lem2_29(6, 55987, 1).verdict is INCONC
    assert cert.lem2_29(4, 85, 1).verdict is INCONC


def test_th2_30():
    assert cert.th2_30(6, 13).verdict is NP
    assert cert.th2_30(6, 13, proper_divisors_complete=True).verdict is C
    assert cert.th2_30(4, 85).verdict is INCONC
    c = cert.th2_30(6, 55987)
    assert c.verdict is INCONC and c.witness["bound"] >= 7


def test_cor2_32():
    assert cert.cor2_32(6, 13).verdict is NP
    assert cert.cor2_32(6, 55987).verdict is INCONC
    assert cert.cor2_32(4, 3).verdict is INCONC


def test_th2_26():
    c = cert.th2_26(16, [17, 19])
    assert c.verdict is C
    assert classify(Instance(16, c.witness["base"])).verdict is C
    assert cert.th2_26(36, [(37, 1), (43, 1)]).verdict is C
    with pytest.raises(HypothesisViolation):
        cert.th2_26(16, [17, 19], base_complete=False)


@pytest.mark.parametrize("k, l", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)])
def test_th2_26_families_against_classify(k, l):
    assert classify(Instance(16, 17**k * 19**l)).verdict is C
    assert classify(Instance(36, 37**k * 43**l)).verdict is C


def test_cor2_34():
    c = cert.cor2_34(16, [17, 19])
    assert c.verdict is C and c.witness["lcm"] == 18 and 2 ** c.witness["exponent"] == 4


def test_cor2_35():
    c = cert.cor2_35(16, [17, 19])
    assert c.verdict is C
    assert cert.cor2_35(6, [7, 11]).verdict is INCONC


def test_cor2_37_1():
    for k in (1, 2, 3):
        c = cert.cor2_37_1(36, 37**k, 43)
        assert c.verdict is C and c.witness["order_p"] == 3 and 2 ** c.witness["exponent"] == 2
    for k, l in ((1, 1), (2, 1), (1, 2)):
        assert cert.cor2_37_1(36, 47**k * 53**l, 59).verdict is C
    for j in (1, 2):
        assert classify(Instance(36, 37 * 43**j)).verdict is C
        assert classify(Instance(36, 47 * 53 * 59**j)).verdict is C


def test_certify_examples():
    assert any(c.verdict is C for c in cert.certify(4, 5))
    assert any(c.rule == "LEM_2_5" and c.verdict is INC for c in cert.certify(4, 9))
    assert not any(c.verdict is C for c in cert.certify(6, 55987))


def test_certify_known_incomplete():
    out = cert.certify(4, 85 * 11, known_incomplete=[85])
    assert any(c.rule == "LEM_2_5" and c.witness["divisor"] == 85 for c in out)


@pytest.mark.parametrize("g", [4, 6, 16])
def test_soundness_sweep_small(g):
    for m in range(1, 8001, 2):
        out = cert.certify(g, m)
        cls = classify(Instance(g, m))
        for c in out:
            if c.verdict is C:
                assert cls.verdict is C, (g, m, c)
            if c.verdict is NP:
                assert not cls.primitive, (g, m, c)
            if c.verdict is INC:
                assert cls.verdict is INC, (g, m, c)
            if c.rule in ("TH_2_12", "TH_2_13"):
                assert rechecks(g, m, c)


@given(st.sampled_from([4, 6, 10, 16]), st.integers(1, 10**6).map(lambda k: 2 * k + 1))
def test_group_log(g, m):
    if math.gcd(g, m) != 1:
        return
    k = arith.order(g, m)
    for j in (0, 1, k // 2, k - 1):
        assert cert.group_log(g, m, pow(g, j, m), k) == j % k


def test_hypothesis_violations():
    with pytest.raises(HypothesisViolation):
        cert.th2_12(4, 8)
    with pytest.raises(HypothesisViolation):
        cert.th2_12(5, 7)
    with pytest.raises(HypothesisViolation):
        cert.cor2_34(16, [17, 17])
