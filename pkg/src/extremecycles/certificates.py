"""Theorem-based verdicts that avoid cycle enumeration.

Each rule returns a :class:`Certificate`.  A rule whose hypotheses fail on
otherwise well-formed input gives ``Inconclusive``; structurally invalid
input (even m, a non-prime where a prime is required, ...) raises
:class:`HypothesisViolation`.  All thresholds are decided in integer or
rational arithmetic.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any

from . import arith
from .arith import ceil_log, factor, is_perfect_square, is_prime, lcm, order
from .cycles import Instance, Verdict, classify, cycle_point_bound, group_generated
from .errors import HypothesisViolation, NotCoprime

__all__ = [
    "Certificate",
    "certify",
    "cor2_32",
    "cor2_34",
    "cor2_35",
    "cor2_37_1",
    "group_generated",
    "group_log",
    "lem2_24",
    "lem2_29",
    "th2_12",
    "th2_13",
    "th2_18",
    "th2_26",
    "th2_30",
]


@dataclass(frozen=True)
class Certificate:
    rule: str
    verdict: Verdict
    witness: Mapping[str, Any] = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.verdict is not Verdict.INCONCLUSIVE


def _inconclusive(rule: str, **why: Any) -> Certificate:
    return Certificate(rule, Verdict.INCONCLUSIVE, why)


def _check_odd(*values: int) -> None:
    for v in values:
        if v < 1 or v % 2 == 0:
            raise HypothesisViolation(f"{v} is not an odd positive integer")


def _check_scale(g: int) -> None:
    if g < 4 or g % 2:
        raise HypothesisViolation(f"scale {g} must be even and >= 4")


def group_log(g: int, m: int, c: int, k: int | None = None) -> int | None:
    """Exponent ``j < o_g(m)`` with ``g**j = c (mod m)``, or None if c is not in ``<g>``.

    Baby-step giant-step after the cheap filter ``c**o_g(m) = 1``.
    """
    if k is None:
        k = order(g, m)
    c %= m
    if math.gcd(c, m) != 1 or pow(c, k, m) != 1:
        return None
    step = math.isqrt(k) + 1
    baby: dict[int, int] = {}
    x = 1
    for i in range(step):
        baby.setdefault(x, i)
        x = x * g % m
    giant = pow(pow(g, step, m), -1, m)
    y = c
    for j in range(step):
        i = baby.get(y)
        if i is not None:
            return (j * step + i) % k
        y = y * giant % m
    return None


def _search_group(rule: str, g: int, m: int, candidates: Iterable[int]) -> Certificate:
    k = order(g, m)
    for c in candidates:
        j = group_log(g, m, c, k)
        if j is not None:
            return Certificate(rule, Verdict.COMPLETE, {"c": c, "c_mod_m": c % m, "exponent": j, "order": k})
    return _inconclusive(rule, order=k)


def th2_12(g: int, m: int) -> Certificate:
    """Complete if one of -1..-(g-2) or 2..g-1 (mod m) is a power of g."""
    _check_scale(g)
    _check_odd(m)
    if m <= g - 1 or m % (g - 1) == 0:
        raise HypothesisViolation("needs m > g-1 and (g-1) not dividing m")
    if math.gcd(m, g) != 1:
        raise NotCoprime(f"gcd({g}, {m}) > 1")
    cands = [-c for c in range(1, g - 1)] + list(range(2, g))
    return _search_group("TH_2_12", g, m, cands)


def th2_13(g: int, m: int) -> Certificate:
    """Complete if one of g+1..g(g-1) (mod m) is a power of g."""
    _check_scale(g)
    _check_odd(m)
    if m <= g * (g - 1) or m % (g - 1) == 0:
        raise HypothesisViolation("needs m > g(g-1) and (g-1) not dividing m")
    if math.gcd(m, g) != 1:
        raise NotCoprime(f"gcd({g}, {m}) > 1")
    return _search_group("TH_2_13", g, m, range(g + 1, g * (g - 1) + 1))


def th2_18(g: int, p: int, n: int = 1) -> Certificate:
    """p**n complete when o_g(p) is even or g is a perfect square (p prime > g-1)."""
    _check_scale(g)
    if not is_prime(p) or p <= g - 1 or n < 1:
        raise HypothesisViolation(f"needs a prime p > {g - 1} and n >= 1")
    k = order(g, p)
    if k % 2 == 0:
        return Certificate("TH_2_18", Verdict.COMPLETE, {"p": p, "n": n, "order": k, "reason": "even order"})
    if is_perfect_square(g):
        return Certificate("TH_2_18", Verdict.COMPLETE, {"p": p, "n": n, "order": k, "reason": "square scale"})
    return _inconclusive("TH_2_18", order=k)


def _lem2_8(g: int, m: int) -> Certificate:
    return Certificate("LEM_2_8", Verdict.NOT_PRIMITIVE, {"gcd": math.gcd(m, g)})


def lem2_24(g: int, a: int, b: int) -> Certificate:
    """ab not primitive when o(ab) >= ((a/(g-1) - 2/g - 1 + g) / (g/2)) * o(b)."""
    _check_scale(g)
    _check_odd(a, b)
    if a <= 1 or b <= 1:
        raise HypothesisViolation("needs a, b > 1")
    if math.gcd(a * b, g) != 1:
        return _lem2_8(g, a * b)
    threshold = (Fraction(a, g - 1) - Fraction(2, g) - 1 + g) / Fraction(g, 2)
    oab, ob = order(g, a * b), order(g, b)
    w = {"a": a, "b": b, "order_ab": oab, "order_b": ob, "threshold": str(threshold)}
    if oab >= threshold * ob:
        return Certificate("LEM_2_24", Verdict.NOT_PRIMITIVE, w)
    return Certificate("LEM_2_24", Verdict.INCONCLUSIVE, w)


def lem2_29(g: int, a: int, b: int) -> Certificate:
    """ab not primitive when o(ab) > 2**ceil(log_g(a/(g-1))) * o(b)."""
    _check_scale(g)
    _check_odd(a, b)
    if math.gcd(a * b, g) != 1:
        raise NotCoprime(f"gcd({a * b}, {g}) > 1")
    e = ceil_log(g, a, g - 1)
    oab, ob = order(g, a * b), order(g, b)
    w = {"a": a, "b": b, "order_ab": oab, "order_b": ob, "exponent": e}
    # e >= 0 because a/(g-1) >= 1/(g-1) > 1/g.
    if oab > 2**e * ob:
        return Certificate("LEM_2_29", Verdict.NOT_PRIMITIVE, w)
    return Certificate("LEM_2_29", Verdict.INCONCLUSIVE, w)


def th2_30(g: int, m: int, proper_divisors_complete: bool = False) -> Certificate:
    """Not primitive when o(m) exceeds the cycle-point bound; complete if also every proper divisor is."""
    _check_scale(g)
    _check_odd(m)
    if m % (g - 1) == 0 or math.gcd(m, g) != 1:
        raise HypothesisViolation("needs gcd(m, g) = 1 and (g-1) not dividing m")
    k = order(g, m)
    bound = cycle_point_bound(Instance(g, m))
    w = {"order": k, "bound": bound}
    if k <= bound:
        return Certificate("TH_2_30", Verdict.INCONCLUSIVE, w)
    if proper_divisors_complete:
        return Certificate("TH_2_30", Verdict.COMPLETE, {**w, "divisors": "complete"})
    return Certificate("TH_2_30", Verdict.NOT_PRIMITIVE, w)


def cor2_32(g: int, m: int) -> Certificate:
    """Not primitive when o(m) > 2**ceil(log_g(m/(g-1)))."""
    _check_scale(g)
    _check_odd(m)
    if math.gcd(m, g) != 1:
        raise NotCoprime(f"gcd({g}, {m}) > 1")
    e = ceil_log(g, m, g - 1)
    k = order(g, m)
    w = {"order": k, "exponent": e}
    if e >= 0 and k > 2**e:
        return Certificate("COR_2_32", Verdict.NOT_PRIMITIVE, w)
    return Certificate("COR_2_32", Verdict.INCONCLUSIVE, w)


def _simple_and_large(g: int, p: int) -> bool:
    return p > g - 1 and math.gcd(p, g) == 1 and arith.iota(g, p) == 1


def _check_primes(primes: Sequence[int]) -> None:
    if len(set(primes)) != len(primes) or not primes:
        raise HypothesisViolation("needs a non-empty list of distinct primes")
    for p in primes:
        if p % 2 == 0 or not is_prime(p):
            raise HypothesisViolation(f"{p} is not an odd prime")


def th2_26(
    g: int,
    prime_powers: Sequence[int] | Sequence[tuple[int, int]],
    base_complete: bool | None = None,
) -> Certificate:
    """Every p_1**k_1 ... p_r**k_r complete, given one explicit base number is complete.

    The base is ``prod p_i**(iota(p_i) + j_i)`` where ``p_i**j_i`` is the exact
    power of p_i in ``lcm(o(p_1), ..., o(p_r))``.  Pass ``base_complete`` if it
    is already known; otherwise it is settled with :func:`classify`.  A base
    that is not complete makes the theorem inapplicable and raises.
    """
    _check_scale(g)
    primes = [p if isinstance(p, int) else p[0] for p in prime_powers]
    _check_primes(primes)
    for p in primes:
        if g % p == 0:
            raise HypothesisViolation(f"{p} divides {g}")
    big = lcm(order(g, p) for p in primes)
    exps = {p: arith.iota(g, p) + arith.valuation(big, p) for p in primes}
    base = math.prod(p**e for p, e in exps.items())
    if base_complete is None:
        base_complete = classify(Instance(g, base)).verdict is Verdict.COMPLETE
    if not base_complete:
        raise HypothesisViolation(f"base case {base} is not complete")
    return Certificate("TH_2_26", Verdict.COMPLETE, {"base": base, "exponents": exps})


def _cor2_34_arith(g: int, primes: Sequence[int]) -> dict[str, Any] | None:
    """The order-divisibility and lcm conditions of the all-powers rule; None when they fail."""
    orders = {p: order(g, p) for p in primes}
    if any(o % q == 0 for o in orders.values() for q in primes):
        return None
    big = lcm(orders.values())
    e = ceil_log(g, math.prod(primes), g - 1)
    if big <= 2**e:
        return None
    return {"orders": orders, "lcm": big, "exponent": e}


@lru_cache(maxsize=4096)
def _all_powers_complete(g: int, primes: tuple[int, ...]) -> str | None:
    """Rule proving every product of powers of ``primes`` complete, or None.

    Singletons go through the prime-power theorem; larger sets through the
    all-powers corollary with every proper subset checked recursively.
    """
    if not primes:
        return "trivial"
    if len(primes) == 1:
        p = primes[0]
        if p > g - 1 and th2_18(g, p).conclusive:
            return "TH_2_18"
        return None
    if len(primes) > 8:
        return None
    if not all(_simple_and_large(g, p) for p in primes):
        return None
    if _cor2_34_arith(g, primes) is None:
        return None
    for r in range(1, len(primes)):
        for sub in combinations(primes, r):
            if _all_powers_complete(g, sub) is None:
                return None
    return "COR_2_34"


def cor2_34(g: int, primes: Sequence[int], subsets_complete: bool | None = None) -> Certificate:
    """All products of powers of simple primes > g-1 complete, under the lcm inequality.

    ``subsets_complete`` asserts condition (i) for every proper subset; when
    omitted the subsets are settled recursively (singletons by the
    prime-power theorem).
    """
    _check_scale(g)
    _check_primes(primes)
    ps = tuple(sorted(primes))
    if not all(_simple_and_large(g, p) for p in ps):
        return _inconclusive("COR_2_34", reason="needs simple primes > g-1")
    w = _cor2_34_arith(g, ps)
    if w is None:
        return _inconclusive("COR_2_34", reason="order divisibility or lcm inequality fails")
    if subsets_complete is None:
        subsets_complete = all(
            _all_powers_complete(g, sub) is not None
            for r in range(1, len(ps))
            for sub in combinations(ps, r)
        )
    if not subsets_complete:
        return _inconclusive("COR_2_34", reason="proper subsets not certified complete")
    return Certificate("COR_2_34", Verdict.COMPLETE, {**w, "primes": ps})


def cor2_35(g: int, primes: Sequence[int]) -> Certificate:
    """All-powers completeness for a perfect-square scale, checked subset by subset.

    The subset inequality is tested in the integer form
    ``lcm > 2**ceil(log_g(prod/(g-1)))``, which the real-exponent form implies
    and which is all the induction uses.
    """
    _check_scale(g)
    _check_primes(primes)
    ps = tuple(sorted(primes))
    if not is_perfect_square(g):
        return _inconclusive("COR_2_35", reason="scale is not a perfect square")
    if not all(_simple_and_large(g, p) for p in ps):
        return _inconclusive("COR_2_35", reason="needs simple primes > g-1")
    orders = {p: order(g, p) for p in ps}
    if any(o % q == 0 for o in orders.values() for q in ps):
        return _inconclusive("COR_2_35", reason="an order is divisible by one of the primes")
    for r in range(2, len(ps) + 1):
        for sub in combinations(ps, r):
            if lcm(orders[p] for p in sub) <= 2 ** ceil_log(g, math.prod(sub), g - 1):
                return _inconclusive("COR_2_35", reason=f"inequality fails on {sub}")
    return Certificate("COR_2_35", Verdict.COMPLETE, {"orders": orders, "primes": ps})


def cor2_37_1(g: int, a: int, p: int, a_complete: bool | None = None) -> Certificate:
    """p**k * a complete for all k, for complete a and a simple prime p meeting the order test.

    When ``a_complete`` is None the completeness of ``a`` is established by
    certificates, falling back to :func:`classify`.
    """
    _check_scale(g)
    _check_odd(a)
    if not is_prime(p) or p == 2:
        raise HypothesisViolation(f"{p} is not an odd prime")
    if math.gcd(a, g) != 1:
        raise HypothesisViolation(f"gcd({a}, {g}) > 1")
    checks: dict[str, Any] = {"a": a, "p": p}
    if p <= g - 1 or g % p == 0 or arith.iota(g, p) != 1:
        return _inconclusive("COR_2_37_1", **checks, reason="p must be a simple prime > g-1")
    if a % p == 0:
        return _inconclusive("COR_2_37_1", **checks, reason="p divides a")
    op, oa = order(g, p), order(g, a)
    checks.update(order_p=op, order_a=oa)
    if math.gcd(op, oa) != 1:
        return _inconclusive("COR_2_37_1", **checks, reason="orders share a factor")
    e = ceil_log(g, p, g - 1)
    checks["exponent"] = e
    if op <= 2**e:
        return _inconclusive("COR_2_37_1", **checks, reason="order inequality fails")
    if a_complete is None:
        a_complete = _certified_complete(g, a) is not None or (
            classify(Instance(g, a)).verdict is Verdict.COMPLETE
        )
    if not a_complete:
        return _inconclusive("COR_2_37_1", **checks, reason="a is not complete")
    return Certificate("COR_2_37_1", Verdict.COMPLETE, checks)


@lru_cache(maxsize=1 << 16)
def _certified_complete(g: int, n: int) -> str | None:
    """A rule proving n complete using certificates only (no enumeration), or None."""
    if n <= g - 2:
        return "LEM_2_6"
    if math.gcd(n, g) != 1 or n % (g - 1) == 0:
        return None
    if th2_12(g, n).conclusive:
        return "TH_2_12"
    if n > g * (g - 1) and th2_13(g, n).conclusive:
        return "TH_2_13"
    f = factor(n)
    if len(f) == 1 and f.primes[0] > g - 1 and th2_18(g, f.primes[0], f.pairs[0][1]).conclusive:
        return "TH_2_18"
    if len(f) <= 8 and _all_powers_complete(g, f.primes) is not None:
        return "COR_2_34"
    for p, k in f:
        if len(f) > 1 and p > g - 1:
            rest = n // p**k
            c = cor2_37_1(g, rest, p, a_complete=_certified_complete(g, rest) is not None)
            if c.conclusive:
                return "COR_2_37_1"
    if th2_30(g, n).verdict is Verdict.NOT_PRIMITIVE and all(
        _certified_complete(g, n // p) is not None for p in f.primes
    ):
        return "TH_2_30"
    return None


def certify(
    g: int,
    m: int,
    known_incomplete: Iterable[int] = (),
    max_splits: int = 64,
) -> list[Certificate]:
    """Every conclusive certificate for (g, m), cheapest rules first.

    ``known_incomplete`` lists numbers already known to be incomplete; a proper
    divisor among them makes m incomplete by odd-multiple scaling.
    """
    _check_scale(g)
    _check_odd(m)
    out: list[Certificate] = []
    if m <= g - 2:
        return [Certificate("LEM_2_6", Verdict.COMPLETE, {"m": m})]
    if m == g - 1:
        return [Certificate("LEM_2_4_1", Verdict.INCOMPLETE, {"cycle": [1], "digits": "1"})]
    if m % (g - 1) == 0:
        out.append(Certificate("LEM_2_5", Verdict.INCOMPLETE, {"divisor": g - 1, "cycle": [m // (g - 1)]}))
    for d in sorted(set(known_incomplete)):
        if 1 < d < m and m % d == 0:
            out.append(Certificate("LEM_2_5", Verdict.INCOMPLETE, {"divisor": d}))
            break
    if math.gcd(m, g) != 1:
        out.append(_lem2_8(g, m))
        return out
    if m % (g - 1):
        for cert in (th2_12(g, m), th2_13(g, m) if m > g * (g - 1) else None):
            if cert is not None and cert.conclusive:
                out.append(cert)
        f = factor(m)
        if len(f) == 1 and f.primes[0] > g - 1:
            cert = th2_18(g, *f.pairs[0])
            if cert.conclusive:
                out.append(cert)
    c32 = cor2_32(g, m)
    if c32.conclusive:
        out.append(c32)
    f = factor(m)
    if m % (g - 1):
        divs_done = all(_certified_complete(g, m // p) is not None for p in f.primes)
        c30 = th2_30(g, m, proper_divisors_complete=divs_done)
        if c30.conclusive:
            out.append(c30)
        # Composite corollaries.
        if len(f) > 1:
            if len(f) <= 8 and _all_powers_complete(g, f.primes) == "COR_2_34":
                out.append(cor2_34(g, f.primes, subsets_complete=True))
            if is_perfect_square(g) and len(f) <= 8 and all(p > g - 1 for p in f.primes):
                c35 = cor2_35(g, f.primes)
                if c35.conclusive:
                    out.append(c35)
            for p, k in f:
                if p > g - 1:
                    rest = m // p**k
                    c = cor2_37_1(g, rest, p, a_complete=_certified_complete(g, rest) is not None)
                    if c.conclusive:
                        out.append(c)
                        break
    # Divisor splits m = a*b for the two non-primitivity lemmas.
    divs = arith.divisors(f)
    if len(divs) <= max_splits:
        for rule_fn, name in ((lem2_29, "LEM_2_29"), (lem2_24, "LEM_2_24")):
            for a in divs[1:]:
                b = m // a
                if name == "LEM_2_24" and b == 1:
                    continue
                cert = rule_fn(g, a, b)
                if cert.conclusive:
                    out.append(cert)
                    break
    return out
