"""Constructions and sweeps that locate incomplete and primitive numbers."""

from __future__ import annotations

import enum
import logging
import math
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import arith
from .arith import Factorization, factor, is_prime, order
from .certificates import _certified_complete, certify
from .cycles import (
    Classification,
    ExtremeCycle,
    Instance,
    Verdict,
    classify,
    verify_cycle,
    _canonical,
)
from .errors import HypothesisViolation, InvalidWord, ResourceLimit

logger = logging.getLogger(__name__)


class Construction(str, enum.Enum):
    DIGIT_WORD = "DigitWord"
    QUOTIENT = "Quotient"
    REPUNIT = "Repunit"
    DIVISOR_SWEEP = "DivisorSweep"
    SCAN = "Scan"


@dataclass(frozen=True)
class PrimitiveRecord:
    m: int
    order: int
    construction: Construction
    factorization: Factorization
    cycles: tuple[ExtremeCycle, ...] = ()


def _record(g: int, m: int, how: Construction, cls: Classification) -> PrimitiveRecord:
    return PrimitiveRecord(m, order(g, m), how, factor(m), cls.cycles)


def parse_word(word: str | Sequence[int]) -> tuple[int, ...]:
    """Bits k_0..k_{n-1}; a string is read left to right as k_0 first."""
    bits = tuple(int(b) for b in word)
    if not bits or any(b not in (0, 1) for b in bits):
        raise InvalidWord(f"digit word must be a non-empty 0/1 string, got {word!r}")
    if not any(bits):
        raise InvalidWord("the all-zero word only gives the trivial cycle")
    return bits


def construct_from_digits(g: int, word: str | Sequence[int]) -> tuple[int, ExtremeCycle]:
    """The incomplete number ``(g**n - 1)/gcd(V, g**n - 1)`` carrying a cycle with these bits.

    ``V = sum k_i g**i`` and the starting point is ``V / d``.  The returned
    cycle is reduced to its least period and put in canonical rotation.
    """
    bits = parse_word(word)
    n = len(bits)
    v = sum(k * g**i for i, k in enumerate(bits))
    top = g**n - 1
    d = math.gcd(v, top)
    m = top // d
    x = v // d
    pts, used = [], []
    for k in bits:
        pts.append(x)
        used.append(k)
        num = x + m * k
        if num % g:
            raise AssertionError(f"non-integral step from {x}")
        x = num // g
    assert x == pts[0]
    period = next(p for p in range(1, n + 1) if n % p == 0 and pts[p:] + pts[:p] == pts)
    cycle = _canonical(pts[:period], used[:period])
    assert verify_cycle(Instance(g, m), cycle.points, cycle.digits)
    return m, cycle


def construct_quotient(g: int, q: int) -> tuple[int, int]:
    """``m = (g**q - 1)/(g - 1)`` for q > g-1 coprime to g-1; returns (m, o_g(m)) with o_g(m) == q."""
    if q <= g - 1 or math.gcd(q, g - 1) != 1:
        raise HypothesisViolation(f"needs q > {g - 1} and gcd(q, {g - 1}) = 1")
    m = (g**q - 1) // (g - 1)
    k = order(g, m)
    if k != q:
        raise AssertionError(f"order {k} != {q}")
    return m, k


def repunit(g: int) -> PrimitiveRecord:
    """The base-g repunit with g ones, its unique cycle and its primitivity check."""
    if g < 4 or g % 2:
        raise HypothesisViolation("scale must be even and >= 4")
    m = (g**g - 1) // (g - 1)
    inst = Instance(g, m)
    start = sum(i * g ** (g - 1 - i) for i in range(1, g))
    cls = classify(inst)
    if not any(start in c.points for c in cls.cycles):
        raise AssertionError(f"{start} is not a cycle point for {m}")
    if not cls.primitive:
        raise AssertionError(f"repunit {m} is not primitive for g={g}")
    return _record(g, m, Construction.REPUNIT, cls)


def order_catalogue(g: int, k: int) -> list[int]:
    """All primitive numbers of order k <= 5 for scale g."""
    if not 1 <= k <= 5:
        raise HypothesisViolation("orders above 5 are not catalogued")
    if k == 1:
        return [g - 1]
    if k in (2, 3) or (g - 1) % 3:
        return []
    return [(g**k - 1) // 3]


def prime_divisor_orders(g: int, n: int) -> dict[int, int]:
    """Each prime factor p of ``g**n - 1`` with o_g(p); every order divides n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return {p: order(g, p) for p in factor(g**n - 1).primes}


def divisor_sweep(
    g: int,
    n: int,
    known_primitives: Iterable[int] = (),
    *,
    max_divisors: int = 1 << 14,
) -> list[PrimitiveRecord]:
    """New primitive numbers among the divisors of ``g**n - 1``.

    A primitive divisor cannot be a proper multiple of a known primitive, so
    only divisors free of every known primitive are candidates.  Candidates
    are visited from the top down; a candidate below a complete one is
    complete, everything else is classified (memoized for the run).  A
    candidate is primitive when it is incomplete and dropping any single
    prime factor leaves a complete number.
    """
    known = sorted(set(known_primitives))
    f = factor(g**n - 1)
    allowed = [d for d in arith.divisors(f) if d > 1 and not any(d % q == 0 for q in known)]
    if len(allowed) > max_divisors:
        raise ResourceLimit(f"{len(allowed)} candidate divisors exceed {max_divisors}")
    allowed_set = set(allowed)
    status: dict[int, Verdict] = {}
    cycles: dict[int, Classification] = {}
    for d in reversed(allowed):
        if any(status.get(d * p) is Verdict.COMPLETE for p in f.primes if d * p in allowed_set):
            status[d] = Verdict.COMPLETE
            continue
        cls = classify(Instance(g, d))
        status[d] = cls.verdict
        cycles[d] = cls
        logger.debug("g=%d n=%d: %d %s", g, n, d, cls.verdict.value)
    records = []
    for d in allowed:
        if status[d] is not Verdict.INCOMPLETE:
            continue
        if all(d // p == 1 or status[d // p] is Verdict.COMPLETE for p in factor(d).primes):
            records.append(_record(g, d, Construction.DIVISOR_SWEEP, cycles[d]))
    return records


def _classify_one(args: tuple[int, int]) -> tuple[int, Classification]:
    g, m = args
    return m, classify(Instance(g, m))


def scan_primitives(
    g: int,
    m_max: int,
    *,
    threads: int = 1,
    batch: int = 4096,
    budget: int | None = None,
) -> list[PrimitiveRecord]:
    """All primitive numbers m <= m_max in ascending order.

    Odd multiples of primitives already found are incomplete and skipped.
    Any other m has only complete proper divisors, so it is primitive exactly
    when it is incomplete.  With ``threads > 1`` batches are classified in
    parallel and merged in ascending order before the sieve grows.
    """
    if m_max < 3:
        raise ValueError("m_max must be >= 3")
    found: list[PrimitiveRecord] = []
    calls = 0
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        for lo in range(1, m_max + 1, 2 * batch):
            todo = [
                m
                for m in range(lo, min(lo + 2 * batch, m_max + 1), 2)
                if not any(m % r.m == 0 for r in found)
            ]
            calls += len(todo)
            if budget is not None and calls > budget:
                raise ResourceLimit(f"classify budget {budget} exhausted below {lo}")
            jobs = [(g, m) for m in todo]
            results = pool.map(_classify_one, jobs, chunksize=64) if pool else map(_classify_one, jobs)
            for m, cls in results:
                if cls.verdict is Verdict.INCOMPLETE and not any(m % r.m == 0 for r in found):
                    found.append(_record(g, m, Construction.SCAN, cls))
    finally:
        if pool:
            pool.shutdown()
    return found


class ConjectureStatus(str, enum.Enum):
    VERIFIED = "verified-up-to-bound"
    COUNTEREXAMPLE = "counterexample"
    BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass
class ConjectureReport:
    g: int
    status: ConjectureStatus
    bound: int
    checked_up_to: int
    classify_calls: int = 0
    certificate_hits: int = 0
    counterexample: int | None = None
    elapsed_s: float = 0.0


def conjecture_scan(
    g: int,
    *,
    max_classify: int = 10**6,
    max_seconds: float | None = None,
) -> ConjectureReport:
    """Look for a primitive number strictly between g-1 and the base-g repunit.

    Evidence only.  Multiples of g-1 are skipped; every other candidate has
    only complete proper divisors (or we would already have stopped), so a
    Complete or NotPrimitive certificate settles it as complete and anything
    else is classified.
    """
    if not is_prime(g - 1):
        raise HypothesisViolation(f"g-1 = {g - 1} is not prime")
    bound = (g**g - 1) // (g - 1)
    t0 = time.monotonic()
    report = ConjectureReport(g, ConjectureStatus.VERIFIED, bound, g - 1)
    for m in range(g + 1, bound, 2):
        if m % (g - 1) == 0:
            report.checked_up_to = m
            continue
        if max_seconds is not None and time.monotonic() - t0 > max_seconds:
            report.status = ConjectureStatus.BUDGET_EXHAUSTED
            break
        if _certified_complete(g, m) is not None or any(
            c.verdict in (Verdict.COMPLETE, Verdict.NOT_PRIMITIVE) for c in certify(g, m)
        ):
            report.certificate_hits += 1
            report.checked_up_to = m
            continue
        if report.classify_calls >= max_classify:
            report.status = ConjectureStatus.BUDGET_EXHAUSTED
            break
        report.classify_calls += 1
        cls = classify(Instance(g, m))
        if cls.verdict is Verdict.INCOMPLETE:
            report.status = ConjectureStatus.COUNTEREXAMPLE
            report.counterexample = m
            report.checked_up_to = m
            break
        report.checked_up_to = m
    else:
        report.checked_up_to = bound - 1
    report.elapsed_s = time.monotonic() - t0
    return report


def primitives_of_order(g: int, n: int) -> list[PrimitiveRecord]:
    """Primitive numbers with ``o_g(m) == n``.

    Every primitive of order d divides ``g**d - 1``, so sweeping the proper
    divisors d of n first yields the full known set for the final sweep.
    """
    known: set[int] = set()
    for d in range(1, n):
        if n % d == 0:
            known.update(r.m for r in _primitives_of_order_cached(g, d))
    return [r for r in divisor_sweep(g, n, known) if r.order == n]


_order_memo: dict[tuple[int, int], list[PrimitiveRecord]] = {}


def _primitives_of_order_cached(g: int, n: int) -> list[PrimitiveRecord]:
    key = (g, n)
    if key not in _order_memo:
        _order_memo[key] = primitives_of_order(g, n)
    return _order_memo[key]
