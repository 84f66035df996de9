"""Integer arithmetic: primality, factorization, divisors and multiplicative orders.

Everything here is exact.  The only randomness is in Miller-Rabin rounds above
2**64 and in Pollard-rho starting points, both drawn from a seedable RNG.
"""

from __future__ import annotations

import contextvars
import math
import random
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Iterator, Protocol

from .errors import NotCoprime, NotPrime

TRIAL_LIMIT = 10**6

# Deterministic witness set for n < 2**64 (Jim Sinclair).
_WITNESSES_64 = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)
_RANDOM_ROUNDS = 40

_rng = random.Random(0)
_small_primes: list[int] = []


def seed(value: int) -> None:
    """Reseed the generator used by randomized primality rounds and Pollard rho."""
    _rng.seed(value)


class FactorCacheLike(Protocol):
    def get(self, n: int) -> "Factorization | None": ...

    def put(self, n: int, f: "Factorization") -> None: ...


# Installed by the CLI; library callers normally leave it unset.
factor_cache: contextvars.ContextVar[FactorCacheLike | None] = contextvars.ContextVar(
    "factor_cache", default=None
)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ``((p1, e1), (p2, e2), ...)`` with p ascending."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        last = 1
        for p, e in self.pairs:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.pairs!r}")
            last = p

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "Factorization":
        return cls(tuple(sorted((p, e) for p, e in d.items() if e > 0)))

    @property
    def value(self) -> int:
        return math.prod(p**e for p, e in self.pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.pairs)


@dataclass(frozen=True)
class OrderProfile:
    modulus: int
    base: int
    order: int
    order_factorization: Factorization
    iota: int | None = None


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(flags) if f]


def _primes_to_trial_limit() -> list[int]:
    if not _small_primes:
        _small_primes.extend(_sieve(TRIAL_LIMIT))
    return _small_primes


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """Return ``base**exponent % modulus``."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    return pow(base, exponent, modulus)


def _strong_probable_prime(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; exact below 2**64, error below 4**-40 above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 37 * 37:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _WITNESSES_64:
        a %= n
        if a and not _strong_probable_prime(n, d, s, a):
            return False
    if n < 1 << 64:
        return True
    for _ in range(_RANDOM_ROUNDS):
        if not _strong_probable_prime(n, d, s, _rng.randrange(2, n - 1)):
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a non-trivial factor of the odd composite ``n``."""
    while True:
        y = _rng.randrange(1, n)
        c = _rng.randrange(1, n)
        block = 128
        r, q, d = 1, 1, 1
        x = ys = y
        while d == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and d == 1:
                ys = y
                for _ in range(min(block, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                d = math.gcd(q, n)
                k += block
            r *= 2
        if d == n:
            # Backtrack one step at a time through the last block.
            d = 1
            while d == 1:
                ys = (ys * ys + c) % n
                d = math.gcd(abs(x - ys), n)
        if d != n:
            return d


def _split_large(n: int, out: dict[int, int]) -> None:
    stack = [n]
    while stack:
        k = stack.pop()
        if k == 1:
            continue
        if is_prime(k):
            out[k] = out.get(k, 0) + 1
            continue
        r = math.isqrt(k)
        if r * r == k:
            stack += [r, r]
            continue
        d = _pollard_brent(k)
        stack += [d, k // d]


@lru_cache(maxsize=1 << 16)
def _factor_uncached(n: int) -> Factorization:
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1 and not (n > 1 << 40 and is_prime(n)):
        for p in _primes_to_trial_limit():
            if p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out[p] = e
    if n > 1:
        # No factor up to TRIAL_LIMIT remains, so anything below its square is prime.
        if n < TRIAL_LIMIT * TRIAL_LIMIT:
            out[n] = out.get(n, 0) + 1
        else:
            _split_large(n, out)
    return Factorization.from_dict(out)


def factor(n: int) -> Factorization:
    """Factor ``n >= 1``. Trial division to 10**6, then Pollard rho with Brent cycling."""
    if n < 1:
        raise ValueError("factor() requires n >= 1")
    if n == 1:
        return Factorization()
    cache = factor_cache.get()
    if cache is not None:
        hit = cache.get(n)
        if hit is not None:
            return hit
    f = _factor_uncached(n)
    if cache is not None:
        cache.put(n, f)
    return f


def divisors(f: Factorization) -> list[int]:
    """All positive divisors of ``f.value``, ascending."""
    divs = [1]
    for p, e in f:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def valuation(n: int, p: int) -> int:
    """Largest ``j`` with ``p**j | n`` (n > 0)."""
    j = 0
    while n % p == 0:
        n //= p
        j += 1
    return j


def ceil_log(base: int, num: int, den: int = 1) -> int:
    """Exact ``ceil(log_base(num / den))`` for positive num, den and base >= 2.

    It is the unique integer ``k`` with ``base**(k-1) < num/den <= base**k``.
    """
    if num <= 0 or den <= 0 or base < 2:
        raise ValueError("ceil_log needs positive arguments and base >= 2")
    k = 0
    if num > den:
        power = 1
        while power * den < num:
            power *= base
            k += 1
        return k
    # num/den <= 1: walk downward while base**(k-1) still reaches num/den.
    power = 1
    while num * power * base <= den:
        power *= base
        k -= 1
    return k


def _group_exponent(f: Factorization) -> Factorization:
    """Factorization of the Carmichael-style exponent lcm(p**(e-1) * (p-1))."""
    acc: dict[int, int] = {}
    for p, e in f:
        parts = dict(factor(p - 1).pairs) if p > 2 else {}
        if e > 1:
            parts[p] = parts.get(p, 0) + e - 1
        for q, k in parts.items():
            acc[q] = max(acc.get(q, 0), k)
    return Factorization.from_dict(acc)


def _order_from(g: int, m: int, f: Factorization) -> tuple[int, Factorization]:
    bound = _group_exponent(f)
    order = bound.value
    reduced: dict[int, int] = {}
    for q, k in bound:
        e = k
        while e > 0 and pow(g, order // q, m) == 1:
            order //= q
            e -= 1
        if e:
            reduced[q] = e
    return order, Factorization.from_dict(reduced)


@lru_cache(maxsize=1 << 18)
def order(g: int, m: int) -> int:
    """Multiplicative order of ``g`` modulo ``m`` (1 when m == 1)."""
    if m == 1:
        return 1
    if math.gcd(g, m) != 1:
        raise NotCoprime(f"gcd({g}, {m}) = {math.gcd(g, m)}")
    return _order_from(g % m, m, factor(m))[0]


def multiplicative_order(g: int, m: int) -> OrderProfile:
    """Order of ``g`` in ``U(Z_m)`` by group-exponent reduction, with its factorization.

    ``iota`` is filled in when ``m`` is an odd prime.
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return OrderProfile(1, g, 1, Factorization())
    if math.gcd(g, m) != 1:
        raise NotCoprime(f"gcd({g}, {m}) = {math.gcd(g, m)}")
    k, kf = _order_from(g % m, m, factor(m))
    io = iota(g, m) if m % 2 == 1 and is_prime(m) else None
    return OrderProfile(m, g, k, kf, io)


def iota(g: int, p: int) -> int:
    """Largest ``l`` with ``o_g(p**l) == o_g(p)``."""
    if not is_prime(p) or p == 2:
        raise NotPrime(f"{p} is not an odd prime")
    if g % p == 0:
        raise NotCoprime(f"{p} divides {g}")
    base = order(g, p)
    l, pk = 1, p * p
    # o_g(p**l) is non-decreasing in l, so the first failure ends the run.
    while pow(g, base, pk) == 1:
        l += 1
        pk *= p
    return l


def order_of_power_product(g: int, prime_powers: Iterable[tuple[int, int]]) -> int:
    """``o_g(prod p_i**k_i)`` via the closed form over the single-prime orders.

    Pairs with ``k_i == 0`` are dropped: they do not divide the product, and
    keeping their orders inside the lcm would overstate the result.
    """
    pairs = [(p, k) for p, k in prime_powers if k > 0]
    if len({p for p, _ in pairs}) != len(pairs):
        raise ValueError("primes must be distinct")
    for p, _ in pairs:
        if math.gcd(p, g) != 1:
            raise NotCoprime(f"{p} divides {g}")
    if not pairs:
        return 1
    base = lcm(order(g, p) for p, _ in pairs)
    result = base
    for p, k in pairs:
        extra = k - valuation(base, p) - iota(g, p)
        if extra > 0:
            result *= p**extra
    return result


def is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n
