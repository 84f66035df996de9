"""Extreme cycles for the digit set {0, m} at an even scale g.

A cycle point is a positive integer ``x <= m/(g-1)`` whose forward orbit under
``x -> x/g`` (when g | x) or ``x -> (x+m)/g`` (when x = -m mod g) returns to x.
Two independent enumerators are provided:

* :func:`enumerate_cycles_scan` walks the whole window ``[1, m // (g-1)]``;
* :func:`enumerate_cycles_refine` refines the attractor's covering intervals
  and only inspects integers that survive.

Both return cycles in canonical rotation (smallest point first), sorted by
that smallest point.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import arith
from .errors import DivisibilityViolation, NotCoprime, OutOfRange, ResourceLimit

DEFAULT_SCAN_CEILING = 10**8
DEFAULT_LEAF_THRESHOLD = 4


class Verdict(str, enum.Enum):
    COMPLETE = "complete"
    INCOMPLETE = "incomplete"
    NOT_PRIMITIVE = "not-primitive"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Instance:
    g: int
    m: int

    def __post_init__(self) -> None:
        if self.g < 4 or self.g % 2:
            raise ValueError(f"scale g must be even and >= 4, got {self.g}")
        if self.m < 1 or self.m % 2 == 0:
            raise ValueError(f"m must be odd and >= 1, got {self.m}")

    @property
    def window(self) -> int:
        """Largest integer that can be a cycle point."""
        return self.m // (self.g - 1)


@dataclass(frozen=True)
class ExtremeCycle:
    """Points ``x_0..x_{r-1}`` and bits ``k_i`` with ``x_{i+1} = (x_i + m*k_i)/g``."""

    points: tuple[int, ...]
    digits: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.points)

    @property
    def gcd(self) -> int:
        return reduce(math.gcd, self.points)

    @property
    def word(self) -> str:
        return "".join(map(str, self.digits))

    def scaled(self, k: int) -> "ExtremeCycle":
        """The cycle for digit ``k*m`` obtained by multiplying every point by odd k."""
        return ExtremeCycle(tuple(k * x for x in self.points), self.digits)


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    cycles: tuple[ExtremeCycle, ...] = ()
    primitive: bool = False
    witness_divisor: int | None = None
    # False when the verdict came from a divisor shortcut and cycles is only a sample.
    exhaustive: bool = True
    method: str = "refine"


def successor(inst: Instance, x: int) -> tuple[int, int] | None:
    """Next cycle point and the bit used, or None if x has no integer successor."""
    if x < 1 or x > inst.window:
        raise OutOfRange(f"{x} is outside [1, {inst.window}]")
    g, m = inst.g, inst.m
    r = x % g
    if r == 0:
        return x // g, 0
    if (r + m) % g == 0:
        return (x + m) // g, 1
    return None


def _canonical(points: list[int], digits: list[int]) -> ExtremeCycle:
    i = points.index(min(points))
    return ExtremeCycle(tuple(points[i:] + points[:i]), tuple(digits[i:] + digits[:i]))


def _cycles_from_points(inst: Instance, cycle_points: Sequence[int]) -> list[ExtremeCycle]:
    """Split a set of cycle points into canonical cycles."""
    remaining = set(cycle_points)
    cycles = []
    for start in sorted(cycle_points):
        if start not in remaining:
            continue
        pts, bits = [], []
        x = start
        while True:
            remaining.discard(x)
            nxt = successor(inst, x)
            assert nxt is not None, f"{x} is not a cycle point"
            pts.append(x)
            bits.append(nxt[1])
            x = nxt[0]
            if x == start:
                break
        cycles.append(_canonical(pts, bits))
    cycles.sort(key=lambda c: c.points[0])
    return cycles


def enumerate_cycles_scan(inst: Instance, *, scan_ceiling: int = DEFAULT_SCAN_CEILING) -> list[ExtremeCycle]:
    """Every non-trivial cycle, by exhaustive pruning of the successor graph.

    Only ``x = 0`` or ``x = -m (mod g)`` have a successor, and the successor
    map is injective on the window (two preimages differ by m > window), so a
    point lies on a cycle iff its forward orbit never dies.  Nodes whose
    successor is dead are removed until the live set is closed under the map.
    """
    g, m = inst.g, inst.m
    w = inst.window
    if w > scan_ceiling:
        raise ResourceLimit(f"window {w} exceeds scan ceiling {scan_ceiling}; use refine")
    if w == 0:
        return []
    r = (-m) % g
    zeros = np.arange(g, w + 1, g, dtype=np.int64)
    ones = np.arange(r, w + 1, g, dtype=np.int64)
    live = np.concatenate([zeros, ones])
    nxt = np.concatenate([zeros // g, (ones + m) // g])
    order = np.argsort(live, kind="stable")
    live, nxt = live[order], nxt[order]
    while live.size:
        pos = np.searchsorted(live, nxt)
        pos[pos == live.size] = 0
        keep = live[pos] == nxt
        if keep.all():
            break
        live, nxt = live[keep], nxt[keep]
    return _cycles_from_points(inst, live.tolist())


def _orbit_status(inst: Instance, x: int, status: dict[int, bool]) -> bool:
    """Whether x is a cycle point; memoizes every node touched in ``status``."""
    path = []
    y = x
    while True:
        known = status.get(y)
        if known is not None:
            result = known
            break
        path.append(y)
        nxt = successor(inst, y)
        if nxt is None:
            result = False
            break
        y = nxt[0]
        if y == x:
            result = True
            break
    # Injectivity: reaching a known cycle point means x is on that cycle too.
    for p in path:
        status[p] = result
    return result


def enumerate_cycles_refine(
    inst: Instance, *, leaf_threshold: int = DEFAULT_LEAF_THRESHOLD
) -> list[ExtremeCycle]:
    """Every non-trivial cycle, by branch-and-bound over the attractor's intervals.

    At depth n with bit word value ``s`` the covering interval is
    ``[m*s/g**n, m*(1 + (g-1)*s)/((g-1)*g**n)]``.  Intervals holding no integer
    are dropped; ones holding at most ``leaf_threshold`` integers have each
    integer tested by forward iteration.
    """
    g, m = inst.g, inst.m
    if inst.window == 0:
        return []
    gm1 = g - 1
    status: dict[int, bool] = {}
    found: list[int] = []
    # (s, g**n) pairs; lo = ceil(m*s / gn), hi = floor(m*(1+(g-1)s) / ((g-1) gn))
    stack = [(0, 1)]
    while stack:
        s, gn = stack.pop()
        lo = -((-m * s) // gn)
        hi = (m * (1 + gm1 * s)) // (gm1 * gn)
        if lo == 0:
            lo = 1
        if lo > hi:
            continue
        if hi - lo + 1 <= leaf_threshold:
            for x in range(lo, hi + 1):
                if _orbit_status(inst, x, status):
                    found.append(x)
            continue
        stack.append((s + gn, gn * g))
        stack.append((s, gn * g))
    return _cycles_from_points(inst, found)


def enumerate_cycles(inst: Instance, method: str = "refine", **kwargs) -> list[ExtremeCycle]:
    if method == "refine":
        return enumerate_cycles_refine(inst, **kwargs)
    if method == "scan":
        return enumerate_cycles_scan(inst, **kwargs)
    raise ValueError(f"unknown method {method!r}")


def cycle_point_bound(inst: Instance) -> int:
    """Upper bound ``min_n 2**n * ceil(m / ((g-1) g**n))`` on the number of cycle points."""
    g, m = inst.g, inst.m
    if m % (g - 1) == 0:
        raise DivisibilityViolation(f"{g - 1} divides {m}")
    best = None
    n, two_n, gn = 0, 1, 1
    while best is None or two_n <= best:
        value = two_n * -(-m // ((g - 1) * gn))
        if best is None or value < best:
            best = value
        n += 1
        two_n *= 2
        gn *= g
    return best


def verify_cycle(inst: Instance, candidate: Sequence[int], word: Sequence[int] | str) -> bool:
    """Check the extreme-cycle invariants exactly for the given points and bits."""
    bits = [int(b) for b in word]
    pts = list(candidate)
    g, m = inst.g, inst.m
    if not pts or len(pts) != len(bits) or any(b not in (0, 1) for b in bits):
        return False
    if len(set(pts)) != len(pts):
        return False
    limit = m // (g - 1)
    for i, x in enumerate(pts):
        if not 0 < x <= limit:
            return False
        if (pts[(i + 1) % len(pts)] * g) != x + m * bits[i]:
            return False
    return True


def group_generated(g: int, m: int) -> set[int]:
    """The cyclic subgroup ``{g**j mod m}`` of the units modulo m."""
    if math.gcd(g, m) != 1:
        raise NotCoprime(f"gcd({g}, {m}) = {math.gcd(g, m)}")
    if m == 1:
        return {0}
    out = {1}
    x = g % m
    while x != 1:
        out.add(x)
        x = x * g % m
    return out


def coset_check(inst: Instance, cycle: ExtremeCycle) -> bool:
    """Whether the cycle's points reduce modulo m to the coset ``x_0 * <g>``."""
    g, m = inst.g, inst.m
    if math.gcd(g, m) != 1:
        raise NotCoprime(f"gcd({g}, {m}) = {math.gcd(g, m)}")
    x0 = cycle.points[0]
    if math.gcd(x0, m) != 1:
        return False
    coset = {x0 * h % m for h in group_generated(g, m)}
    return {x % m for x in cycle.points} == coset


def classify(
    inst: Instance,
    *,
    method: str = "refine",
    known_incomplete: Mapping[int, Sequence[ExtremeCycle]] | None = None,
    scan_ceiling: int = DEFAULT_SCAN_CEILING,
    leaf_threshold: int = DEFAULT_LEAF_THRESHOLD,
) -> Classification:
    """Decide complete / incomplete, and primitivity, for ``inst``.

    ``known_incomplete`` maps incomplete numbers to (some of) their cycles; a
    proper divisor found there settles the verdict by odd-multiple scaling
    without any enumeration.
    """
    g, m = inst.g, inst.m
    if m <= g - 2:
        return Classification(Verdict.COMPLETE, method="small-m")
    if known_incomplete:
        for d, cyc in known_incomplete.items():
            if d < m and m % d == 0 and cyc:
                k = m // d
                return Classification(
                    Verdict.INCOMPLETE,
                    tuple(c.scaled(k) for c in cyc),
                    primitive=False,
                    witness_divisor=d,
                    exhaustive=False,
                    method="divisor",
                )
    if method == "refine":
        cycles = enumerate_cycles_refine(inst, leaf_threshold=leaf_threshold)
    else:
        cycles = enumerate_cycles_scan(inst, scan_ceiling=scan_ceiling)
    if not cycles:
        return Classification(Verdict.COMPLETE, method=method)
    witness = None
    for c in cycles:
        k = c.gcd
        if k > 1:
            # k divides m and C/k is a cycle for m/k.
            witness = m // k
            break
    return Classification(
        Verdict.INCOMPLETE,
        tuple(cycles),
        primitive=witness is None,
        witness_divisor=witness,
        method=method,
    )
