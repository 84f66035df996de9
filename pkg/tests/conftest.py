"""Independent oracles shared by the test modules.

Nothing here imports the package's enumerators or order code, so agreement
with them is a real cross-check.
"""

import math
import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def naive_order(g, m):
    if m == 1:
        return 1
    x, k = g % m, 1
    while x != 1:
        x = x * g % m
        k += 1
    return k


def brute_cycles(g, m):
    """Set of frozensets of cycle points by walking every window integer forward."""
    w = m // (g - 1)
    out = set()
    for x0 in range(1, w + 1):
        x, pts = x0, [x0]
        for _ in range(w + 1):
            if x % g == 0:
                x //= g
            elif (x + m) % g == 0:
                x = (x + m) // g
            else:
                break
            if x == x0:
                out.add(frozenset(pts))
                break
            pts.append(x)
    return out


def naive_factor(n):
    f, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            f[p] = f.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        f[n] = f.get(n, 0) + 1
    return f


def gcd_all(xs):
    return math.gcd(*xs)


_criteria: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n, title = mark.args
    status = "PASS" if rep.passed else "FAIL"
    _criteria[n] = (status, title, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, title, secs = _criteria[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {title}  ({secs:.1f} s)")
