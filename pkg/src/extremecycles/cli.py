"""Command-line front end.

Every integer in JSON output is a decimal string.  Digit words are read left
to right as k_0 k_1 ... k_{n-1}, so ``1110`` means k_0 = k_1 = k_2 = 1 and
k_3 = 0.

Exit codes: 0 found / success, 1 complete / nothing found, 2 internal error,
64 usage error, 69 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass
from typing import Any, Callable

from . import __version__, arith, search
from .cache import FactorCache
from .certificates import certify
from .cycles import (
    DEFAULT_LEAF_THRESHOLD,
    DEFAULT_SCAN_CEILING,
    Classification,
    ExtremeCycle,
    Instance,
    Verdict,
    classify,
    enumerate_cycles,
)
from .errors import ExtremeCycleError, ResourceLimit

EXIT_FOUND = 0
EXIT_COMPLETE = 1
EXIT_ERROR = 2
EXIT_USAGE = 64
EXIT_RESOURCE = 69

log = logging.getLogger("extremecycles")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    scan_ceiling: int = DEFAULT_SCAN_CEILING
    leaf_threshold: int = DEFAULT_LEAF_THRESHOLD
    classify_budget: int = 10**6
    cache_path: str | None = None
    output_format: str = "json"
    random_seed: int = 0
    threads: int = 1
    method: str = "refine"

    def __post_init__(self) -> None:
        for name in ("scan_ceiling", "leaf_threshold", "classify_budget", "threads"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")


def _s(n: int | None) -> str | None:
    return None if n is None else str(n)


def _cycle_json(c: ExtremeCycle, order: int | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "points": [str(x) for x in c.points],
        "digits": c.word,
        "length": str(c.length),
        "gcd": str(c.gcd),
    }
    if order is not None:
        out["length_equals_order"] = c.length == order
    return out


def _factor_json(f: arith.Factorization) -> list[list[str]]:
    return [[str(p), str(e)] for p, e in f]


def _record_json(g: int, r: search.PrimitiveRecord) -> dict[str, Any]:
    return {
        "g": str(g),
        "m": str(r.m),
        "construction": r.construction.value,
        "verdict": "primitive",
        "order": str(r.order),
        "factorization": _factor_json(r.factorization),
        "witnesses": [_cycle_json(c) for c in r.cycles],
    }


def _jsonable(v: Any) -> Any:
    if isinstance(v, bool) or v is None or isinstance(v, float):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return [_jsonable(x) for x in items]
    return str(v)


def _order_if_unit(g: int, m: int) -> int | None:
    return arith.order(g, m) if math.gcd(g, m) == 1 else None


def _classification_report(g: int, m: int, cls: Classification) -> dict[str, Any]:
    o = _order_if_unit(g, m)
    return {
        "g": str(g),
        "m": str(m),
        "rule": cls.method,
        "verdict": cls.verdict.value,
        "primitive": cls.primitive,
        "witness_divisor": _s(cls.witness_divisor),
        "exhaustive": cls.exhaustive,
        "order": _s(o),
        "witnesses": [_cycle_json(c, o) for c in cls.cycles],
    }


# Each handler returns (report, exit_code).
Handler = Callable[[argparse.Namespace, RunConfig], tuple[dict[str, Any], int]]


def cmd_cycles(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    inst = Instance(args.g, args.m)
    kw = {"leaf_threshold": cfg.leaf_threshold} if cfg.method == "refine" else {"scan_ceiling": cfg.scan_ceiling}
    cycles = enumerate_cycles(inst, cfg.method, **kw)
    o = _order_if_unit(args.g, args.m)
    report = {
        "g": str(args.g),
        "m": str(args.m),
        "rule": cfg.method,
        "verdict": (Verdict.INCOMPLETE if cycles else Verdict.COMPLETE).value,
        "order": _s(o),
        "witnesses": [_cycle_json(c, o) for c in cycles],
    }
    return report, EXIT_FOUND if cycles else EXIT_COMPLETE


def cmd_classify(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    cls = classify(
        Instance(args.g, args.m),
        method=cfg.method,
        scan_ceiling=cfg.scan_ceiling,
        leaf_threshold=cfg.leaf_threshold,
    )
    code = EXIT_COMPLETE if cls.verdict is Verdict.COMPLETE else EXIT_FOUND
    return _classification_report(args.g, args.m, cls), code


def cmd_certify(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    certs = certify(args.g, args.m)
    verdicts = sorted({c.verdict.value for c in certs})
    report = {
        "g": str(args.g),
        "m": str(args.m),
        "rule": [c.rule for c in certs],
        "verdict": verdicts[0] if len(verdicts) == 1 else ("inconclusive" if not verdicts else verdicts),
        "witnesses": [
            {"rule": c.rule, "verdict": c.verdict.value, "witness": _jsonable(dict(c.witness))} for c in certs
        ],
    }
    return report, EXIT_FOUND if certs else EXIT_COMPLETE


def cmd_order(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    prof = arith.multiplicative_order(args.g, args.m)
    report = {
        "g": str(args.g),
        "m": str(args.m),
        "rule": "order",
        "verdict": str(prof.order),
        "order": str(prof.order),
        "order_factorization": _factor_json(prof.order_factorization),
        "modulus_factorization": _factor_json(arith.factor(args.m)),
        "iota": _s(prof.iota),
        "witnesses": [],
    }
    return report, EXIT_FOUND


def cmd_primitives(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    recs = search.scan_primitives(args.g, args.max, threads=cfg.threads, budget=cfg.classify_budget)
    report = {
        "g": str(args.g),
        "m": str(args.max),
        "construction": search.Construction.SCAN.value,
        "verdict": "found" if recs else "none",
        "primitives": [str(r.m) for r in recs],
        "witnesses": [_record_json(args.g, r) for r in recs],
    }
    return report, EXIT_FOUND if recs else EXIT_COMPLETE


def cmd_repunit(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    r = search.repunit(args.g)
    report = _record_json(args.g, r)
    return report, EXIT_FOUND


def cmd_construct(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    if args.digits is not None:
        m, cycle = search.construct_from_digits(args.g, args.digits)
        cls = classify(Instance(args.g, m), leaf_threshold=cfg.leaf_threshold)
        report = {
            "g": str(args.g),
            "m": str(m),
            "construction": search.Construction.DIGIT_WORD.value,
            "digits": args.digits,
            "verdict": "primitive" if cls.primitive else cls.verdict.value,
            "order": str(arith.order(args.g, m)),
            "witnesses": [_cycle_json(cycle)],
        }
        return report, EXIT_FOUND
    m, k = search.construct_quotient(args.g, args.q)
    cls = classify(Instance(args.g, m), leaf_threshold=cfg.leaf_threshold)
    report = {
        "g": str(args.g),
        "m": str(m),
        "construction": search.Construction.QUOTIENT.value,
        "q": str(args.q),
        "verdict": "primitive" if cls.primitive else cls.verdict.value,
        "order": str(k),
        "witnesses": [_cycle_json(c) for c in cls.cycles[:16]],
    }
    return report, EXIT_FOUND if cls.verdict is Verdict.INCOMPLETE else EXIT_COMPLETE


def cmd_sweep(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    if args.known is None:
        recs = search.primitives_of_order(args.g, args.n)
    else:
        known = {int(x) for x in args.known.split(",") if x.strip()}
        recs = search.divisor_sweep(args.g, args.n, known)
    report = {
        "g": str(args.g),
        "m": str(args.g**args.n - 1),
        "n": str(args.n),
        "construction": search.Construction.DIVISOR_SWEEP.value,
        "verdict": "found" if recs else "none",
        "primitives": [str(r.m) for r in recs],
        "witnesses": [_record_json(args.g, r) for r in recs],
    }
    return report, EXIT_FOUND if recs else EXIT_COMPLETE


def cmd_conjecture(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict[str, Any], int]:
    rep = search.conjecture_scan(args.g, max_classify=cfg.classify_budget, max_seconds=args.seconds)
    report = {
        "g": str(args.g),
        "m": str(rep.bound),
        "rule": "conjecture-scan",
        "verdict": rep.status.value,
        "checked_up_to": str(rep.checked_up_to),
        "classify_calls": str(rep.classify_calls),
        "certificate_hits": str(rep.certificate_hits),
        "witnesses": [] if rep.counterexample is None else [str(rep.counterexample)],
    }
    code = {
        search.ConjectureStatus.VERIFIED: EXIT_FOUND,
        search.ConjectureStatus.COUNTEREXAMPLE: EXIT_COMPLETE,
        search.ConjectureStatus.BUDGET_EXHAUSTED: EXIT_RESOURCE,
    }[rep.status]
    return report, code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    # Subcommand copies use SUPPRESS so they only override when given.
    def kw(v: Any) -> dict[str, Any]:
        return {"default": argparse.SUPPRESS if suppress else v}

    p.add_argument("--format", choices=("json", "csv", "text"), **kw("json"))
    p.add_argument("--cache", metavar="PATH", **kw(None), help="JSON-lines factorization cache")
    p.add_argument("--seed", type=int, **kw(0))
    p.add_argument("--threads", type=int, **kw(1))
    p.add_argument("--budget", type=int, **kw(10**6), help="classify-call budget for sweeps")
    p.add_argument("--method", choices=("refine", "scan"), **kw("refine"))
    p.add_argument("--scan-ceiling", type=int, **kw(DEFAULT_SCAN_CEILING))
    p.add_argument("--leaf-threshold", type=int, **kw(DEFAULT_LEAF_THRESHOLD))
    p.add_argument("-v", "--verbose", action="count", **kw(0))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="extremecycles", description="Extreme cycles for the digit set {0, m}.")
    parser.add_argument("--version", action="version", version=__version__)
    _global_options(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Handler, help: str, *, m: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("--g", type=int, required=True)
        if m:
            p.add_argument("--m", type=int, required=True)
        p.set_defaults(handler=fn)
        return p

    add("cycles", cmd_cycles, "list every non-trivial extreme cycle")
    add("classify", cmd_classify, "complete / incomplete / primitive")
    add("certify", cmd_certify, "theorem certificates without enumeration")
    add("order", cmd_order, "multiplicative order of g modulo m")
    p = add("primitives", cmd_primitives, "all primitive numbers up to --max", m=False)
    p.add_argument("--max", type=int, required=True)
    add("repunit", cmd_repunit, "the base-g repunit and its cycle", m=False)
    p = add("construct", cmd_construct, "build an incomplete number", m=False)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--digits", help="0/1 word read as k_0 k_1 ... k_{n-1}")
    how.add_argument("--q", type=int, help="exponent for (g**q - 1)/(g - 1)")
    p = add("sweep", cmd_sweep, "primitive divisors of g**n - 1", m=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--known", help="comma-separated known primitives (default: sweep proper divisors of n)")
    p = add("conjecture", cmd_conjecture, "look for a primitive below the repunit", m=False)
    p.add_argument("--seconds", type=float, default=None, help="wall-time cap")
    return parser


def _flatten(report: dict[str, Any]) -> tuple[list[str], list[list[str]]]:
    scalars = {k: v for k, v in report.items() if not isinstance(v, (list, dict))}
    rows = []
    for w in report.get("witnesses") or [None]:
        row = dict(scalars)
        if isinstance(w, dict):
            for k, v in w.items():
                if k in ("points", "witnesses"):
                    continue
                row[f"w_{k}"] = v if not isinstance(v, (list, dict)) else json.dumps(v)
            if "points" in w:
                row["w_points"] = " ".join(w["points"])
            elif w.get("witnesses"):
                row["w_points"] = " ".join(w["witnesses"][0]["points"])
        elif w is not None:
            row["w"] = w
        rows.append(row)
    header = list(dict.fromkeys(k for r in rows for k in r))
    return header, [[("" if r.get(k) is None else str(r.get(k))) for k in header] for r in rows]


def render(report: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    if fmt == "csv":
        header, rows = _flatten(report)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = []
    for k, v in report.items():
        if k == "witnesses":
            continue
        if isinstance(v, list):
            v = ", ".join(map(str, v)) if v and not isinstance(v[0], list) else json.dumps(v)
        lines.append(f"{k}: {v}")
    for i, w in enumerate(report.get("witnesses", [])):
        if isinstance(w, dict) and "points" in w:
            lines.append(f"cycle {i}: length {w['length']} gcd {w['gcd']} digits {w['digits']}")
            lines.append("  " + " ".join(w["points"]))
        elif isinstance(w, dict) and "construction" in w:
            lines.append(f"{w['m']}  order {w['order']}  {' * '.join(p if e == '1' else p + '^' + e for p, e in w['factorization'])}")
        else:
            lines.append(f"witness {i}: {json.dumps(w)}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = RunConfig(
            scan_ceiling=args.scan_ceiling,
            leaf_threshold=args.leaf_threshold,
            classify_budget=args.budget,
            cache_path=args.cache,
            output_format=args.format,
            random_seed=args.seed,
            threads=args.threads,
            method=args.method,
        )
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    arith.seed(cfg.random_seed)
    token = arith.factor_cache.set(FactorCache(cfg.cache_path) if cfg.cache_path else None)
    t0 = time.perf_counter()
    try:
        report, code = args.handler(args, cfg)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ExtremeCycleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        arith.factor_cache.reset(token)
    report["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    print(render(report, cfg.output_format))
    return code


if __name__ == "__main__":
    sys.exit(main())
