"""Append-only JSON-lines store of factorizations, so long sweeps can resume."""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

from .arith import Factorization, is_prime

logger = logging.getLogger(__name__)


def encode_entry(n: int, f: Factorization) -> str:
    return json.dumps({"value": str(n), "factorization": [[str(p), e] for p, e in f]})


def decode_entry(line: str) -> tuple[int, Factorization]:
    """Parse one line; raises ValueError unless it is a consistent prime factorization."""
    obj = json.loads(line)
    n = int(obj["value"])
    pairs = tuple((int(p), int(e)) for p, e in obj["factorization"])
    f = Factorization(pairs)
    if f.value != n or not all(is_prime(p) for p in f.primes):
        raise ValueError(f"entry for {n} does not multiply out")
    return n, f


class FactorCache:
    """In-memory map backed by an append-only file.

    Lines that fail to parse or whose primes do not multiply back to the value
    are skipped on load.  Each new entry is written with a single ``write``
    on an O_APPEND descriptor.
    """

    def __init__(self, path: str | os.PathLike[str]):
        self.path = Path(path)
        self._data: dict[int, Factorization] = {}
        self.skipped = 0
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    try:
                        n, f = decode_entry(line)
                    except (ValueError, KeyError, TypeError):
                        self.skipped += 1
                        continue
                    self._data[n] = f
        if self.skipped:
            logger.warning("skipped %d bad cache lines in %s", self.skipped, self.path)

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, n: int) -> bool:
        return n in self._data

    def get(self, n: int) -> Factorization | None:
        return self._data.get(n)

    def put(self, n: int, f: Factorization) -> None:
        if n in self._data or n < 2:
            return
        self._data[n] = f
        data = (encode_entry(n, f) + "\n").encode()
        fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        try:
            os.write(fd, data)
        finally:
            os.close(fd)
