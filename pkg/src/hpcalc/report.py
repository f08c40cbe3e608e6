"""Check records shared by the verification routines and the CLI."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable


@dataclass
class Check:
    name: str
    anchor: str
    status: str  # "pass" | "fail" | "error"
    witness: str = ""
    millis: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        return asdict(self)


def run_check(name: str, anchor: str, fn: Callable[[], tuple[bool, object]]) -> Check:
    """Time ``fn`` (returning ``(ok, witness)``); exceptions become ``error`` records."""
    start = time.perf_counter()
    try:
        ok, witness = fn()
        status = "pass" if ok else "fail"
        witness = "" if witness is None else str(witness)
    except Exception as exc:  # a failing check must not abort the rest
        status, witness = "error", f"{type(exc).__name__}: {exc}"
    return Check(name, anchor, status, witness, round((time.perf_counter() - start) * 1000, 3))


def first_failure(items: Iterable, predicate: Callable[[object], bool]):
    """``(True, None)`` if every item satisfies ``predicate``, else ``(False, item)``."""
    for item in items:
        if not predicate(item):
            return False, item
    return True, None


def all_passed(checks: Iterable[Check]) -> bool:
    return all(c.passed for c in checks)
