"""Shared record of acceptance outcomes, printed once at the end of a run."""
import time
from contextlib import contextmanager

RESULTS: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit_s: float):
    """Time a criterion body, record one PASS/FAIL line, re-raise failures.

    The runtime limit is itself part of the criterion.
    """
    start = time.perf_counter()
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        RESULTS.append(f"criterion {number}: FAIL  {title} ({elapsed:.2f} s; {msg[:120]})")
        print(RESULTS[-1])
        raise
    elapsed = time.perf_counter() - start
    note = detail.get("note", "")
    if elapsed >= limit_s:
        RESULTS.append(f"criterion {number}: FAIL  {title} ({elapsed:.2f} s exceeds {limit_s:g} s limit)")
        print(RESULTS[-1])
        raise AssertionError(f"criterion {number} took {elapsed:.2f} s, limit {limit_s:g} s")
    RESULTS.append(f"criterion {number}: PASS  {title} ({elapsed:.2f} s{'; ' + note if note else ''})")
    print(RESULTS[-1])
