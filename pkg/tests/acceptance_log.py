"""Shared record of acceptance outcomes, printed by the terminal-summary hook."""

from contextlib import contextmanager

RESULTS: dict[int, tuple[bool, str]] = {}


@contextmanager
def criterion(number: int, title: str):
    RESULTS[number] = (False, title)
    try:
        yield
    except BaseException:
        print(f"criterion {number} FAIL: {title}")
        raise
    RESULTS[number] = (True, title)
    print(f"criterion {number} PASS: {title}")
