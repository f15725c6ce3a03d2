"""Outcome of each acceptance criterion, printed by the terminal summary hook."""

import functools

RESULTS: dict[int, tuple[bool, str]] = {}


def criterion(n: int, title: str):
    def deco(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            RESULTS[n] = (False, title)
            fn(*args, **kwargs)
            RESULTS[n] = (True, title)
            print(f"PASS {n:2d} {title}")
        return run
    return deco
