"""Small exact-combinatorics helpers shared by the engine and the bound rules."""

from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=None)
def double_factorial(k: int) -> int:
    """k!! for odd k >= -1, with the convention (-1)!! = 1."""
    if k < -1 or k % 2 == 0:
        raise ValueError(f"double factorial is used here for odd k >= -1, got {k}")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def partitions(d: int, max_part: int | None = None):
    """Yield the partitions of d into parts >= 1, as weakly decreasing tuples."""
    if d < 0:
        raise ValueError(f"cannot partition a negative integer, got {d}")
    if d == 0:
        yield ()
        return
    if max_part is None or max_part > d:
        max_part = d
    for first in range(max_part, 0, -1):
        for rest in partitions(d - first, first):
            yield (first,) + rest
