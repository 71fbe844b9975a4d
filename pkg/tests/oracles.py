"""Independent reference computations used only by the tests.

These deliberately avoid the engine's reduction strategies: the genus-0
closed form needs no recursion at all, and the kappa conversion trades all
kappa factors for extra points in a single inclusion-exclusion sweep over
set partitions instead of removing them one at a time.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial


def genus0_psi(exponents) -> Fraction:
    """<tau_{a_1} ... tau_{a_n}>_0 = (n-3)! / prod a_i!  when sum a_i = n - 3."""
    exps = tuple(int(a) for a in exponents)
    n = len(exps)
    if n < 3 or sum(exps) != n - 3:
        return Fraction(0)
    denom = 1
    for a in exps:
        denom *= factorial(a)
    return Fraction(factorial(n - 3), denom)


def set_partitions(items: list):
    """All partitions of a list of labels into non-empty blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [head]] + part[i + 1 :]
        yield part + [[head]]


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _splits(values):
    if not values:
        yield (), (), 1
        return
    groups = sorted(set(values))
    counts = [values.count(v) for v in groups]

    def rec(i):
        if i == len(groups):
            yield [], [], 1
            return
        v, m = groups[i], counts[i]
        for left, right, ways in rec(i + 1):
            for t in range(m + 1):
                binom = 1
                for x in range(t):
                    binom = binom * (m - x) // (x + 1)
                yield [v] * t + left, [v] * (m - t) + right, ways * binom

    for left, right, ways in rec(0):
        yield tuple(left), tuple(right), ways


def virasoro_apply(engine, g, exps, pivot_index) -> Fraction:
    """Apply the constraint pivoting on exps[pivot_index] (must be >= 1).

    The computed family of intersection numbers must satisfy the constraint
    for every admissible pivot, not only the one the engine recurses on, so
    comparing this against the engine's value for several pivots checks the
    compatibility of the whole constraint family.
    """
    exps = tuple(exps)
    pivot = exps[pivot_index]
    if pivot < 1:
        raise ValueError("pivot exponent must be >= 1")
    k = pivot - 1
    rest = exps[:pivot_index] + exps[pivot_index + 1 :]
    n = len(exps)

    total = Fraction(0)
    if 2 * g - 2 + (n - 1) > 0:
        for i, v in enumerate(rest):
            child = list(rest)
            child[i] = k + v
            weight = Fraction(_double_factorial(2 * k + 2 * v + 1), _double_factorial(2 * v - 1))
            total += weight * engine.psi_intersection(g, child)

    half = Fraction(0)
    for b in range(k):
        c = k - 1 - b
        w = _double_factorial(2 * b + 1) * _double_factorial(2 * c + 1)
        if g >= 1 and 2 * (g - 1) - 2 + (n + 1) > 0:
            half += w * engine.psi_intersection(g - 1, rest + (b, c))
        for left, right, ways in _splits(rest):
            for gp in range(g + 1):
                gq = g - gp
                if 2 * gp - 1 + len(left) <= 0 or 2 * gq - 1 + len(right) <= 0:
                    continue
                half += (
                    w
                    * ways
                    * engine.psi_intersection(gp, left + (b,))
                    * engine.psi_intersection(gq, right + (c,))
                )
    total += half / 2
    return total / _double_factorial(2 * k + 3)


def mixed_via_partition_formula(engine, g, n, psi=(), kappa=()) -> Fraction:
    """Evaluate a psi/kappa integral by converting all kappa factors at once.

    Every set partition P of the kappa factors of index >= 1 contributes one
    pure psi integral with |P| extra points, the block B carrying the
    exponent sum(B) + 1, weighted by prod_B (-1)^(|B|-1): a block is anchored
    by its earliest-removed factor and merges happen only at that step, so
    each partition arises exactly once.  The conversion is only valid for
    indices >= 1 (the degree-0 correction is not attached to a point), so
    kappa_0 factors come out as the scalar 2g - 2 + n first.
    """
    labels = []
    scalar = 1
    for j, m in dict(kappa).items():
        if j == 0:
            scalar *= (2 * g - 2 + n) ** m
        else:
            labels.extend([j] * m)
    base = list(psi) + [0] * (n - len(psi))
    total = Fraction(0)
    for part in set_partitions(labels):
        weight = 1
        extra = []
        for block in part:
            weight *= (-1) ** (len(block) - 1)
            extra.append(sum(block) + 1)
        value = engine.psi_intersection(g, base + extra)
        if value:
            total += weight * value
    return scalar * total
