"""Normalized volume ratios and growth diagnostics.

The interesting normalizations are

    r       = V(g, n) / (3g-3+n)!          (exact rational),
    root    = (r / (2g)!)^(1/g)            (the per-genus growth base),
    logprof = ln(r) / (g ln g)             (the log-scale growth profile),

whose limiting behaviour is asymptotic and not decidable at desk scale; this
module only reports the sample values and min/max windows.  Ratios stay in
exact arithmetic; floats appear exclusively in ``root`` and ``logprof``,
computed through adaptive-precision logarithms so that even rationals with
millions of bits keep a relative error well below 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable

import mpmath

from .errors import DomainError
from .intersect import ModuliPoint


def _ln_fraction(x: Fraction) -> mpmath.mpf:
    """ln(x) for a positive rational, relative error below 1e-13.

    Both integer logs are evaluated at a working precision that is doubled
    until the cancellation error bound (a few ulps of the larger term) drops
    under the tolerance, so ratios arbitrarily close to 1 stay accurate.
    """
    if x <= 0:
        raise DomainError(f"logarithm needs a positive rational, got {x}")
    num, den = x.numerator, x.denominator
    if num == den:
        return mpmath.mpf(0)
    bits = num.bit_length() + den.bit_length()
    prec = 80 + bits.bit_length()
    while True:
        with mpmath.workprec(prec):
            value = mpmath.log(num) - mpmath.log(den)
            bound = mpmath.mpf(bits + 4) * mpmath.mpf(2) ** (3 - prec)
            if value and bound < abs(value) * mpmath.mpf(1e-13):
                return value
        prec *= 2


def normalized_ratio(g: int, n: int, v: Fraction) -> Fraction:
    """Exact ratio V / (3g-3+n)! for a stable (g, n)."""
    point = ModuliPoint(g, n).require_stable()
    v = Fraction(v)
    if v < 0:
        raise DomainError(f"volume must be non-negative, got {v}")
    return v / factorial(point.dim)


def log_profile(g: int, n: int, v: Fraction) -> float:
    """ln(V / (3g-3+n)!) / (g ln g); needs g >= 2 and a positive volume."""
    ModuliPoint(g, n).require_stable()
    if g < 2:
        raise DomainError(f"the log profile needs g >= 2 (so that log g > 0), got g = {g}")
    v = Fraction(v)
    if v <= 0:
        raise DomainError(f"the log profile needs a positive volume, got {v}")
    r = v / factorial(3 * g - 3 + n)
    ln_r = _ln_fraction(r)
    with mpmath.workprec(96):
        return float(ln_r / (g * mpmath.log(g)))


def growth_root(g: int, r: Fraction) -> float:
    """(r / (2g)!)^(1/g) for g >= 1, via exp(ln(.)/g) at extended precision."""
    if g < 1:
        raise DomainError(f"the growth root needs g >= 1, got g = {g}")
    base = Fraction(r) / factorial(2 * g)
    if base == 0:
        return 0.0
    ln_base = _ln_fraction(base)
    with mpmath.workprec(96):
        return float(mpmath.exp(ln_base / g))


@dataclass(frozen=True)
class RatioPoint:
    """One normalized sample of a volume (exact value or certified bound)."""

    g: int
    n: int
    value_kind: str  # exact | lower | upper
    r: Fraction
    root: float
    logprof: float | None

    @classmethod
    def from_volume(
        cls, g: int, n: int, v: Fraction, value_kind: str = "exact"
    ) -> "RatioPoint":
        if value_kind not in ("exact", "lower", "upper"):
            raise DomainError(f"value_kind must be exact, lower or upper, got {value_kind!r}")
        if g < 1:
            raise DomainError(f"ratio points are tracked for g >= 1, got g = {g}")
        r = normalized_ratio(g, n, v)
        logprof = log_profile(g, n, v) if g >= 2 and r > 0 else None
        return cls(g, n, value_kind, r, growth_root(g, r), logprof)


def root_window(points: Iterable[RatioPoint]) -> tuple[float, float]:
    """Min/max window of the growth roots over a non-empty family of points."""
    pts = list(points)
    if not pts:
        raise DomainError("the growth-root window needs at least one point")
    for p in pts:
        if p.g < 1:
            raise DomainError(f"the growth-root window needs g >= 1, got g = {p.g}")
    roots = [p.root for p in pts]
    return min(roots), max(roots)
