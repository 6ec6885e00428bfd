"""Exact univariate polynomials over the rationals: gcd, Sturm counts, roots.

Polynomials are dense coefficient lists, low degree first, with Fraction
entries; the zero polynomial is [].  Only what the torus-criticality
reduction needs is implemented.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

UPoly = list[Fraction]


def utrim(p: Sequence[Fraction]) -> UPoly:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def udeg(p: UPoly) -> int:
    return len(p) - 1  # -1 for the zero polynomial


def uderiv(p: UPoly) -> UPoly:
    return utrim([i * c for i, c in enumerate(p)][1:])


def ueval(p: UPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def udivmod(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and utrim(a):
        a = utrim(a)
        if len(a) < len(b):
            break
        coeff = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = coeff
        for i, c in enumerate(b):
            a[shift + i] -= coeff * c
        a.pop()
    return utrim(q), utrim(a)


def ugcd(a: UPoly, b: UPoly) -> UPoly:
    a, b = utrim(a), utrim(b)
    while b:
        _, r = udivmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def strip_root_at_zero(p: UPoly) -> UPoly:
    """Remove all factors of x (so a surviving root is nonzero)."""
    p = utrim(p)
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return p[k:]


def sturm_chain(p: UPoly) -> list[UPoly]:
    chain = [utrim(p), uderiv(p)]
    while chain[-1]:
        _, r = udivmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _sign_changes(values: list[int]) -> int:
    vals = [v for v in values if v != 0]
    return sum(1 for a, b in zip(vals, vals[1:]) if a * b < 0)


def count_real_roots(p: UPoly) -> int:
    """Number of distinct real roots of p (Sturm over the whole line)."""
    p = utrim(p)
    if udeg(p) < 1:
        return 0
    chain = sturm_chain(p)
    at_minus = [
        (1 if c[-1] > 0 else -1) * (1 if (len(c) - 1) % 2 == 0 else -1) for c in chain
    ]
    at_plus = [1 if c[-1] > 0 else -1 for c in chain]
    return _sign_changes(at_minus) - _sign_changes(at_plus)


def count_roots_in(p: UPoly, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in the half-open interval (lo, hi]."""
    chain = sturm_chain(p)
    lo_signs = []
    hi_signs = []
    for c in chain:
        vl, vh = ueval(c, lo), ueval(c, hi)
        lo_signs.append(0 if vl == 0 else (1 if vl > 0 else -1))
        hi_signs.append(0 if vh == 0 else (1 if vh > 0 else -1))
    return _sign_changes(lo_signs) - _sign_changes(hi_signs)


def cauchy_root_bound(p: UPoly) -> Fraction:
    p = utrim(p)
    lead = abs(p[-1])
    return Fraction(1) + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_root(p: UPoly) -> Fraction | None:
    """Midpoint of a small isolating interval of some real root, or None.

    Bisection on Sturm counts; the returned rational approximates a root to
    within 2^-40 of the isolating interval width and is meant for reporting
    witnesses, not for exact decisions.
    """
    p = utrim(p)
    if count_real_roots(p) == 0:
        return None
    bound = cauchy_root_bound(p)
    lo, hi = -bound, bound
    if count_roots_in(p, lo, hi) == 0:  # only a root at exactly -bound: nudge
        lo -= 1
    for _ in range(60):
        if hi - lo < Fraction(1, 2**40):
            break
        mid = (lo + hi) / 2
        if ueval(p, mid) == 0:
            return mid
        if count_roots_in(p, lo, mid) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2
