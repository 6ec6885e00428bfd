import random
from fractions import Fraction

import numpy as np

from lojex.univariate import (
    count_real_roots,
    isolate_real_root,
    strip_root_at_zero,
    ueval,
    ugcd,
    utrim,
)


def _poly(*coeffs):
    return utrim([Fraction(c) for c in coeffs])


def test_count_real_roots_known():
    assert count_real_roots(_poly(-1, 0, 1)) == 2       # x^2 - 1
    assert count_real_roots(_poly(1, 0, 1)) == 0        # x^2 + 1
    assert count_real_roots(_poly(0, 1)) == 1           # x
    assert count_real_roots(_poly(-2, 0, 0, 1)) == 1    # x^3 - 2
    assert count_real_roots(_poly(1, -2, 1)) == 1       # (x-1)^2: distinct roots
    assert count_real_roots(_poly(6, -5, 1)) == 2       # (x-2)(x-3)


def test_count_matches_numpy_roots_random():
    rng = random.Random(13)
    for _ in range(200):
        deg = rng.randint(1, 7)
        coeffs = [rng.randint(-6, 6) for _ in range(deg + 1)]
        if coeffs[-1] == 0:
            coeffs[-1] = 1
        p = _poly(*coeffs)
        roots = np.roots([float(c) for c in reversed(p)])
        # count distinct real roots numerically, clustering conjugate noise
        real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9)
        distinct = 0
        prev = None
        for r in real:
            if prev is None or abs(r - prev) > 1e-6:
                distinct += 1
            prev = r
        # only trust the numeric comparison when roots are well separated
        pairwise = [abs(a - b) for a in real for b in real if a < b]
        mindist = min(pairwise, default=1.0)
        imag_near = [abs(r.imag) for r in roots if 1e-9 <= abs(r.imag) < 1e-5]
        if mindist > 1e-5 and not imag_near:
            assert count_real_roots(p) == distinct, (p, roots)


def test_gcd_and_strip():
    # gcd of (x^2-1)(x+2) and (x^2-1)(x-3) is x^2-1 up to scale
    a = _poly(-2, -1, 2, 1)
    b = _poly(3, -1, -3, 1)
    g = ugcd(a, b)
    assert len(g) == 3 and g[-1] == 1
    assert ueval(g, Fraction(1)) == 0 and ueval(g, Fraction(-1)) == 0
    assert strip_root_at_zero(_poly(0, 0, 2, 1)) == _poly(2, 1)


def test_isolate_real_root():
    p = _poly(-2, 0, 1)  # x^2 - 2
    r = isolate_real_root(p)
    assert r is not None
    assert abs(abs(float(r)) - 2**0.5) < 1e-9
    assert isolate_real_root(_poly(1, 0, 1)) is None
