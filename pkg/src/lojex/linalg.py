"""Small exact linear algebra over Fraction, used by the lattice geometry.

Matrices are lists of row tuples/lists; everything is copied before
elimination, nothing is mutated in place from the caller's view.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def dot(a: Sequence, b: Sequence) -> Fraction | int:
    return sum(x * y for x, y in zip(a, b, strict=True))


def primitive(vec: Iterable[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero vector stays zero)."""
    v = tuple(int(x) for x in vec)
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g <= 1:
        return v
    return tuple(x // g for x in v)


def rational_primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (same ray)."""
    lcm = 1
    for x in vec:
        d = Fraction(x).denominator
        lcm = lcm * d // gcd(lcm, d)
    return primitive(int(x * lcm) for x in vec)


def _echelon(rows: list[list[Fraction]]) -> int:
    """In-place fraction Gaussian elimination; returns the rank."""
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / pv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def mat_rank(rows: Iterable[Sequence]) -> int:
    work = [[Fraction(x) for x in row] for row in rows]
    return _echelon(work)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of the given points (-1 for the empty set)."""
    pts = list(points)
    if not pts:
        return -1
    base = pts[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in pts[1:]]
    return _echelon(diffs)


def mat_det(rows: Sequence[Sequence]) -> Fraction:
    work = [[Fraction(x) for x in row] for row in rows]
    n = len(work)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        pv = work[col][col]
        det *= pv
        for r in range(col + 1, n):
            if work[r][col] != 0:
                factor = work[r][col] / pv
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return det


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve the square system matrix @ x = rhs exactly; None if singular."""
    n = len(matrix)
    work = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        pv = work[col][col]
        work[col] = [a / pv for a in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [work[r][n] for r in range(n)]


def mat_inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]] | None:
    """Exact inverse of a square matrix; None if singular."""
    n = len(matrix)
    work = [
        [Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        pv = work[col][col]
        work[col] = [a / pv for a in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [row[n:] for row in work]
