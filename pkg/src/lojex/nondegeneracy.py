"""Kouchnirenko non-degeneracy: does some compact face polynomial have a
critical point on the real torus (R \\ 0)^n?

Verdicts come in four flavors.  Exact decisions cover vertex faces, faces
that are sign-definite with even exponents (the weighted Euler identity
keeps them nonzero on the torus), faces with a single-monomial partial
derivative, and faces supported on at most two variables (reduction to a
univariate gcd plus Sturm root counting after normalizing the second
variable to +-1, legitimate because the critical set of a
quasi-homogeneous polynomial is invariant under the positive weighted
scaling).  Everything else is decided numerically by multistart
minimization of ||grad f_gamma||^2 over the slice max|x_i| = 1 of every
sign orthant, and labeled 'nondegenerate-numeric': not a certificate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError
from .linalg import dot
from .polyhedron import FaceData, NewtonPolyhedron, compact_faces
from .taylor import (
    Exponent,
    PolyDict,
    TaylorModel,
    poly_diff,
    poly_eval_float,
    support,
)
from .univariate import UPoly, count_real_roots, isolate_real_root, strip_root_at_zero, ugcd, utrim

DEFAULT_TOL = 1e-10
DEFAULT_STARTS = 64
TORUS_FLOOR = 1e-3  # numeric minimizers closer than this to a coordinate plane
                    # are not accepted as torus witnesses


@dataclass(frozen=True)
class FacePolynomial:
    face: FaceData
    n: int
    terms: tuple[tuple[Exponent, Fraction], ...]
    # a unit remainder exponent on the face contributes an unknown
    # coefficient, so the face polynomial is not pinned by the input
    underdetermined: bool = False

    def poly(self) -> PolyDict:
        return dict(self.terms)

    def active_vars(self) -> tuple[int, ...]:
        used = set()
        for exp, _ in self.terms:
            used.update(i for i, e in enumerate(exp) if e)
        return tuple(sorted(used))


@dataclass(frozen=True)
class DegeneracyVerdict:
    status: str  # nondegenerate-exact | nondegenerate-numeric | degenerate | inconclusive
    witness: tuple[float, ...] | None
    residual: float
    detail: str = ""


def face_polynomial(model: TaylorModel, face: FaceData) -> FacePolynomial:
    """Restriction of the polynomial part to the exponents on a compact face."""
    if not face.compact:
        raise InputError(
            "face polynomial of a non-compact face is not determined by the "
            "polynomial part"
        )
    level = dot(face.defining_normal, next(iter(face.lattice_points)))
    terms = tuple(
        (t.exp, t.coeff)
        for t in sorted(model.terms, key=lambda t: t.exp)
        if dot(face.defining_normal, t.exp) == level
    )
    unknown = any(
        r.is_unit and r.exp in face.lattice_points for r in model.remainders
    )
    return FacePolynomial(face, model.n, terms, underdetermined=unknown)


# ---------------------------------------------------------------------------
# exact routes

def _sign_definite_even(fp: FacePolynomial) -> bool:
    """All exponents even and all coefficients of one sign."""
    if not all(all(e % 2 == 0 for e in exp) for exp, _ in fp.terms):
        return False
    signs = {c > 0 for _, c in fp.terms}
    return len(signs) == 1


def _univariate_in(poly: PolyDict, var: int, values: dict[int, int]) -> UPoly:
    """Substitute +-1 for every variable except `var`; coefficients collected."""
    coeffs: dict[int, Fraction] = {}
    for exp, c in poly.items():
        sign = 1
        for i, e in enumerate(exp):
            if i != var and e:
                sign *= values[i] ** e
        coeffs[exp[var]] = coeffs.get(exp[var], Fraction(0)) + c * sign
    out = [Fraction(0)] * (max(coeffs, default=0) + 1)
    for d, c in coeffs.items():
        out[d] = c
    return utrim(out)


def _check_two_variable(fp: FacePolynomial, vi: int, vj: int) -> DegeneracyVerdict:
    """Exact decision for a face polynomial using only variables vi, vj.

    Normalize |x_vj| = 1 by the quasi-homogeneous scaling; a torus critical
    point exists iff for some sign choice the two partials share a nonzero
    real root, decided by Sturm counting on their gcd.
    """
    poly = fp.poly()
    pi = poly_diff(poly, vi)
    pj = poly_diff(poly, vj)
    for sign in (1, -1):
        values = {vj: sign}
        gi = _univariate_in(pi, vi, values)
        gj = _univariate_in(pj, vi, values)
        if not gi and not gj:
            continue  # both partials vanish identically on this slice
        if not gi or not gj:
            g = strip_root_at_zero(gi or gj)
        else:
            g = strip_root_at_zero(ugcd(gi, gj))
        if len(g) == 0:
            continue
        if len(g) > 1 and count_real_roots(g) > 0:
            root = isolate_real_root(g)
            assert root is not None
            witness = [1.0] * fp.n
            witness[vi] = float(root)
            witness[vj] = float(sign)
            res = _residual(fp, witness)
            return DegeneracyVerdict(
                "degenerate", tuple(witness), res,
                detail=f"common root of both partials at x{vi + 1} ~ {float(root):.6g}, "
                f"x{vj + 1} = {sign}",
            )
    return DegeneracyVerdict(
        "nondegenerate-exact", None, math.inf,
        detail="univariate reduction: partials share no nonzero real root",
    )


def _residual(fp: FacePolynomial, point) -> float:
    poly = fp.poly()
    return math.fsum(
        poly_eval_float(poly_diff(poly, i), point) ** 2 for i in range(fp.n)
    )


# ---------------------------------------------------------------------------
# numeric route

def _normalized_float_poly(fp: FacePolynomial) -> PolyDict:
    scale = max(abs(c) for _, c in fp.terms)
    return {exp: c / scale for exp, c in fp.terms}


def _multistart(fp: FacePolynomial, tol: float, starts: int, seed: int) -> DegeneracyVerdict:
    from scipy.optimize import minimize

    active = fp.active_vars()
    k = len(active)
    poly = _normalized_float_poly(fp)
    partials = [poly_diff(poly, i) for i in active]
    hessrows = [[poly_diff(p, j) for j in active] for p in partials]

    def objective(u: np.ndarray, signs, pivot):
        x = [1.0] * fp.n
        for pos, var in enumerate(active):
            x[var] = signs[pos] * (1.0 if pos == pivot else u[pos if pos < pivot else pos - 1])
        g = [poly_eval_float(p, x) for p in partials]
        val = math.fsum(gi * gi for gi in g)
        grad = np.zeros(k - 1)
        for pos in range(k):
            if pos == pivot:
                continue
            slot = pos if pos < pivot else pos - 1
            d = math.fsum(
                2.0 * g[a] * poly_eval_float(hessrows[a][pos], x) for a in range(k)
            )
            grad[slot] = d * signs[pos]
        return val, grad, x

    rng = np.random.default_rng(seed)
    best_val = math.inf
    best_x = None
    best_torus_val = math.inf
    best_torus_x = None
    for signs in itertools.product((1.0, -1.0), repeat=k):
        for s in range(starts):
            pivot = s % k
            u0 = rng.uniform(0.05, 1.0, size=k - 1)
            res = minimize(
                lambda u: objective(u, signs, pivot)[:2],
                u0,
                jac=True,
                method="L-BFGS-B",
                bounds=[(0.0, 1.0)] * (k - 1),
            )
            val, _, x = objective(res.x, signs, pivot)
            if val < best_val:
                best_val = val
                best_x = x
            if min(abs(v) for v in x) >= TORUS_FLOOR and val < best_torus_val:
                best_torus_val = val
                best_torus_x = x
    assert best_x is not None
    if best_torus_x is not None and best_torus_val <= tol:
        return DegeneracyVerdict(
            "degenerate", tuple(best_torus_x), best_torus_val,
            detail=f"multistart minimizer with residual {best_torus_val:.3g}",
        )
    if best_val <= tol:
        return DegeneracyVerdict(
            "inconclusive", tuple(best_x), best_val,
            detail="residual below tolerance only near a coordinate hyperplane; "
            "not a torus witness",
        )
    return DegeneracyVerdict(
        "nondegenerate-numeric", None, best_val,
        detail=f"multistart minimum of ||grad||^2 on the slice: {best_val:.3g}",
    )


# ---------------------------------------------------------------------------
# public entry points

def check_face(
    fp: FacePolynomial,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> DegeneracyVerdict:
    if tol <= 0:
        raise InputError(f"tolerance must be positive, got {tol}")
    if starts < 1:
        raise InputError(f"starts must be >= 1, got {starts}")
    if fp.underdetermined:
        return DegeneracyVerdict(
            "inconclusive", None, math.inf,
            detail="a unit remainder contributes an unknown coefficient on this face",
        )
    if not fp.terms:
        return DegeneracyVerdict(
            "inconclusive", None, math.inf,
            detail="face carries no polynomial terms (unit-remainder support only)",
        )
    if len(fp.terms) == 1:
        # single monomial c x^alpha, alpha != 0: some partial is a nonzero
        # monomial, which cannot vanish on the torus
        return DegeneracyVerdict(
            "nondegenerate-exact", None, math.inf, detail="monomial face",
        )
    if _sign_definite_even(fp):
        # f_gamma is nonzero on the torus, so the weighted Euler identity
        # sum a_i x_i d_i f_gamma = l * f_gamma forces a nonzero partial
        return DegeneracyVerdict(
            "nondegenerate-exact", None, math.inf,
            detail="sign-definite even face: no torus zero by the Euler identity",
        )
    fpoly = fp.poly()
    for i in range(fp.n):
        partial = poly_diff(fpoly, i)
        if len(partial) == 1:
            # a single-monomial partial cannot vanish on the torus
            return DegeneracyVerdict(
                "nondegenerate-exact", None, math.inf,
                detail=f"partial in x{i + 1} is a nonzero monomial",
            )
    active = fp.active_vars()
    if len(active) == 1:
        # quasi-homogeneity forces a single term on one active variable
        return DegeneracyVerdict(
            "nondegenerate-exact", None, math.inf, detail="monomial face",
        )
    if len(active) == 2:
        return _check_two_variable(fp, active[0], active[1])
    return _multistart(fp, tol, starts, seed)


def check_model(
    model: TaylorModel,
    poly: NewtonPolyhedron,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> tuple[dict[tuple[Exponent, ...], DegeneracyVerdict], bool]:
    """Verdict for every compact face, plus the overall flag.

    Overall non-degenerate iff no face is degenerate and none inconclusive.
    Keys are the sorted lattice-point tuples of the faces.
    """
    faces = compact_faces(poly, support(model))
    verdicts: dict[tuple[Exponent, ...], DegeneracyVerdict] = {}
    for k, face in enumerate(faces):
        fp = face_polynomial(model, face)
        verdicts[tuple(sorted(face.lattice_points))] = check_face(
            fp, tol=tol, starts=starts, seed=seed + k
        )
    ok = all(
        v.status in ("nondegenerate-exact", "nondegenerate-numeric")
        for v in verdicts.values()
    )
    return verdicts, ok
