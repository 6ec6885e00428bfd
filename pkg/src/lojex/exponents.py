"""Hypothesis gates and the combinatorial exponent formulas.

Everything here is exact lattice combinatorics on the Newton polyhedron:

  * the monomial-ideal condition for declared remainders (per-remainder
    facet test, with flat variables allowing unlimited exponent padding);
  * convenience / partial convenience and the largest axis vertex nu;
  * the gradient-inequality exponent theta = 1 - 1/nu;
  * the diagonal entry parameters d(alpha*) of the hat vertices and their
    maximum d, the domination exponent;
  * the transversal families describing the zero set as a union of
    coordinate subspaces, and the per-ranking distance exponents whose
    maximum is the distance inequality exponent.

Whenever a gate fails the corresponding value is reported n/a with a
reason, and the generic toric-resolution bound (L, 1 - 1/N, or N) is
attached as a fallback.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import CapExceededError
from .linalg import dot
from .polyhedron import NewtonPolyhedron, contains, diagonal_exponent
from .taylor import Exponent, TaylorModel

MAX_RANKING_VARS = 9


@dataclass(frozen=True)
class Hypotheses:
    kn: bool
    nondegenerate: bool
    nonnegative: bool


# ---------------------------------------------------------------------------
# the monomial-ideal condition

@dataclass(frozen=True)
class RemainderCheck:
    exp: Exponent
    is_unit: bool
    flat_vars: tuple[int, ...]
    ok: bool
    reason: str


@dataclass(frozen=True)
class KNReport:
    satisfied: bool
    remainders: tuple[RemainderCheck, ...]


def check_kn(model: TaylorModel, poly: NewtonPolyhedron) -> KNReport:
    """Can the model be generated by monomials with exponents in the polyhedron?

    Pure polynomials qualify outright.  A unit remainder contributes its own
    exponent (in the polyhedron by construction).  A flat remainder may be
    padded arbitrarily in its flat variables, so it passes iff every facet
    whose normal vanishes on all flat variables is already satisfied by its
    exponent.
    """
    checks = []
    for r in model.remainders:
        if r.is_unit:
            ok = contains(poly, r.exp)
            reason = "unit factor: exponent lies in the polyhedron" if ok else (
                "unit factor exponent escapes the polyhedron"
            )
            checks.append(RemainderCheck(r.exp, True, (), ok, reason))
            continue
        flat = tuple(sorted(r.flat_vars))
        bad = None
        for f in poly.facets:
            if all(f.normal[i] == 0 for i in flat) and dot(f.normal, r.exp) < f.offset:
                bad = f
                break
        if bad is None:
            checks.append(
                RemainderCheck(
                    r.exp, False, flat, True,
                    "flat padding reaches the polyhedron on every facet avoiding "
                    "the flat variables",
                )
            )
        else:
            checks.append(
                RemainderCheck(
                    r.exp, False, flat, False,
                    f"facet <{bad.normal}, x> >= {bad.offset} has zero normal on the "
                    f"flat variables but value {dot(bad.normal, r.exp)} at the exponent",
                )
            )
    return KNReport(all(c.ok for c in checks), tuple(checks))


# ---------------------------------------------------------------------------
# convenience

@dataclass(frozen=True)
class ConvenienceReport:
    convenient: bool
    partially_convenient: bool
    J: tuple[int, ...]  # 0-based axis indices carrying an axis vertex
    nu: tuple[tuple[int, int], ...]  # (axis, exponent) pairs
    nu_max: int | None


def convenience(poly: NewtonPolyhedron) -> ConvenienceReport:
    n = poly.n
    nu: dict[int, int] = {}
    for v in poly.vertices:
        nz = [i for i, e in enumerate(v) if e]
        if len(nz) == 1:
            nu[nz[0]] = v[nz[0]]
    J = tuple(sorted(nu))
    inside_J = all(
        all(e == 0 for i, e in enumerate(v) if i not in nu) for v in poly.vertices
    )
    partially = bool(nu) and inside_J
    return ConvenienceReport(
        convenient=len(nu) == n,
        partially_convenient=partially,
        J=J,
        nu=tuple(sorted(nu.items())),
        nu_max=max(nu.values()) if partially else None,
    )


# ---------------------------------------------------------------------------
# theta

@dataclass(frozen=True)
class ThetaResult:
    value: Fraction | None
    reason: str | None
    fallback: Fraction | None  # 1 - 1/N for the computed fan, when available


def theta(
    conv: ConvenienceReport, hyp: Hypotheses, fan_n: int | None = None
) -> ThetaResult:
    fallback = Fraction(1) - Fraction(1, fan_n) if fan_n else None
    if not conv.partially_convenient:
        return ThetaResult(None, "germ is not partially convenient", fallback)
    if not hyp.kn:
        return ThetaResult(None, "monomial-ideal condition fails", fallback)
    if not hyp.nondegenerate:
        return ThetaResult(None, "non-degeneracy not established", fallback)
    assert conv.nu_max is not None
    return ThetaResult(Fraction(1) - Fraction(1, conv.nu_max), None, fallback)


# ---------------------------------------------------------------------------
# alpha

@dataclass(frozen=True)
class AlphaResult:
    value: Fraction | None
    reason: str | None
    fallback: int | None  # L for the computed fan
    per_hat_vertex: tuple[tuple[Exponent, Fraction], ...]
    witness: Exponent | None  # hat vertex attaining the maximum


def alpha_exponent(
    poly: NewtonPolyhedron,
    hat_poly: NewtonPolyhedron,
    hyp: Hypotheses,
    fan_l: int | None = None,
) -> AlphaResult:
    per = []
    for v in sorted(hat_poly.vertices):
        d = diagonal_exponent(poly, v)
        if d == math.inf:
            raise RuntimeError(
                f"diagonal ray of hat vertex {v} never enters the polyhedron; "
                "this contradicts the hat construction"
            )
        per.append((v, Fraction(d)))
    witness = max(per, key=lambda p: p[1])[0] if per else None
    value = max(p[1] for p in per) if per else None
    if not hyp.nonnegative:
        return AlphaResult(None, "germ not declared non-negative", fan_l, tuple(per), witness)
    if not hyp.kn:
        return AlphaResult(None, "monomial-ideal condition fails", fan_l, tuple(per), witness)
    if not hyp.nondegenerate:
        return AlphaResult(None, "non-degeneracy not established", fan_l, tuple(per), witness)
    return AlphaResult(value, None, fan_l, tuple(per), witness)


# ---------------------------------------------------------------------------
# transversal families

@dataclass(frozen=True)
class TransversalFamily:
    I_f: tuple[int, ...]
    supports: tuple[frozenset[int], ...]  # hat-vertex variable supports
    lambda_exact: tuple[frozenset[int], ...]
    lambda_hitting: tuple[frozenset[int], ...]  # minimal hitting sets
    agree: bool  # do both families describe the same union of subspaces


def _union_covers(family_a: Sequence[frozenset], family_b: Sequence[frozenset]) -> bool:
    """Union of T_J over family_a contains the union over family_b.

    T_J = {x : x_i = 0 for i in J}, so T_J' subset of T_J iff J subset of J',
    and a subspace inside a finite union of subspaces lies inside one of them.
    """
    return all(any(ja <= jb for ja in family_a) for jb in family_b)


def transversals(hat_poly: NewtonPolyhedron) -> TransversalFamily:
    supports = tuple(
        sorted(frozenset(i for i, e in enumerate(v) if e) for v in hat_poly.vertices)
    )
    i_f = tuple(sorted(set().union(*supports))) if supports else ()
    exact = []
    hitting_all = []
    for r in range(1, len(i_f) + 1):
        for combo in itertools.combinations(i_f, r):
            j = frozenset(combo)
            inters = [len(j & s) for s in supports]
            if all(c == 1 for c in inters):
                exact.append(j)
            if all(c >= 1 for c in inters):
                hitting_all.append(j)
    minimal = [
        j for j in hitting_all if not any(o < j for o in hitting_all)
    ]
    exact_t = tuple(sorted(exact, key=sorted))
    minimal_t = tuple(sorted(minimal, key=sorted))
    agree = _union_covers(exact_t, minimal_t) and _union_covers(minimal_t, exact_t)
    return TransversalFamily(i_f, supports, exact_t, minimal_t, agree)


# ---------------------------------------------------------------------------
# the distance exponent

@dataclass(frozen=True)
class RankingData:
    order: tuple[int, ...]  # variables listed from smallest to largest magnitude
    i_rho: int
    vertices: tuple[Exponent, ...]
    exponent: int


@dataclass(frozen=True)
class DistResult:
    value: int | None
    reason: str | None
    fallback: int | None  # N for the computed fan
    per_ranking: tuple[RankingData, ...]
    extended: bool  # exact-transversal family is empty or wrong; hitting sets used


def ranking_i_rho(
    family: Sequence[frozenset[int]], rank: Mapping[int, int]
) -> int:
    """The index realizing the distance to the union of subspaces on this region.

    Per member J the distance to T_J is |x_i| for the highest-ranked i in J;
    across the family the distance is the minimum, i.e. the lowest-ranked of
    those per-member maxima.
    """
    tops = [max(j, key=lambda i: rank[i]) for j in family]
    return min(tops, key=lambda i: rank[i])


def dist_exponent(
    poly: NewtonPolyhedron,
    family: TransversalFamily,
    hyp: Hypotheses,
    fan_n: int | None = None,
) -> DistResult:
    s = len(family.I_f)
    if s > MAX_RANKING_VARS:
        raise CapExceededError(
            f"{s} zero-set variables need {s}! rankings; cap is {MAX_RANKING_VARS}"
        )
    extended = not family.agree
    work_family = family.lambda_hitting
    gates_ok = hyp.nonnegative and hyp.kn and hyp.nondegenerate
    reason = None
    if not hyp.nonnegative:
        reason = "germ not declared non-negative"
    elif not hyp.kn:
        reason = "monomial-ideal condition fails"
    elif not hyp.nondegenerate:
        reason = "non-degeneracy not established"

    i_f_set = set(family.I_f)
    per: list[RankingData] = []
    for order in itertools.permutations(family.I_f):
        rank = {v: k for k, v in enumerate(order)}
        i_rho = ranking_i_rho(work_family, rank)
        floor = rank[i_rho]
        verts = tuple(
            sorted(
                v
                for v in poly.vertices
                if set(i for i, e in enumerate(v) if e) <= i_f_set
                and all(rank[i] >= floor for i, e in enumerate(v) if e)
            )
        )
        if not verts:
            raise RuntimeError(
                f"no vertex is supported above rank {floor} for ranking {order}; "
                "this contradicts the non-emptiness of the ranked vertex set"
            )
        per.append(RankingData(order, i_rho, verts, min(sum(v) for v in verts)))
    value = max(r.exponent for r in per) if per else None
    if not gates_ok:
        return DistResult(None, reason, fan_n, tuple(per), extended)
    return DistResult(value, None, fan_n, tuple(per), extended)


# ---------------------------------------------------------------------------
# combined special case and the convex vertex shape

@dataclass(frozen=True)
class CombinedResult:
    theta: Fraction
    alpha: Fraction
    dist: Fraction


def combined_case(
    conv: ConvenienceReport,
    family: TransversalFamily,
    theta_res: ThetaResult,
    alpha_res: AlphaResult,
    dist_res: DistResult,
    hyp: Hypotheses,
) -> CombinedResult | None:
    """The simplified triple (1 - 1/nu, nu, nu) when every gate holds.

    Also asserts agreement with the general-path values; a mismatch would be
    an implementation bug, not a property of the germ.
    """
    if not (
        conv.partially_convenient
        and hyp.kn
        and hyp.nondegenerate
        and hyp.nonnegative
    ):
        return None
    nu = conv.nu_max
    assert nu is not None
    # partial convenience forces the hat vertices to be exactly the J axes
    assert set(family.I_f) == set(conv.J)
    expected = CombinedResult(
        Fraction(1) - Fraction(1, nu), Fraction(nu), Fraction(nu)
    )
    got = (theta_res.value, alpha_res.value, dist_res.value)
    if got != (expected.theta, expected.alpha, expected.dist):
        raise RuntimeError(
            f"combined-case mismatch: general path gives {got}, special case "
            f"gives ({expected.theta}, {expected.alpha}, {expected.dist})"
        )
    return expected


def convex_shape(poly: NewtonPolyhedron) -> bool:
    """Necessary vertex shape for convex germs: every vertex is an even axis point."""
    for v in poly.vertices:
        nz = [i for i, e in enumerate(v) if e]
        if len(nz) != 1 or v[nz[0]] % 2 != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# aggregate report

@dataclass(frozen=True)
class ExponentReport:
    kn: KNReport
    nondegeneracy_overall: str  # nondegenerate | degenerate | inconclusive
    face_verdicts: Mapping
    convenience: ConvenienceReport
    transversal: TransversalFamily
    theta: ThetaResult
    alpha: AlphaResult
    dist: DistResult
    combined: CombinedResult | None
    fan_L: int | None
    fan_N: int | None
    convex_vertex_shape: bool
    hypotheses: Hypotheses
    flags: tuple[str, ...]
