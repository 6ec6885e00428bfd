"""Normal fans and their unimodular simplicial refinements.

The normal fan of a Newton polyhedron decomposes the dual nonnegative
orthant by which face each covector minimizes on; maximal cones correspond
to vertices and are generated by the normals of the facets through the
vertex.  Refinement happens in two deterministic stages:

  simplicialize: pulling triangulation (apex = lexicographically smallest
      ray of each cone, recursively), introducing no new rays;
  unimodularize: 2D cones via the Hirzebruch-Jung chain, 3D/4D cones via
      stellar subdivision at the minimal-coefficient-sum primitive lattice
      point of the fundamental parallelepiped.

Rays live in a deduplicated table; cones reference ray indices.  All
arithmetic is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CapExceededError, InputError
from .linalg import dot, mat_det, mat_inverse, mat_rank, solve
from .polyhedron import (
    NewtonPolyhedron,
    _enumerate_proper_faces,
    active_facets,
    dd_dual_rays,
    support_value,
)
from .taylor import Exponent

UNIMODULARIZE_MAX_DIM = 4

RayVec = tuple[int, ...]


@dataclass(frozen=True)
class Cone:
    rays: tuple[int, ...]  # sorted indices into the owning fan's ray table
    attached_face: frozenset[Exponent] | None = None


@dataclass(frozen=True)
class Fan:
    n: int
    rays: tuple[RayVec, ...]
    cones: tuple[Cone, ...]
    maximal: tuple[int, ...]  # indices into `cones` of the full-dimensional ones

    def generators(self, cone: Cone) -> list[RayVec]:
        return [self.rays[i] for i in cone.rays]

    def maximal_cones(self) -> list[Cone]:
        return [self.cones[i] for i in self.maximal]


@dataclass(frozen=True)
class ConeExponents:
    cone_index: int  # index into fan.maximal order
    l_values: tuple[int, ...]
    l_sigma: int
    n_sigma: int


@dataclass(frozen=True)
class FanExponents:
    per_cone: tuple[ConeExponents, ...]
    L: int
    N: int


# ---------------------------------------------------------------------------
# cone helpers (exact)

def cone_det(vectors: Sequence[RayVec]) -> Fraction:
    return mat_det(list(vectors))


def _coords_in_basis(basis: list[RayVec], v: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span."""
    n = len(basis[0])
    cols = [i for i in range(n)]
    # pick an invertible column subset of the basis matrix
    chosen: list[int] = []
    for c in cols:
        sub = [[row[j] for j in chosen + [c]] for row in basis]
        if mat_rank(sub) == len(chosen) + 1:
            chosen.append(c)
            if len(chosen) == len(basis):
                break
    if len(chosen) < len(basis):
        return None
    square = [[Fraction(basis[i][j]) for i in range(len(basis))] for j in chosen]
    rhs = [Fraction(v[j]) for j in chosen]
    coeffs = solve(square, rhs)
    if coeffs is None:
        return None
    for j in range(n):
        if sum(coeffs[i] * basis[i][j] for i in range(len(basis))) != Fraction(v[j]):
            return None
    return coeffs


def simplicial_cone_contains(vectors: Sequence[RayVec], v: Sequence) -> bool:
    coeffs = _coords_in_basis(list(vectors), v)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def cone_facet_sets(vectors: Sequence[RayVec]) -> list[frozenset[int]]:
    """Facets of cone(vectors) as sets of generator indices.

    The cone is assumed pointed (all our cones sit inside the dual orthant).
    Lower-dimensional cones are handled by passing to span coordinates.
    """
    vectors = list(vectors)
    rank = mat_rank(vectors)
    if rank <= 1:
        return []
    if len(vectors) == rank:
        return [frozenset(s) for s in itertools.combinations(range(len(vectors)), rank - 1)]
    basis: list[RayVec] = []
    for v in vectors:
        if mat_rank(basis + [v]) > len(basis):
            basis.append(v)
    projected = []
    for v in vectors:
        c = _coords_in_basis(basis, v)
        assert c is not None
        projected.append(tuple(c))
    facets = []
    for z in dd_dual_rays([tuple(p) for p in projected]):
        tight = frozenset(i for i, p in enumerate(projected) if dot(p, z) == 0)
        facets.append(tight)
    return facets


def fulldim_cone_contains(vectors: Sequence[RayVec], v: Sequence) -> bool:
    """Exact membership for a full-dimensional pointed cone."""
    duals = dd_dual_rays(list(vectors))
    return all(dot(z, v) >= 0 for z in duals)


def cone_all_face_sets(vectors: Sequence[RayVec]) -> set[frozenset[int]]:
    """All nonempty faces of cone(vectors) as generator-index sets (incl. itself)."""
    full = frozenset(range(len(vectors)))
    result = {full}
    queue = [frozenset(f) for f in cone_facet_sets(vectors)]
    while queue:
        face = queue.pop()
        if face in result or not face:
            continue
        result.add(face)
        sub = [vectors[i] for i in sorted(face)]
        local = sorted(face)
        for f2 in cone_facet_sets(sub):
            queue.append(frozenset(local[i] for i in f2))
    return result


# ---------------------------------------------------------------------------
# normal fan

def normal_fan(poly: NewtonPolyhedron) -> Fan:
    """The decomposition of the dual nonnegative orthant by minimizing face.

    Cones are the normal cones of the proper faces of the polyhedron: the
    cone of a face is generated by the normals of the facets through it,
    and maximal cones correspond to vertices.  attached_face holds the
    vertex set of the polyhedron face each cone maps to.
    """
    n = poly.n
    ray_table: list[RayVec] = sorted({f.normal for f in poly.facets})
    ray_index = {r: i for i, r in enumerate(ray_table)}
    cones: list[Cone] = []
    seen: set[tuple[int, ...]] = set()
    maximal: list[int] = []
    for verts, rays in _enumerate_proper_faces(poly):
        act = active_facets(poly, verts, rays)
        idx = tuple(sorted(ray_index[f.normal] for f in act))
        if idx in seen:
            continue
        seen.add(idx)
        cone = Cone(idx, frozenset(verts))
        cones.append(cone)
        if len(verts) == 1 and not rays:
            # vertex of the polyhedron: full-dimensional normal cone
            assert mat_rank([ray_table[i] for i in idx]) == n
            maximal.append(len(cones) - 1)
    order = sorted(range(len(cones)), key=lambda i: cones[i].rays)
    remap = {old: new for new, old in enumerate(order)}
    cones = [cones[i] for i in order]
    maximal = sorted(remap[i] for i in maximal)
    return Fan(n, tuple(ray_table), tuple(cones), tuple(maximal))


# ---------------------------------------------------------------------------
# simplicialization (pulling triangulation)

def _pull_triangulate(fan_rays: Sequence[RayVec], idx: tuple[int, ...]) -> list[tuple[int, ...]]:
    vectors = [fan_rays[i] for i in idx]
    rank = mat_rank(vectors)
    if len(idx) == rank:
        return [idx]
    apex_local = min(range(len(idx)), key=lambda i: vectors[i])
    out = []
    for facet in cone_facet_sets(vectors):
        if apex_local in facet:
            continue
        sub = tuple(idx[i] for i in sorted(facet))
        for tri in _pull_triangulate(fan_rays, sub):
            out.append(tuple(sorted(set(tri) | {idx[apex_local]})))
    return out


def _assemble_simplicial(
    n: int,
    rays: Sequence[RayVec],
    max_cones: list[tuple[tuple[int, ...], frozenset[Exponent] | None]],
) -> Fan:
    """Build a fan from simplicial maximal cones; faces are all ray subsets."""
    used = sorted({i for idx, _ in max_cones for i in idx})
    remap = {old: new for new, old in enumerate(used)}
    table = tuple(rays[i] for i in used)
    cone_set: dict[tuple[int, ...], frozenset[Exponent] | None] = {}
    maximal_keys = []
    for idx, attached in max_cones:
        key = tuple(sorted(remap[i] for i in idx))
        cone_set[key] = attached
        maximal_keys.append(key)
        for r in range(1, len(key)):
            for sub in itertools.combinations(key, r):
                cone_set.setdefault(tuple(sub), None)
    keys = sorted(cone_set)
    cones = tuple(Cone(k, cone_set[k]) for k in keys)
    pos = {k: i for i, k in enumerate(keys)}
    maximal = tuple(sorted(pos[k] for k in set(maximal_keys)))
    return Fan(n, table, cones, maximal)


def simplicialize(fan: Fan) -> Fan:
    """Refine every maximal cone to simplicial cones without adding rays."""
    new_max: list[tuple[tuple[int, ...], frozenset[Exponent] | None]] = []
    for cone in fan.maximal_cones():
        for tri in _pull_triangulate(fan.rays, cone.rays):
            new_max.append((tri, cone.attached_face))
    return _assemble_simplicial(fan.n, fan.rays, new_max)


# ---------------------------------------------------------------------------
# unimodularization

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _det2(u: RayVec, v: RayVec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def hirzebruch_jung_chain(u: RayVec, v: RayVec) -> list[RayVec]:
    """Rays of the minimal unimodular subdivision of the 2D cone(u, v).

    Repeatedly inserts the unique primitive w with det(cur, w) = 1 lying on
    the bounded part of the lattice hull between cur and v; consecutive
    chain members span determinant-one cones.
    """
    if _det2(u, v) < 0:
        u, v = v, u
    chain = [u]
    cur = u
    while True:
        d = _det2(cur, v)
        if d == 0:
            raise InputError("degenerate 2D cone: generators are parallel")
        if d == 1:
            chain.append(v)
            return chain
        g, s, t = _xgcd(cur[0], cur[1])
        assert g == 1, "cone generators must be primitive"
        w = (-t, s)  # det(cur, w) = cur0*s + cur1*t ... = 1
        assert _det2(cur, w) == 1
        alpha_num = _det2(w, v)  # alpha = alpha_num / d must land in (0, 1)
        k = -(alpha_num // d)
        w = (w[0] + k * cur[0], w[1] + k * cur[1])
        assert w[0] >= 0 and w[1] >= 0 and _det2(cur, w) == 1
        chain.append(w)
        cur = w


def _parallelepiped_point(vectors: list[RayVec]) -> RayVec:
    """Primitive lattice point of {sum t_i g_i : 0 <= t_i < 1} with minimal
    coefficient sum, ties broken lexicographically."""
    n = len(vectors)
    inv = mat_inverse([[vectors[i][j] for i in range(n)] for j in range(n)])
    assert inv is not None
    sums = [sum(v[j] for v in vectors) for j in range(n)]
    best: tuple[Fraction, RayVec] | None = None
    for cand in itertools.product(*(range(max(s, 1)) for s in sums)):
        if not any(cand):
            continue
        coeffs = [sum(inv[i][j] * cand[j] for j in range(n)) for i in range(n)]
        if any(c < 0 or c >= 1 for c in coeffs):
            continue
        key = (sum(coeffs), cand)
        if best is None or key < best:
            best = key
    assert best is not None, "parallelepiped of a non-unimodular cone has a lattice point"
    return best[1]


def unimodularize(fan: Fan, trace: list | None = None) -> Fan:
    """Refine a simplicial fan until every maximal cone has determinant +-1.

    When a `trace` list is supplied, each stellar step appends the pair
    (max |det| among non-unimodular cones, how many cones attain it); the
    sequence decreases strictly in lexicographic order, which is the
    termination witness.
    """
    n = fan.n
    for cone in fan.maximal_cones():
        if len(cone.rays) != n:
            raise InputError("unimodularize requires a simplicial fan")
    if n > UNIMODULARIZE_MAX_DIM:
        raise CapExceededError(
            f"unimodularization is capped at dimension {UNIMODULARIZE_MAX_DIM}, got {n}"
        )
    rays: list[RayVec] = list(fan.rays)
    ray_index = {r: i for i, r in enumerate(rays)}

    def intern(vec: RayVec) -> int:
        if vec not in ray_index:
            ray_index[vec] = len(rays)
            rays.append(vec)
        return ray_index[vec]

    max_cones: list[tuple[tuple[int, ...], frozenset[Exponent] | None]] = [
        (c.rays, c.attached_face) for c in fan.maximal_cones()
    ]

    if n == 1:
        return _assemble_simplicial(n, rays, max_cones)

    if n == 2:
        out = []
        for idx, attached in max_cones:
            u, v = rays[idx[0]], rays[idx[1]]
            chain = hirzebruch_jung_chain(u, v)
            for a, b in zip(chain, chain[1:]):
                out.append((tuple(sorted((intern(a), intern(b)))), attached))
        return _assemble_simplicial(n, rays, out)

    while True:
        bad = [
            (abs(cone_det([rays[i] for i in idx])), idx, attached)
            for idx, attached in max_cones
            if abs(cone_det([rays[i] for i in idx])) != 1
        ]
        if not bad:
            break
        if trace is not None:
            worst_det = max(b[0] for b in bad)
            trace.append((worst_det, sum(1 for b in bad if b[0] == worst_det)))
        _, worst_idx, _ = max(
            bad, key=lambda b: (b[0], [rays[i] for i in b[1]])
        )
        w = _parallelepiped_point([rays[i] for i in worst_idx])
        w_idx = intern(w)
        updated: list[tuple[tuple[int, ...], frozenset[Exponent] | None]] = []
        for idx, attached in max_cones:
            gens = [rays[i] for i in idx]
            coeffs = solve([[g[j] for g in gens] for j in range(n)], list(w))
            if coeffs is None or any(c < 0 for c in coeffs):
                updated.append((idx, attached))
                continue
            assert all(c < 1 for c in coeffs)
            for j, c in enumerate(coeffs):
                if c > 0:
                    repl = tuple(sorted(set(idx) - {idx[j]} | {w_idx}))
                    updated.append((repl, attached))
        max_cones = updated
    return _assemble_simplicial(n, rays, max_cones)


# ---------------------------------------------------------------------------
# exponents

def fan_exponents(fan: Fan, poly: NewtonPolyhedron) -> FanExponents:
    """Per-cone ray support values and the aggregated bounds L and N."""
    n = fan.n
    per = []
    for pos, cone in enumerate(fan.maximal_cones()):
        gens = fan.generators(cone)
        if len(gens) != n:
            raise InputError("fan_exponents requires a simplicial fan")
        if abs(cone_det(gens)) != 1:
            raise InputError("fan_exponents requires a unimodular fan")
        l_values = tuple(support_value(poly, g) for g in gens)
        per.append(ConeExponents(pos, l_values, max(l_values), sum(l_values)))
    if not per:
        raise InputError("fan has no maximal cones")
    # covering spot-check: the coordinate rays and the diagonal must be covered
    probes = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    probes.append((1,) * n)
    for p in probes:
        if not any(
            simplicial_cone_contains(fan.generators(c), p) for c in fan.maximal_cones()
        ):
            raise InputError("fan does not cover the dual nonnegative orthant")
    return FanExponents(
        tuple(per),
        L=max(c.l_sigma for c in per),
        N=max(c.n_sigma for c in per),
    )


def chart_pullback_exponents(fan: Fan, cone: Cone, alpha: Sequence[int]) -> tuple[int, ...]:
    """Monomial exponents of x^alpha pulled back through the cone's chart map."""
    gens = fan.generators(cone)
    if len(gens) != fan.n or mat_rank(gens) != fan.n:
        raise InputError("chart pullback needs a full-dimensional simplicial cone")
    return tuple(dot(g, alpha) for g in gens)


# ---------------------------------------------------------------------------
# validation (used heavily by the test suite)

def validate_fan(fan: Fan) -> None:
    """Check the fan condition pairwise on maximal cones.

    For each pair, the exact intersection cone must be spanned by the common
    rays, and the common ray set must be a face of both cones.
    """
    maxc = fan.maximal_cones()
    duals = [dd_dual_rays(fan.generators(c)) for c in maxc]
    for i, j in itertools.combinations(range(len(maxc)), 2):
        common = sorted(set(maxc[i].rays) & set(maxc[j].rays))
        inter_rays = dd_dual_rays(duals[i] + duals[j])
        common_vecs = [fan.rays[r] for r in common]
        for r in inter_rays:
            if not (
                common_vecs
                and simplicial_cone_contains_or_member(common_vecs, r)
            ):
                raise AssertionError(
                    f"cones {maxc[i].rays} and {maxc[j].rays} intersect outside "
                    f"their common rays (witness ray {r})"
                )
        for cone_idx in (i, j):
            faces = cone_all_face_sets(fan.generators(maxc[cone_idx]))
            local = frozenset(
                k for k, r in enumerate(maxc[cone_idx].rays) if r in common
            )
            if common and local not in faces:
                raise AssertionError(
                    f"common rays {common} are not a face of cone {maxc[cone_idx].rays}"
                )


def simplicial_cone_contains_or_member(vectors: list[RayVec], v: Sequence) -> bool:
    """Membership that tolerates a linearly dependent generating set."""
    basis: list[RayVec] = []
    for vec in vectors:
        if mat_rank(basis + [vec]) > len(basis):
            basis.append(vec)
    coeffs = _coords_in_basis(basis, v) if basis else None
    if coeffs is None:
        return False
    if len(basis) == len(vectors):
        return all(c >= 0 for c in coeffs)
    return fulldim_cone_contains_lower(vectors, v)


def fulldim_cone_contains_lower(vectors: list[RayVec], v: Sequence) -> bool:
    """Exact membership for a pointed cone of any dimension via span coordinates."""
    basis: list[RayVec] = []
    for vec in vectors:
        if mat_rank(basis + [vec]) > len(basis):
            basis.append(vec)
    vc = _coords_in_basis(basis, v)
    if vc is None:
        return False
    projected = []
    for vec in vectors:
        c = _coords_in_basis(basis, vec)
        assert c is not None
        projected.append(tuple(c))
    duals = dd_dual_rays(projected)
    return all(dot(z, vc) >= 0 for z in duals)
