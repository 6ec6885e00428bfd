import math
import random
from fractions import Fraction

import numpy as np
import pytest

from lojex.errors import InputError
from lojex.linalg import affine_rank, dot
from lojex.polyhedron import (
    build_polyhedron,
    compact_faces,
    contains,
    diagonal_exponent,
    face_of_normal,
    g_gamma_eval,
    hat_polyhedron,
    support_value,
)

from .oracles import entry_parameter_bisect, is_vertex_lp, staircase_vertices_2d


def test_build_examples():
    p = build_polyhedron({(2, 0), (0, 2)})
    assert p.vertices == frozenset({(2, 0), (0, 2)})
    assert {(f.normal, f.offset) for f in p.facets} == {
        ((1, 0), 0), ((0, 1), 0), ((1, 1), 2)
    }
    p2 = build_polyhedron({(4, 0), (2, 2), (0, 4)})
    assert p2.vertices == frozenset({(4, 0), (0, 4)})
    p3 = build_polyhedron({(4, 0, 0), (1, 1, 0), (0, 4, 0), (4, 0, 6)})
    assert p3.vertices == frozenset({(4, 0, 0), (1, 1, 0), (0, 4, 0)})


def test_single_point_gives_shifted_orthant():
    p = build_polyhedron({(2, 2)})
    assert p.vertices == frozenset({(2, 2)})
    assert {(f.normal, f.offset) for f in p.facets} == {((1, 0), 2), ((0, 1), 2)}


def test_build_errors():
    with pytest.raises(InputError):
        build_polyhedron(set())
    with pytest.raises(InputError):
        build_polyhedron({(2, -1)})


def test_support_value_examples():
    assert support_value(build_polyhedron({(2, 0), (0, 2)}), (1, 1)) == 2
    assert support_value(build_polyhedron({(2, 2)}), (1, 0)) == 2
    assert support_value(build_polyhedron({(4, 0), (1, 1), (0, 4)}), (1, 1)) == 2
    with pytest.raises(InputError):
        support_value(build_polyhedron({(2, 2)}), (-1, 0))


def test_face_of_normal_examples():
    supp = {(2, 0), (0, 2)}
    poly = build_polyhedron(supp)
    f = face_of_normal(poly, supp, (1, 1))
    assert f.lattice_points == frozenset(supp) and f.dim == 1
    f = face_of_normal(poly, supp, (1, 2))
    assert f.lattice_points == frozenset({(2, 0)}) and f.dim == 0
    supp2 = {(4, 0), (1, 1), (0, 4)}
    f = face_of_normal(build_polyhedron(supp2), supp2, (1, 1))
    assert f.lattice_points == frozenset({(1, 1)}) and f.dim == 0


def test_compact_faces_examples():
    supp = {(2, 0), (0, 2)}
    faces = compact_faces(build_polyhedron(supp), supp)
    assert {frozenset(f.lattice_points) for f in faces} == {
        frozenset({(2, 0)}), frozenset({(0, 2)}), frozenset({(2, 0), (0, 2)})
    }
    faces = compact_faces(build_polyhedron({(2, 2)}), {(2, 2)})
    assert len(faces) == 1 and faces[0].lattice_points == frozenset({(2, 2)})
    supp3 = {(3, 0), (0, 2)}
    faces = compact_faces(build_polyhedron(supp3), supp3)
    assert {frozenset(f.lattice_points) for f in faces} == {
        frozenset({(3, 0)}), frozenset({(0, 2)}), frozenset({(3, 0), (0, 2)})
    }
    for f in faces:
        assert f.compact and all(a > 0 for a in f.defining_normal)


def test_g_gamma_eval_examples():
    assert g_gamma_eval(build_polyhedron({(2, 0), (0, 2)}), (1.0, 2.0)) == 5.0
    assert math.isclose(
        g_gamma_eval(build_polyhedron({(2, 2)}), (0.1, 0.1)), 1e-4
    )
    p = build_polyhedron({(4, 0, 0), (1, 1, 0), (0, 4, 0)})
    assert g_gamma_eval(p, (1.0, 1.0, 1.0)) == 3.0


def test_hat_polyhedron_examples():
    assert hat_polyhedron(build_polyhedron({(2, 2)})).vertices == frozenset({(1, 1)})
    assert hat_polyhedron(build_polyhedron({(4, 0), (2, 2)})).vertices == frozenset(
        {(1, 0)}
    )
    p = hat_polyhedron(build_polyhedron({(2, 2, 0), (0, 2, 2), (2, 0, 2)}))
    assert p.vertices == frozenset({(1, 1, 0), (0, 1, 1), (1, 0, 1)})


def test_diagonal_exponent_examples():
    assert diagonal_exponent(build_polyhedron({(2, 2)}), (1, 1)) == 2
    assert diagonal_exponent(build_polyhedron({(4, 0), (2, 2)}), (1, 0)) == 4
    assert diagonal_exponent(build_polyhedron({(2, 0), (0, 2)}), (1, 0)) == 2
    with pytest.raises(InputError):
        diagonal_exponent(build_polyhedron({(2, 2)}), (2, 1))


def test_contains_examples():
    p = build_polyhedron({(2, 2)})
    assert contains(p, (2, 2))
    assert not contains(p, (3, 1))
    assert contains(build_polyhedron({(2, 0), (0, 2)}), (1, 1))


def test_membership_needs_nonnegative_point():
    with pytest.raises(InputError):
        contains(build_polyhedron({(2, 2)}), (-1, 3))


def test_vertices_match_lp_oracle_random():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(2, 5)
        supp = set()
        for _ in range(rng.randint(1, 30)):
            p = tuple(rng.randint(0, 12) for _ in range(n))
            if any(p):
                supp.add(p)
        if not supp:
            continue
        poly = build_polyhedron(supp)
        expected = {p for p in supp if is_vertex_lp(p, supp)}
        assert poly.vertices == expected


def test_vertices_match_staircase_2d():
    rng = random.Random(5)
    for _ in range(80):
        supp = set()
        for _ in range(rng.randint(1, 15)):
            p = (rng.randint(0, 10), rng.randint(0, 10))
            if any(p):
                supp.add(p)
        if not supp:
            continue
        poly = build_polyhedron(supp)
        assert poly.vertices == frozenset(staircase_vertices_2d(supp))


def test_monotonicity_adding_interior_point():
    rng = random.Random(23)
    for _ in range(30):
        n = rng.randint(2, 4)
        supp = {tuple(rng.randint(0, 8) for _ in range(n)) for _ in range(6)}
        supp = {p for p in supp if any(p)}
        if not supp:
            continue
        poly = build_polyhedron(supp)
        # any vertex plus a nonnegative shift stays inside
        v = sorted(poly.vertices)[0]
        inside = tuple(v[i] + (1 if i == 0 else 0) for i in range(n))
        poly2 = build_polyhedron(supp | {inside})
        assert poly2.vertices == poly.vertices
        assert {(f.normal, f.offset) for f in poly2.facets} == {
            (f.normal, f.offset) for f in poly.facets
        }


def test_support_value_is_min_over_generators():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.randint(2, 4)
        supp = {tuple(rng.randint(0, 9) for _ in range(n)) for _ in range(8)}
        supp = {p for p in supp if any(p)}
        if not supp:
            continue
        poly = build_polyhedron(supp)
        for _ in range(5):
            a = tuple(rng.randint(0, 5) for _ in range(n))
            if not any(a):
                continue
            assert support_value(poly, a) == min(dot(a, p) for p in supp)


def test_diagonal_exponent_matches_bisection():
    cases = [
        (build_polyhedron({(2, 2)}), (1, 1)),
        (build_polyhedron({(4, 0), (2, 2)}), (1, 0)),
        (build_polyhedron({(2, 0), (0, 2)}), (0, 1)),
        (build_polyhedron({(4, 0, 0), (1, 1, 0), (0, 4, 0)}), (1, 1, 0)),
        (build_polyhedron({(2, 2, 0), (0, 2, 2), (2, 0, 2)}), (1, 1, 1)),
    ]
    for poly, alpha_star in cases:
        d = diagonal_exponent(poly, alpha_star)
        lo, hi = entry_parameter_bisect(poly, alpha_star)
        assert lo <= d <= hi
        assert contains(poly, [d * x for x in alpha_star])
        eps = Fraction(1, 10**9)
        if d > 0:
            assert not contains(poly, [(d - eps) * x for x in alpha_star])


def test_facets_are_supporting_with_enough_incidence():
    rng = random.Random(47)
    for _ in range(25):
        n = rng.randint(2, 4)
        supp = {tuple(rng.randint(0, 8) for _ in range(n)) for _ in range(10)}
        supp = {p for p in supp if any(p)}
        if not supp:
            continue
        poly = build_polyhedron(supp)
        for f in poly.facets:
            verts_on = [v for v in poly.vertices if dot(f.normal, v) == f.offset]
            assert verts_on, "facet must touch a vertex"
            rays_on = [
                tuple(1 if j == i else 0 for j in range(n))
                for i in range(n)
                if f.normal[i] == 0
            ]
            pts = [list(v) for v in verts_on]
            base = pts[0]
            pts += [[b + r[i] for i, b in enumerate(base)] for r in rays_on]
            assert affine_rank(pts) == n - 1


def test_g_dominance_inside_points_decay():
    # lattice points of the polyhedron are dominated by the vertex-monomial
    # sum near 0; strictly inside points decay relative to it
    supp = {(4, 0), (0, 4)}
    poly = build_polyhedron(supp)
    rng = np.random.default_rng(2)
    inside = (3, 3)  # not on any compact face
    on_face = (2, 2)  # on the edge between the vertices
    ratios_inside = []
    ratios_face = []
    for radius in (1e-1, 1e-2, 1e-3, 1e-4):
        pts = rng.uniform(-1, 1, size=(2500, 2))
        pts = radius * pts / np.max(np.abs(pts), axis=1)[:, None]
        for label, exp, sink in (
            ("in", inside, ratios_inside), ("face", on_face, ratios_face)
        ):
            vals = np.abs(np.prod(pts ** np.array(exp), axis=1))
            g = np.array([g_gamma_eval(poly, tuple(p)) for p in pts])
            sink.append(float(np.max(vals / g)))
    assert all(r <= 1.0 + 1e-9 for r in ratios_face)
    assert all(b < a for a, b in zip(ratios_inside, ratios_inside[1:]))
    assert ratios_inside[-1] < 1e-3
