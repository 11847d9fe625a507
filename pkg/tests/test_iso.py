"""Rooted codes, embeddings, automorphisms, and the pointed metric."""

import math
import random

import pytest

import tridos as td
from oracles import automorphism_count_slow, delta_hat_slow, root_isomorphisms


def _relabel(T, perm):
    faces = [(perm[a], perm[b], perm[c]) for (a, b, c) in T.faces]
    deco = None
    if T.decoration_dim:
        deco = {(perm[u], perm[v]): vec for (u, v), vec in T.decorations.items()}
    return td.build_triangulation(faces, deco, degree_bound=T.degree_bound)


def _random_perm(T, seed):
    rng = random.Random(seed)
    vs = list(T.vertices)
    img = vs[:]
    rng.shuffle(img)
    return dict(zip(vs, img))


# -- canonical codes ---------------------------------------------------------


def test_code_is_label_independent():
    for seed in range(5):
        T = td.hyperbolic_sphere(1)
        perm = _random_perm(T, seed)
        S = _relabel(T, perm)
        x = (0, 1)
        y = (perm[0], perm[1])
        for r in (0, 1, 2, 3):
            assert td.canonical_code(T, x, r) == td.canonical_code(S, y, r)


def test_code_distinguishes_degrees():
    a1 = td.double_grid_sphere(1)
    Th1 = td.hyperbolic_sphere(1)
    x = (0, a1.adjacency[0][0])
    assert td.canonical_code(a1, x, 1) != td.canonical_code(Th1, (0, 1), 1)


def test_zero_ball_codes_always_agree():
    a1 = td.double_grid_sphere(1)
    D = td.decorate_iid(a1, (0, 1), seed=1)
    assert td.canonical_code(a1, (0, a1.adjacency[0][0]), 0) == \
        td.canonical_code(D, (1, D.adjacency[1][0]), 0)


def test_code_sees_decorations():
    T = td.tetrahedron()
    flat = {d: (0.0,) for d in T.darts}
    D0 = td.build_triangulation(T.faces, flat)
    D1 = td.build_triangulation(T.faces, {**flat, (0, 1): (1.0,), (1, 0): (1.0,)})
    assert td.canonical_code(D0, (0, 1), 1) != td.canonical_code(D1, (0, 1), 1)
    assert td.canonical_code(D0, (0, 1), 1, with_decorations=False) == \
        td.canonical_code(D1, (0, 1), 1, with_decorations=False)


def test_code_equality_iff_embeddings_both_ways():
    # every root dart on a small mixed-degree sphere and a second sphere
    hosts = [td.double_grid_sphere(1), td.capped_cylinder_sphere()]
    pts = [(T, d) for T in hosts for d in T.darts[::5]]
    r = 2
    for (T, x) in pts:
        for (S, y) in pts:
            same = td.canonical_code(T, x, r) == td.canonical_code(S, y, r)
            fwd = td.embed(td.ball(T, x, r), td.PointedTriangulation(S, y))
            bwd = td.embed(td.ball(S, y, r), td.PointedTriangulation(T, x))
            assert same == (fwd is not None and bwd is not None)


def test_engine_agrees_with_backtracking_oracle():
    fixtures = [
        (td.tetrahedron(), (0, 1)),
        (td.octahedron(), (0, 1)),
        (td.hyperbolic_sphere(1), (0, 1)),
        (td.double_grid_sphere(1), (0, 1)),
    ]
    for (T, x) in fixtures:
        for (S, y) in fixtures:
            oracle = root_isomorphisms(T, x, S, y)
            fast = td.canonical_code(T, x, 9) == td.canonical_code(S, y, 9)
            assert fast == bool(oracle)


# -- automorphisms ------------------------------------------------------------


def test_automorphism_counts_on_fixtures():
    assert td.automorphism_count(td.tetrahedron()) == 24
    assert td.automorphism_count(td.tetrahedron(), orientation_preserving=True) == 12
    assert td.automorphism_count(td.octahedron()) == 48
    n = td.automorphism_count(td.hyperbolic_sphere(1))
    assert n % 7 == 0 and n == 28


def test_decorations_break_symmetry():
    T = td.tetrahedron()
    flat = {d: (0.0,) for d in T.darts}
    D = td.build_triangulation(T.faces, {**flat, (0, 1): (1.0,), (1, 0): (1.0,)})
    assert td.automorphism_count(D) == 4
    assert td.automorphism_count(D, orientation_preserving=True) == 2


def test_automorphisms_match_slow_oracle():
    for T in (td.tetrahedron(), td.octahedron(), td.hyperbolic_sphere(1)):
        assert td.automorphism_count(T) == automorphism_count_slow(T)
        assert (td.automorphism_count(T, orientation_preserving=True)
                == automorphism_count_slow(T, orientation_preserving=True))


# -- embedding ----------------------------------------------------------------


def test_embed_respects_degrees():
    Th1 = td.hyperbolic_sphere(1)
    P = td.PointedTriangulation(Th1, (0, 1))
    assert td.embed(td.vertex_star(7), P) is not None
    assert td.embed(td.vertex_star(6), P) is None


def test_embed_mirror_orientation():
    T = td.tetrahedron()
    flat = {d: (0.0,) for d in T.darts}
    deco = {**flat, (0, 1): (1.0,), (1, 0): (1.0,), (1, 2): (2.0,), (2, 1): (2.0,)}
    D = td.build_triangulation(T.faces, deco)
    A = td.ball(D, (0, 1), 3)
    mirror = td.build_triangulation([(a, c, b) for (a, b, c) in T.faces], deco)
    emb = td.embed(A, td.PointedTriangulation(mirror, (0, 1)))
    assert emb is not None and emb.orientation == -1


def test_embed_checks_decorations():
    D = td.decorate_iid(td.double_grid_sphere(1), (0, 1), seed=5)
    x = (0, D.adjacency[0][0])
    A = td.ball(D, x, 1)
    assert td.embed(A, td.PointedTriangulation(D, x)) is not None
    # host with uniformly shifted decorations violates the exact constraint
    shifted = td.build_triangulation(
        D.faces, {d: (v[0] + 1.0,) for d, v in D.decorations.items()})
    assert td.embed(A, td.PointedTriangulation(shifted, x)) is None


def test_degenerate_patch_embeds_anywhere():
    T = td.tetrahedron()
    A = td.ball(T, (0, 1), 0)
    emb = td.embed(A, td.PointedTriangulation(td.octahedron(), (3, 4)))
    assert emb is not None and emb.vertex_map[0] == 3 and emb.vertex_map[1] == 4


# -- pointed metric -----------------------------------------------------------


def _pt(T, d=None):
    if d is None:
        d = (T.vertices[0], T.adjacency[T.vertices[0]][0])
    return td.PointedTriangulation(T, d)


def test_delta_hat_of_identical_points_hits_radius_cap():
    P = _pt(td.octahedron())
    assert td.delta_hat(P, P, r_max=6) == pytest.approx(math.exp(-6))


def test_delta_hat_bounded_by_one_and_monotone_in_cap():
    P = _pt(td.double_grid_sphere(1))
    Q = _pt(td.hyperbolic_sphere(1))
    vals = [td.delta_hat(P, Q, r_max=r) for r in range(1, 8)]
    assert all(v <= 1.0 + 1e-15 for v in vals)
    assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))


def test_delta_symmetric_exactly():
    pts = [_pt(td.double_grid_sphere(1)), _pt(td.hyperbolic_sphere(1)),
           _pt(td.octahedron()), _pt(td.capped_cylinder_sphere())]
    for P in pts:
        for Q in pts:
            assert td.delta(P, Q) == td.delta(Q, P)


def test_unrelated_points_fall_back_to_one():
    P = _pt(td.double_grid_sphere(1))
    Q = _pt(td.hyperbolic_sphere(1))
    d = td.delta_hat_detail(P, Q)
    assert d.value == 1.0 and d.match_radius == 0


def test_cross_dimension_points_fall_back_to_one():
    T = td.double_grid_sphere(1)
    D = td.decorate_iid(T, (0, 1), seed=2)
    x = (0, T.adjacency[0][0])
    assert td.delta_hat(_pt(T, x), _pt(D, x)) == 1.0


def test_decoration_defect_drives_value():
    T = td.octahedron()
    a = td.build_triangulation(T.faces, {d: (0.0,) for d in T.darts})
    b = td.build_triangulation(T.faces, {d: (0.25,) for d in T.darts})
    det = td.delta_hat_detail(_pt(a), _pt(b), r_max=8)
    # structure matches at every radius; defect 0.25 beats e^-1 but caps value
    assert det.value == pytest.approx(0.25)
    assert det.defect == pytest.approx(0.25)


def test_delta_hat_matches_bruteforce_oracle():
    fixtures = [
        _pt(td.tetrahedron()),
        _pt(td.octahedron()),
        _pt(td.double_grid_sphere(1)),
        _pt(td.hyperbolic_sphere(1)),
        _pt(td.decorate_iid(td.double_grid_sphere(1), (0, 1), seed=4)),
        _pt(td.decorate_iid(td.double_grid_sphere(1), (0, 1), seed=5)),
    ]
    for P in fixtures:
        for Q in fixtures:
            assert td.delta_hat(P, Q, r_max=5) == pytest.approx(
                delta_hat_slow(P, Q, r_max=5), abs=1e-12)


def test_triangle_inequality_on_sampled_triples():
    rng = random.Random(0)
    spheres = [td.tetrahedron(), td.octahedron(), td.double_grid_sphere(1),
               td.hyperbolic_sphere(1), td.capped_cylinder_sphere(),
               td.decorate_iid(td.double_grid_sphere(1), (0, 1), seed=9)]
    pts = [ _pt(T, d) for T in spheres for d in (T.darts[0], T.darts[7]) ]
    for _ in range(200):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert td.delta(P, R) <= td.delta(P, Q) + td.delta(Q, R) + 1e-12


# -- dart bundle --------------------------------------------------------------


def test_sphere_bundle_counts():
    T = td.tetrahedron()
    G = td.sphere_bundle(T)
    assert G.number_of_nodes() == 2 * T.n_edges
    # complete graph on darts: every component pair is equal-or-adjacent
    assert G.number_of_edges() == 12 * 11 // 2

    O = td.octahedron()
    GO = td.sphere_bundle(O)
    assert GO.number_of_nodes() == 2 * O.n_edges
    deg = dict(GO.degree())
    assert all(v > 0 for v in deg.values())
    # poles are non-adjacent, so darts (0,1) and (5,1)-based pairs differ
    assert not GO.has_edge((0, 1), (5, 3))
    assert GO.has_edge((0, 1), (0, 2))
