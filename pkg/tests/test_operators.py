"""Operator schema, walk/magnetic Laplacians, and local rules."""

import math

import numpy as np
import pytest

from tridos import (
    DecorationSchema,
    DEFAULT_SCHEMA,
    LocalRule,
    MissingBallClass,
    NonpositiveWeight,
    SchemaViolation,
    build_triangulation,
    decorate_iid,
    double_grid_sphere,
    hyperbolic_sphere,
    laplacian,
    laplacian_rule,
    local_rule_matrix,
    magnetic_laplacian,
    octahedron,
    rule_from_operator,
    schema_decorations,
    symmetrize_directional,
    symmetrized_matrix,
    tetrahedron,
    vertex_ball_class,
)

from oracles import (
    MAGNETIC_TETRA_EIGS,
    TETRA_LAPLACIAN_EIGS,
    charpoly_eigenvalues,
    tetra_magnetic_matrix,
)


def _random_schema_sphere(seed=0):
    """A sphere with generic positive/symmetric/antisymmetric operator data."""
    T = double_grid_sphere(2)
    rng = np.random.default_rng(seed)
    w = {v: float(rng.uniform(0.5, 3.0)) for v in T.vertices}
    V = {v: float(rng.normal()) for v in T.vertices}
    wbar = {e: float(rng.uniform(0.2, 2.0)) for e in T.edges}
    alpha = {e: float(rng.uniform(-math.pi, math.pi)) for e in T.edges}
    return schema_decorations(T, w=w, wbar=wbar, V=V, alpha=alpha)


# ---------------------------------------------------------------------------
# schema
# ---------------------------------------------------------------------------


def test_default_schema_reads_degree_and_unit_weights():
    T = hyperbolic_sphere(1)
    s = DEFAULT_SCHEMA
    apex = max(T.vertices, key=T.degree)
    assert s.vertex_weight(T, apex) == 7.0
    assert s.edge_weight(T, T.darts[0]) == 1.0
    assert s.potential(T, apex) == 0.0
    assert s.phase(T, T.darts[0]) == 0.0


def test_schema_validate_accepts_consistent_decorations():
    DEFAULT_SCHEMA.validate(_random_schema_sphere())


def test_schema_rejects_wrong_dimension():
    T = decorate_iid(tetrahedron(), (0, 1), seed=3)
    with pytest.raises(SchemaViolation):
        DEFAULT_SCHEMA.validate(T)


def test_statistical_marks_do_not_perturb_operators():
    # Edge marks of non-schema width carry no operator data: the walk
    # Laplacian of a marked sphere equals that of its unmarked skeleton.
    T = double_grid_sphere(2)
    D = decorate_iid(T, (0, 1), seed=21)
    assert np.array_equal(laplacian(D).matrix, laplacian(T).matrix)
    assert np.array_equal(magnetic_laplacian(D).matrix,
                          magnetic_laplacian(T).matrix)


def test_schema_rejects_nonconstant_vertex_weight():
    T = tetrahedron()
    deco = {d: (3.0, 1.0, 0.0, 0.0) for d in T.darts}
    deco[(0, 1)] = (5.0, 1.0, 0.0, 0.0)
    bad = build_triangulation(T.faces, deco)
    with pytest.raises(SchemaViolation) as exc:
        DEFAULT_SCHEMA.validate(bad)
    assert any(d[0] == 0 for d in exc.value.darts)


def test_schema_rejects_asymmetric_edge_weight():
    T = tetrahedron()
    deco = {d: (3.0, 1.0, 0.0, 0.0) for d in T.darts}
    deco[(2, 3)] = (3.0, 4.0, 0.0, 0.0)
    bad = build_triangulation(T.faces, deco)
    with pytest.raises(SchemaViolation) as exc:
        DEFAULT_SCHEMA.validate(bad)
    assert (2, 3) in exc.value.darts and (3, 2) in exc.value.darts


def test_schema_rejects_symmetric_phase():
    T = tetrahedron()
    deco = {d: (3.0, 1.0, 0.0, 0.0) for d in T.darts}
    deco[(0, 1)] = (3.0, 1.0, 0.0, 0.7)
    deco[(1, 0)] = (3.0, 1.0, 0.0, 0.7)  # should be -0.7
    bad = build_triangulation(T.faces, deco)
    with pytest.raises(SchemaViolation):
        DEFAULT_SCHEMA.validate(bad)


def test_schema_rejects_nonpositive_vertex_weight():
    T = tetrahedron()
    deco = {d: (-1.0, 1.0, 0.0, 0.0) for d in T.darts}
    bad = build_triangulation(T.faces, deco)
    with pytest.raises(SchemaViolation):
        DEFAULT_SCHEMA.validate(bad)


def test_schema_decorations_round_trip():
    T = _random_schema_sphere(seed=5)
    s = DEFAULT_SCHEMA
    for (u, v) in T.edges:
        assert abs(s.edge_weight(T, (u, v)) - s.edge_weight(T, (v, u))) <= 1e-15
        assert abs(s.phase(T, (u, v)) + s.phase(T, (v, u))) <= 1e-15
    for v in T.vertices:
        assert s.vertex_weight(T, v) > 0


# ---------------------------------------------------------------------------
# Laplacians
# ---------------------------------------------------------------------------


def test_laplacian_rows_sum_to_zero():
    for T in (tetrahedron(), double_grid_sphere(2), _random_schema_sphere()):
        L = laplacian(T)
        assert np.max(np.abs(L.matrix.sum(axis=1))) <= 1e-12


def test_default_laplacian_spectrum_lies_in_minus_two_zero():
    for T in (octahedron(), double_grid_sphere(2), hyperbolic_sphere(2)):
        eigs = np.linalg.eigvalsh(symmetrized_matrix(laplacian(T)))
        assert eigs.min() >= -2.0 - 1e-9
        assert eigs.max() <= 1e-9


def test_tetrahedron_laplacian_spectrum():
    eigs = np.linalg.eigvalsh(symmetrized_matrix(laplacian(tetrahedron())))
    assert np.allclose(eigs, TETRA_LAPLACIAN_EIGS, atol=1e-12)


def test_weighted_self_adjointness():
    T = _random_schema_sphere(seed=11)
    for op in (laplacian(T), magnetic_laplacian(T)):
        WH = op.weights[:, None] * op.matrix
        assert np.max(np.abs(WH - WH.conj().T)) <= 1e-12
        S = symmetrized_matrix(op)
        assert np.max(np.abs(S - S.conj().T)) <= 1e-12


def test_magnetic_equals_walk_laplacian_for_default_schema():
    # With alpha = V = 0 the two operators coincide when each vertex
    # weight equals the sum of its incident edge weights; the default
    # schema (w = degree, wbar = 1) satisfies that identity, so the
    # matrices agree to rounding (the diagonals are computed differently).
    T = double_grid_sphere(2)
    assert np.max(np.abs(magnetic_laplacian(T).matrix
                         - laplacian(T).matrix)) <= 1e-15


def test_magnetic_differs_from_walk_laplacian_when_weights_mismatch():
    T = tetrahedron()
    dec = schema_decorations(T, w={v: T.degree(v) + 1.0 for v in T.vertices})
    H = magnetic_laplacian(dec).matrix
    L = laplacian(dec).matrix
    off = ~np.eye(4, dtype=bool)
    assert np.max(np.abs((H - L)[off])) <= 1e-15
    assert np.min(np.abs(np.diag(H - L))) > 0.01


def test_constant_potential_shifts_spectrum():
    T = double_grid_sphere(1)
    base = np.linalg.eigvalsh(symmetrized_matrix(magnetic_laplacian(T)))
    shifted_tri = schema_decorations(T, V={v: 0.75 for v in T.vertices})
    shifted = np.linalg.eigvalsh(
        symmetrized_matrix(magnetic_laplacian(shifted_tri)))
    assert np.allclose(shifted, base + 0.75, atol=1e-12)


def test_magnetic_tetrahedron_matches_frozen_eigenvalues():
    T = schema_decorations(tetrahedron(), alpha={(0, 1): math.pi})
    eigs = np.linalg.eigvalsh(symmetrized_matrix(magnetic_laplacian(T)))
    assert np.allclose(eigs, MAGNETIC_TETRA_EIGS, atol=1e-12)


def test_magnetic_tetrahedron_matches_exact_charpoly_oracle():
    oracle = charpoly_eigenvalues(tetra_magnetic_matrix())
    T = schema_decorations(tetrahedron(), alpha={(0, 1): math.pi})
    eigs = np.linalg.eigvalsh(symmetrized_matrix(magnetic_laplacian(T)))
    assert np.allclose(eigs, oracle, atol=1e-10)


def test_symmetrized_matrix_preserves_spectrum():
    T = _random_schema_sphere(seed=2)
    H = magnetic_laplacian(T)
    sym_eigs = np.linalg.eigvalsh(symmetrized_matrix(H))
    raw_eigs = np.sort(np.linalg.eigvals(H.matrix).real)
    assert np.allclose(sym_eigs, raw_eigs, atol=1e-9)


def test_symmetrized_matrix_rejects_nonpositive_weights():
    T = tetrahedron()
    op = laplacian(T)
    broken = type(op)(op.tri, op.matrix, op.weights * -1.0)
    with pytest.raises(NonpositiveWeight):
        symmetrized_matrix(broken)


# ---------------------------------------------------------------------------
# local rules
# ---------------------------------------------------------------------------


def test_vertex_ball_class_counts():
    # Fully symmetric spheres: every vertex shares one ball class.
    for T in (tetrahedron(), octahedron()):
        codes = {vertex_ball_class(T, v, 1)[0] for v in T.vertices}
        assert len(codes) == 1
    with pytest.raises(ValueError):
        vertex_ball_class(tetrahedron(), 0, 0)


def test_laplacian_rule_reassembles_exactly():
    A2 = double_grid_sphere(2)
    rule = laplacian_rule(A2)
    M = local_rule_matrix(A2, rule)
    assert np.max(np.abs(M.matrix - laplacian(A2).matrix)) == 0.0


def test_rule_transfers_to_larger_sphere():
    # Every radius-1 ball class of the stage-3 sphere already occurs at
    # stage 2, so the extracted rule drives the larger complex too.
    rule = laplacian_rule(double_grid_sphere(2))
    A3 = double_grid_sphere(3)
    M = local_rule_matrix(A3, rule)
    assert np.max(np.abs(M.matrix - laplacian(A3).matrix)) == 0.0


def test_missing_ball_class_names_the_code():
    rule = laplacian_rule(tetrahedron())
    with pytest.raises(MissingBallClass) as exc:
        local_rule_matrix(octahedron(), rule)
    assert exc.value.code is not None
    assert exc.value.code.digest[:12] in str(exc.value)


def test_rule_from_operator_rejects_nonlocal_matrix():
    A2 = double_grid_sphere(2)
    L = laplacian(A2)
    squared = type(L)(L.tri, L.matrix @ L.matrix, L.weights)
    with pytest.raises(ValueError):
        rule_from_operator(A2, squared, 1)


def test_rule_from_operator_rejects_class_inconsistent_rows():
    A2 = double_grid_sphere(2)
    L = laplacian(A2)
    M = L.matrix.copy()
    M[0, 0] += 0.5  # vertex 0 shares its ball class with other corners
    with pytest.raises(ValueError):
        rule_from_operator(A2, type(L)(L.tri, M, L.weights), 1)


def test_rule_row_length_must_match_ball():
    T = tetrahedron()
    code, order = vertex_ball_class(T, 0, 1)
    bad = LocalRule(1, {code: (1.0,) * (len(order) + 1)})
    with pytest.raises(ValueError):
        local_rule_matrix(T, bad)


def test_decorations_split_ball_classes():
    # i.i.d. edge decorations refine the class partition: the decorated
    # sphere needs more rule rows than the undecorated one.
    T = double_grid_sphere(2)
    D = decorate_iid(T, (0, 1), seed=9)
    plain = {vertex_ball_class(T, v, 1)[0] for v in T.vertices}
    marked = {vertex_ball_class(D, v, 1)[0] for v in D.vertices}
    assert len(marked) > len(plain)


def test_symmetrize_directional_idempotent_and_tail_constant():
    T = hyperbolic_sphere(1)
    rng = np.random.default_rng(4)
    f = {d: float(rng.normal()) for d in T.darts}
    g = symmetrize_directional(T, f)
    again = symmetrize_directional(T, g)
    assert max(abs(g[d] - again[d]) for d in T.darts) <= 1e-15
    for v in T.vertices:
        vals = {round(g[(v, u)], 12) for u in T.adjacency[v]}
        assert len(vals) == 1
        mean = sum(f[(v, u)] for u in T.adjacency[v]) / T.degree(v)
        assert abs(g[(v, T.adjacency[v][0])] - mean) <= 1e-12
