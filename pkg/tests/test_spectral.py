"""Eigensolving, traces, IDS and jumps, compactly supported eigenfunctions,
approximate-eigenfunction bounds."""

import math

import numpy as np
import pytest

from tridos import (
    NotSelfAdjoint,
    OperatorMatrix,
    PointedTriangulation,
    TestFunction,
    TooLarge,
    ZeroVector,
    approx_eigen_check,
    capped_cylinder_sphere,
    css_search,
    css_verify,
    double_grid_sphere,
    eigensolve,
    eigensolve_window,
    embed,
    ids,
    ids_jump,
    interior,
    laplacian,
    octahedron,
    ring_annulus,
    schema_decorations,
    shifted_defect_bound,
    spectral_localization,
    symmetrized_matrix,
    tetrahedron,
    trace_site_average,
    uniform_measure,
)

from oracles import TETRA_LAPLACIAN_EIGS


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------


def test_polynomial_test_function():
    p = TestFunction.polynomial([1.0, 0.0, 2.0])  # 1 + 2 x^2
    assert np.allclose(p(np.array([0.0, 1.0, -2.0])), [1.0, 3.0, 9.0])


def test_polynomial_degree_cap():
    TestFunction.polynomial([1.0] * 65)  # degree 64 is allowed
    with pytest.raises(ValueError):
        TestFunction.polynomial([1.0] * 66)
    with pytest.raises(ValueError):
        TestFunction.polynomial([])


def test_indicator_test_function():
    f = TestFunction.indicator(-1.0)
    assert np.allclose(f(np.array([-2.6, -2.5, -1.0, -0.999])),
                       [0.0, 1.0, 1.0, 0.0])


def test_callable_test_function():
    f = TestFunction.from_callable(lambda x: np.exp(x))
    assert np.allclose(f(np.array([0.0, 1.0])), [1.0, math.e])


# ---------------------------------------------------------------------------
# eigensolving
# ---------------------------------------------------------------------------


def test_eigensolve_tetrahedron():
    spec = eigensolve(laplacian(tetrahedron()))
    assert np.allclose(spec.eigenvalues, TETRA_LAPLACIAN_EIGS, atol=1e-12)


def test_eigensolve_w_orthonormal_vectors():
    T = schema_decorations(double_grid_sphere(1),
                           w={v: 1.5 for v in double_grid_sphere(1).vertices})
    op = laplacian(T)
    spec = eigensolve(op)
    V = spec.w_vectors
    gram = (V.conj().T * spec.weights) @ V
    assert np.max(np.abs(gram - np.eye(len(spec.eigenvalues)))) <= 1e-10
    # and each column is an eigenvector of the raw operator
    res = op.matrix @ V - V * spec.eigenvalues[None, :]
    assert np.max(np.abs(res)) <= 1e-9


def test_eigensolve_rejects_non_self_adjoint():
    T = tetrahedron()
    M = np.zeros((4, 4))
    M[0, 1] = 1.0  # no matching transpose entry
    with pytest.raises(NotSelfAdjoint):
        eigensolve(OperatorMatrix(T, M, np.ones(4)))


def test_eigensolve_rejects_oversized_problems():
    T = tetrahedron()
    n = 5001
    with pytest.raises(TooLarge):
        eigensolve(OperatorMatrix(T, np.zeros((n, n)), np.ones(n)))


def test_window_matches_dense_filter():
    op = laplacian(capped_cylinder_sphere())
    full = eigensolve(op)
    win = eigensolve_window(op, -1.35, -1.30)
    expect = full.eigenvalues[(full.eigenvalues >= -1.35)
                              & (full.eigenvalues <= -1.30)]
    assert np.allclose(win.eigenvalues, expect, atol=1e-12)
    assert win.window == (-1.35, -1.30)
    with pytest.raises(ValueError):
        eigensolve_window(op, 1.0, 0.0)


@pytest.mark.slow
def test_window_sparse_path_on_large_sphere():
    # 7778 vertices forces the shift-invert path; the bottom cluster at
    # -1.5 has multiplicity two.
    B = double_grid_sphere(36)
    spec = eigensolve_window(laplacian(B), -1.5002, -1.4996)
    assert B.n_vertices > 5000
    exact = np.sum(np.abs(spec.eigenvalues + 1.5) <= 1e-8)
    assert exact == 2
    assert np.all(spec.eigenvalues >= -1.5002 - 1e-9)
    assert np.all(spec.eigenvalues <= -1.4996 + 1e-9)


# ---------------------------------------------------------------------------
# traces and IDS
# ---------------------------------------------------------------------------


def test_trace_identity_and_constant():
    T = tetrahedron()
    ident = TestFunction.polynomial([0.0, 1.0])
    one = TestFunction.polynomial([1.0])
    assert abs(trace_site_average(T, ident) - (-1.0)) <= 1e-12
    assert abs(trace_site_average(T, one) - 1.0) <= 1e-12


def test_trace_polynomial_matches_matrix_powers():
    for T in (tetrahedron(), double_grid_sphere(2)):
        p = TestFunction.polynomial([0.5, -1.0, 2.0, 0.25])
        L = symmetrized_matrix(laplacian(T))
        n = T.n_vertices
        M = (0.5 * np.eye(n) - L + 2.0 * L @ L + 0.25 * L @ L @ L)
        assert abs(trace_site_average(T, p) - np.trace(M) / n) <= 1e-10


def test_trace_modes_agree_on_regular_sphere():
    O = octahedron()
    p = TestFunction.polynomial([0.0, 0.0, 1.0])
    a = trace_site_average(O, p, mode="vertex-uniform")
    b = trace_site_average(O, p, mode="dart-uniform")
    assert abs(a - b) <= 1e-12


def test_trace_dart_uniform_weights_by_degree():
    # On one sphere the dart-uniform site law weighs vertex v by
    # deg(v)/(2E); check against a direct computation.
    T = double_grid_sphere(1)
    p = TestFunction.polynomial([0.0, 0.0, 1.0])
    spec = eigensolve(laplacian(T))
    diag = spec.site_diagonal(p)
    manual = sum(T.degree(v) / (2 * T.n_edges) * diag[T.vertex_index[v]]
                 for v in T.vertices)
    got = trace_site_average(T, p, mode="dart-uniform")
    assert abs(got - manual) <= 1e-12


def test_ids_counts_eigenvalue_fractions():
    T = tetrahedron()
    vals = ids(T, [-2.0, -4 / 3, -0.5, 0.0])
    assert np.allclose(vals, [0.0, 0.75, 0.75, 1.0], atol=1e-12)


def test_ids_monotone_and_bounded():
    T = double_grid_sphere(3)
    ts = np.linspace(-2.0, 0.1, 40)
    vals = ids(T, ts)
    assert np.all(np.diff(vals) >= -1e-12)
    assert vals[0] == 0.0
    assert abs(vals[-1] - 1.0) <= 1e-12


def test_ids_over_measure_averages_spheres():
    A, B = tetrahedron(), octahedron()
    m = uniform_measure([A, B], mode="vertex-uniform")
    vals = ids(m, [-1.0])
    expect = 0.5 * (ids(A, [-1.0])[0] + ids(B, [-1.0])[0])
    assert abs(vals[0] - expect) <= 1e-12


def test_ids_jump_tetrahedron():
    assert abs(ids_jump(tetrahedron(), -4 / 3) - 0.75) <= 1e-12
    assert ids_jump(tetrahedron(), -0.7) == 0.0


def test_ids_jump_capped_cylinder_is_three_over_v():
    C = capped_cylinder_sphere()
    assert abs(ids_jump(C, -4 / 3) - 3 / 22) <= 1e-12


# ---------------------------------------------------------------------------
# compactly supported eigenfunctions
# ---------------------------------------------------------------------------


def test_css_ring_annulus_is_one_dimensional():
    A = ring_annulus(3, 4)
    rep = css_search(A, -4 / 3)
    assert rep.dimension == 1
    vec = rep.vectors[0]
    ring = sorted(vec)
    assert ring == sorted(interior(A.tri, 1))
    vals = [vec[v] for v in ring]
    assert np.allclose(np.abs(vals), 0.5, atol=1e-9)
    assert abs(sum(vals)) <= 1e-9  # alternating signs


def test_css_vector_certifies_globally_after_embedding():
    A = ring_annulus(3, 4)
    rep = css_search(A, -4 / 3)
    C = capped_cylinder_sphere()
    emb = embed(A, PointedTriangulation(C, A.marked))
    assert emb is not None
    padded = {emb.vertex_map[v]: c for v, c in rep.vectors[0].items()}
    assert css_verify(C, padded, -4 / 3) <= 1e-12


def test_css_on_closed_sphere_recovers_full_eigenspace():
    C = capped_cylinder_sphere()
    rep = css_search(C, -4 / 3)
    assert rep.dimension == 3
    for vec in rep.vectors:
        assert css_verify(C, vec, -4 / 3) <= 1e-9


def test_css_empty_at_non_eigenvalue():
    rep = css_search(ring_annulus(3, 4), -0.1234)
    assert rep.dimension == 0
    assert rep.vectors == ()


def test_css_hop_range_two_with_squared_operator():
    A = ring_annulus(5, 4)

    def squared(T):
        L = laplacian(T)
        return OperatorMatrix(T, L.matrix @ L.matrix, L.weights)

    rep = css_search(A, 16 / 9, hop_range=2, operator=squared)
    assert rep.dimension == 1
    assert sorted(rep.vectors[0]) == sorted(interior(A.tri, 2))


def test_css_verify_rejects_zero_assignment():
    with pytest.raises(ZeroVector):
        css_verify(tetrahedron(), {0: 0.0}, -1.0)


# ---------------------------------------------------------------------------
# approximate eigenfunctions
# ---------------------------------------------------------------------------


def test_defect_zero_for_exact_eigenvector():
    op = laplacian(capped_cylinder_sphere())
    spec = eigensolve(op)
    f = spec.w_vectors[:, 5]
    assert approx_eigen_check(op, f, spec.eigenvalues[5]) <= 1e-9


def test_defect_formula_for_two_mode_mixture():
    op = laplacian(capped_cylinder_sphere())
    spec = eigensolve(op)
    lam = spec.eigenvalues
    eps = 0.01
    f = spec.w_vectors[:, 0] + eps * spec.w_vectors[:, -1]
    zeta = approx_eigen_check(op, f, lam[0])
    expect = eps * abs(lam[-1] - lam[0]) / math.sqrt(1 + eps ** 2)
    assert abs(zeta - expect) <= 1e-10


def test_defect_bounds_distance_to_spectrum():
    op = laplacian(double_grid_sphere(2))
    spec = eigensolve(op)
    rng = np.random.default_rng(17)
    for _ in range(25):
        f = rng.normal(size=op.matrix.shape[0])
        xi = rng.uniform(-2.0, 0.5)
        zeta = approx_eigen_check(op, f, xi)
        dist = np.min(np.abs(spec.eigenvalues - xi))
        assert dist <= zeta + 1e-9


def test_defect_rejects_zero_vector():
    op = laplacian(tetrahedron())
    with pytest.raises(ZeroVector):
        approx_eigen_check(op, np.zeros(4), -1.0)


def test_localization_masses_split_and_obey_bound():
    op = laplacian(double_grid_sphere(2))
    rng = np.random.default_rng(3)
    for _ in range(25):
        f = rng.normal(size=op.matrix.shape[0])
        xi = rng.uniform(-1.6, 0.0)
        rep = spectral_localization(op, f, xi, 0.2)
        assert abs(rep.mass_within + rep.tail_mass - 1.0) <= 1e-9
        assert rep.tail_mass <= rep.tail_bound + 1e-9


def test_localization_concentrates_for_near_eigenvectors():
    op = laplacian(capped_cylinder_sphere())
    spec = eigensolve(op)
    f = spec.w_vectors[:, 2] + 0.001 * spec.w_vectors[:, -1]
    rep = spectral_localization(op, f, spec.eigenvalues[2], 0.05)
    assert rep.mass_within >= 1.0 - 1e-5
    with pytest.raises(ValueError):
        spectral_localization(op, f, 0.0, -1.0)


def test_shifted_defect_bound_holds_where_unshifted_fails():
    # Diagonal operator with spectrum {-1, 0, 0, 1}: for xi = 1 the valid
    # perturbation bound must use |H - xi| = 2; the naive |H| = 1 version
    # undershoots the true defect.
    T = tetrahedron()
    H = np.diag([-1.0, 1.0, 0.0, 0.0])
    op = OperatorMatrix(T, H, np.ones(4))
    eps = 0.3
    f = np.array([0.0, 1.0, 0.0, 0.0])
    g = f + np.array([eps, 0.0, 0.0, 0.0])
    actual, bound = shifted_defect_bound(op, f, g, 1.0)
    assert actual <= bound + 1e-12
    norm_h = 1.0  # max |eigenvalue of H|
    naive = (0.0 + norm_h * eps) / np.linalg.norm(g)
    assert actual > naive + 0.05


def test_shifted_defect_bound_random_vectors():
    op = laplacian(double_grid_sphere(2))
    rng = np.random.default_rng(8)
    n = op.matrix.shape[0]
    for _ in range(25):
        f = rng.normal(size=n)
        g = f + 0.05 * rng.normal(size=n)
        xi = rng.uniform(-2.0, 0.5)
        actual, bound = shifted_defect_bound(op, f, g, xi)
        assert actual <= bound + 1e-9
