"""Spectral tools for local operators: eigensolving, site-averaged traces,
integrated density of states and its jumps, compactly supported
eigenfunctions, and approximate-eigenfunction bounds.

The working frame is the symmetrized matrix S = W^{1/2} H W^{-1/2}: it is
honestly Hermitian, shares H's spectrum, and its orthonormal eigenbasis U
gives the w-orthonormal eigenvectors W^{-1/2} U of H. Site-diagonal spectral
data is read off |U[v, k]|^2, so summing over a vertex-uniform site law
turns the diagonal into exact eigenvalue counting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Patch, Triangulation, interior
from .errors import NotSelfAdjoint, TooLarge, ZeroVector
from .measures import EmpiricalMeasure, uniform_measure
from .operators import DEFAULT_SCHEMA, OperatorMatrix, laplacian, symmetrized_matrix

DENSE_LIMIT = 5000
MAX_POLY_DEGREE = 64
_RESIDUAL_TOL = 1e-9
_EIG_TIE_TOL = 1e-9
INDICATOR_FLOOR = -2.5


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Scalar function applied to eigenvalues: polynomial, energy-interval
    indicator, or arbitrary callable."""

    __test__ = False  # not a pytest class, despite the name

    kind: str
    data: object

    @classmethod
    def polynomial(cls, coeffs) -> "TestFunction":
        """Polynomial with coefficients in increasing degree order."""
        coeffs = tuple(float(c) for c in coeffs)
        if len(coeffs) - 1 > MAX_POLY_DEGREE:
            raise ValueError(
                f"polynomial degree {len(coeffs) - 1} exceeds "
                f"{MAX_POLY_DEGREE}")
        if not coeffs:
            raise ValueError("need at least one coefficient")
        return cls("polynomial", coeffs)

    @classmethod
    def indicator(cls, t: float, lower: float = INDICATOR_FLOOR) -> "TestFunction":
        """Indicator of the energy interval [lower, t]."""
        return cls("indicator", (float(lower), float(t)))

    @classmethod
    def from_callable(cls, fn) -> "TestFunction":
        return cls("callable", fn)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "polynomial":
            return np.polynomial.polynomial.polyval(x, np.array(self.data))
        if self.kind == "indicator":
            lo, hi = self.data
            return ((x >= lo - 1e-12) & (x <= hi + 1e-12)).astype(float)
        return np.asarray(self.data(x), dtype=float)


# ---------------------------------------------------------------------------
# eigensolving
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues (ascending) and the orthonormal eigenbasis of the
    symmetrized operator; window marks a partial solve."""

    tri: Triangulation
    eigenvalues: np.ndarray
    basis: np.ndarray
    weights: np.ndarray
    window: tuple | None = None

    @property
    def w_vectors(self) -> np.ndarray:
        """Columns are eigenvectors of the original operator, orthonormal
        for the w-weighted inner product."""
        return self.basis / np.sqrt(self.weights)[:, None]

    def site_diagonal(self, func: TestFunction) -> np.ndarray:
        """Per-vertex diagonal of func(operator) in the symmetrized frame."""
        vals = func(self.eigenvalues)
        return (np.abs(self.basis) ** 2) @ vals

    def multiplicity(self, t: float, tol: float = _EIG_TIE_TOL) -> int:
        return int(np.sum(np.abs(self.eigenvalues - t) <= tol))


def _check_self_adjoint(op: OperatorMatrix) -> None:
    WH = op.weights[:, None] * op.matrix
    scale = max(1.0, float(np.max(np.abs(WH))))
    if np.max(np.abs(WH - WH.conj().T)) > 1e-10 * scale:
        raise NotSelfAdjoint(
            "operator is not self-adjoint for its vertex weights")


def eigensolve(op: OperatorMatrix) -> Spectrum:
    """Full dense eigendecomposition with a residual guarantee.

    Refuses problems above DENSE_LIMIT vertices; use eigensolve_window for
    those. Every eigenpair satisfies |S u - lambda u| <= 1e-9 * |S|.
    """
    n = op.matrix.shape[0]
    if n > DENSE_LIMIT:
        raise TooLarge(
            f"{n} vertices exceeds the dense limit {DENSE_LIMIT}; "
            "use eigensolve_window")
    _check_self_adjoint(op)
    S = symmetrized_matrix(op)
    vals, vecs = np.linalg.eigh(S)
    norm = max(1.0, float(np.max(np.abs(vals))) if n else 1.0)
    residual = np.max(np.abs(S @ vecs - vecs * vals[None, :]))
    if residual > _RESIDUAL_TOL * norm:
        raise ArithmeticError(
            f"eigensolver residual {residual:.3e} exceeds tolerance")
    return Spectrum(op.tri, vals, vecs, op.weights)


def eigensolve_window(op: OperatorMatrix, lo: float, hi: float) -> Spectrum:
    """Eigenpairs with eigenvalue in [lo, hi].

    Small problems fall through to the dense path and filter; large ones
    use sparse shift-invert iteration around the window center, growing the
    subspace until the window is exhausted.
    """
    if hi < lo:
        raise ValueError("empty window")
    n = op.matrix.shape[0]
    if n <= DENSE_LIMIT:
        full = eigensolve(op)
        keep = (full.eigenvalues >= lo - 1e-12) & (full.eigenvalues <= hi + 1e-12)
        return Spectrum(op.tri, full.eigenvalues[keep], full.basis[:, keep],
                        op.weights, window=(lo, hi))
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    _check_self_adjoint(op)
    S = sp.csr_matrix(symmetrized_matrix(op))
    sigma = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    k = min(32, n - 2)
    while True:
        vals, vecs = spla.eigsh(S, k=k, sigma=sigma, which="LM")
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        spread = np.max(np.abs(vals - sigma))
        if spread > half or k >= n - 2:
            break
        k = min(2 * k, n - 2)
    keep = (vals >= lo - 1e-12) & (vals <= hi + 1e-12)
    vals, vecs = vals[keep], vecs[:, keep]
    norm1 = spla.norm(S, 1)
    residual = (np.max(np.abs(S @ vecs - vecs * vals[None, :]))
                if vals.size else 0.0)
    if residual > _RESIDUAL_TOL * max(1.0, norm1):
        raise ArithmeticError(
            f"windowed eigensolver residual {residual:.3e} too large")
    return Spectrum(op.tri, vals, vecs, op.weights, window=(lo, hi))


# ---------------------------------------------------------------------------
# site-averaged traces and the integrated density of states
# ---------------------------------------------------------------------------


def _vertex_masses(m: EmpiricalMeasure):
    """Group an empirical measure's root mass by sphere and root vertex."""
    grouped = {}
    for pt, w in m.atoms:
        key = id(pt.tri)
        if key not in grouped:
            grouped[key] = (pt.tri, {})
        grouped[key][1][pt.root[0]] = grouped[key][1].get(pt.root[0], 0.0) + w
    return list(grouped.values())


def _as_measure(source, mode: str) -> EmpiricalMeasure:
    if isinstance(source, EmpiricalMeasure):
        return source
    if isinstance(source, Triangulation):
        return uniform_measure([source], mode=mode)
    raise TypeError(f"expected a measure or triangulation, got {type(source)}")


_spectrum_cache: dict = {}


def _spectrum_for(T: Triangulation, operator) -> Spectrum:
    key = (id(T), id(operator))
    hit = _spectrum_cache.get(key)
    if hit is None:
        op = operator(T) if callable(operator) else operator
        hit = eigensolve(op)
        _spectrum_cache[key] = hit
    return hit


def trace_site_average(source, func: TestFunction, mode: str = "vertex-uniform",
                       operator=laplacian) -> float:
    """Site-averaged trace of func(operator) against an empirical measure.

    source is a measure (its root-vertex marginal supplies the site law) or
    a single triangulation rooted per mode. operator maps a triangulation
    to an OperatorMatrix (default: walk Laplacian); each distinct sphere is
    eigensolved once.
    """
    m = _as_measure(source, mode)
    total = 0.0
    for T, masses in _vertex_masses(m):
        spec = _spectrum_for(T, operator)
        diag = spec.site_diagonal(func)
        total += sum(mass * diag[T.vertex_index[v]]
                     for v, mass in masses.items())
    return float(total)


def ids(source, energies, mode: str = "vertex-uniform",
        operator=laplacian) -> np.ndarray:
    """Integrated density of states at each energy.

    N(t) is the site-averaged spectral mass at or below t, right-continuous.
    For a vertex-uniform law on one sphere this is exactly the fraction of
    eigenvalues <= t.
    """
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    m = _as_measure(source, mode)
    out = np.zeros(len(energies))
    for T, masses in _vertex_masses(m):
        spec = _spectrum_for(T, operator)
        sq = np.abs(spec.basis) ** 2
        site = np.zeros(T.n_vertices)
        for v, mass in masses.items():
            site[T.vertex_index[v]] = mass
        per_eig = site @ sq
        for i, t in enumerate(energies):
            out[i] += per_eig[spec.eigenvalues <= t + 1e-12].sum()
    return out


def ids_jump(source, t: float, mode: str = "vertex-uniform",
             operator=laplacian, tol: float = _EIG_TIE_TOL) -> float:
    """Jump of the integrated density of states at t: the site-averaged
    spectral mass of the eigenvalue cluster within tol of t."""
    m = _as_measure(source, mode)
    total = 0.0
    for T, masses in _vertex_masses(m):
        spec = _spectrum_for(T, operator)
        hit = np.abs(spec.eigenvalues - t) <= tol
        if not hit.any():
            continue
        sq = np.abs(spec.basis[:, hit]) ** 2
        per_vertex = sq.sum(axis=1)
        total += sum(mass * per_vertex[T.vertex_index[v]]
                     for v, mass in masses.items())
    return float(total)


# ---------------------------------------------------------------------------
# compactly supported eigenfunctions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CssReport:
    """Nullspace of (H - t) over functions supported in a patch interior.

    vectors are unit-norm dicts vertex -> coefficient; dimension is the
    nullspace dimension; singular_values are those of the rectangular
    constraint matrix (rows: every patch vertex; columns: interior)."""

    energy: float
    dimension: int
    vectors: tuple
    interior_vertices: tuple
    singular_values: np.ndarray


def css_search(A, t: float, hop_range: int = 1, operator=laplacian,
               cutoff: float = 1e-8) -> CssReport:
    """Compactly supported eigenfunction candidates at energy t inside A.

    A vector supported on interior(A, hop_range) satisfies the eigenvalue
    equation on any host containing A wherever (H - t) applied to its
    zero-extension is forced to vanish: at rows inside A the assembled
    entries are the host's, and outside A the function is out of reach. The
    boundary rows carry zero right-hand sides, so their per-row weight
    normalization cannot change the solution set. The nullspace is cut at
    singular values below cutoff * sigma_max.
    """
    tri = A.tri if isinstance(A, Patch) else A
    if tri is None:
        raise ValueError("degenerate patch has no interior")
    inner = sorted(interior(tri, hop_range), key=tri.vertex_index.get)
    if not inner:
        return CssReport(t, 0, (), (), np.zeros(0))
    op = operator(tri) if callable(operator) else operator
    H = op.matrix
    n = tri.n_vertices
    cols = [tri.vertex_index[v] for v in inner]
    M = (H - t * np.eye(n, dtype=H.dtype))[:, cols]
    U, sing, Vh = np.linalg.svd(M, full_matrices=True)
    smax = sing[0] if sing.size else 0.0
    rank = int(np.sum(sing > cutoff * max(smax, 1e-300)))
    dim = len(cols) - rank
    vectors = []
    for row in Vh[rank:]:
        vec = row.conj()
        lead = next(x for x in vec if abs(x) > 1e-12)
        vec = vec * (abs(lead) / lead)
        if np.max(np.abs(vec.imag)) < 1e-12:
            vec = vec.real
        vectors.append({v: vec[i] for i, v in enumerate(inner)
                        if abs(vec[i]) > 0})
    return CssReport(t, dim, tuple(vectors), tuple(inner), sing)


def css_verify(host: Triangulation, assignment: dict, t: float,
               operator=laplacian) -> float:
    """Relative residual |(H - t) f| / |f| on a host, f zero-extended.

    assignment maps host vertices to coefficients; a compactly supported
    eigenfunction certificate should come out at solver precision.
    """
    op = operator(host) if callable(operator) else operator
    f = np.zeros(host.n_vertices, dtype=complex)
    for v, c in assignment.items():
        f[host.vertex_index[v]] = c
    nf = np.linalg.norm(f)
    if nf == 0.0:
        raise ZeroVector("assignment is identically zero")
    return float(np.linalg.norm((op.matrix - t * np.eye(host.n_vertices)) @ f)
                 / nf)


# ---------------------------------------------------------------------------
# approximate eigenfunctions and spectral localization
# ---------------------------------------------------------------------------


def _w_norm(weights: np.ndarray, vec: np.ndarray) -> float:
    return float(np.sqrt(np.sum(weights * np.abs(vec) ** 2)))


def _as_vector(T: Triangulation, f) -> np.ndarray:
    if isinstance(f, dict):
        out = np.zeros(T.n_vertices, dtype=complex)
        for v, c in f.items():
            out[T.vertex_index[v]] = c
        return out
    return np.asarray(f, dtype=complex)


def approx_eigen_check(op: OperatorMatrix, f, xi: float) -> float:
    """Eigenvalue defect zeta = |(H - xi) f|_w / |f|_w.

    Self-adjointness puts an eigenvalue of H within zeta of xi."""
    vec = _as_vector(op.tri, f)
    nf = _w_norm(op.weights, vec)
    if nf == 0.0:
        raise ZeroVector("test vector is identically zero")
    defect = _w_norm(op.weights, op.matrix @ vec - xi * vec)
    return defect / nf


@dataclass(frozen=True, eq=False)
class LocalizationReport:
    """How much of a vector's spectral mass sits near a target energy.

    tail_mass is the |f|_w^2-fraction carried by eigenvalues outside
    [xi - eta, xi + eta]; the defect bounds it by (defect / eta)^2."""

    xi: float
    eta: float
    defect: float
    mass_within: float
    tail_mass: float

    @property
    def tail_bound(self) -> float:
        return (self.defect / self.eta) ** 2


def spectral_localization(op: OperatorMatrix, f, xi: float,
                          eta: float) -> LocalizationReport:
    """Exact spectral-mass split of f around xi, with its defect bound."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    vec = _as_vector(op.tri, f)
    nf = _w_norm(op.weights, vec)
    if nf == 0.0:
        raise ZeroVector("test vector is identically zero")
    spec = eigensolve(op)
    coeffs = spec.basis.conj().T @ (np.sqrt(op.weights) * vec)
    mass = np.abs(coeffs) ** 2 / (nf ** 2)
    near = np.abs(spec.eigenvalues - xi) <= eta
    defect = approx_eigen_check(op, vec, xi)
    return LocalizationReport(xi, eta, defect,
                              float(mass[near].sum()),
                              float(mass[~near].sum()))


def shifted_defect_bound(op: OperatorMatrix, f, g, xi: float) -> tuple:
    """Defect of g versus the bound defect(f) + |H - xi| * |f - g|_w / |g|_w.

    The operator norm of the SHIFTED matrix H - xi appears in the bound;
    replacing it by |H| is not valid when xi is far from the spectrum's
    center. Returns (defect_of_g, bound).
    """
    vf = _as_vector(op.tri, f)
    vg = _as_vector(op.tri, g)
    ng = _w_norm(op.weights, vg)
    if ng == 0.0:
        raise ZeroVector("comparison vector is identically zero")
    spec = eigensolve(op)
    shifted_norm = float(np.max(np.abs(spec.eigenvalues - xi)))
    raw_f = _w_norm(op.weights, op.matrix @ vf - xi * vf)
    bound = (raw_f + shifted_norm * _w_norm(op.weights, vf - vg)) / ng
    actual = approx_eigen_check(op, vg, xi)
    return actual, bound
