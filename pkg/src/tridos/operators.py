"""Decoration-driven local operators: walk Laplacian, magnetic Laplacian,
and finite-range local rules keyed by ball isomorphism classes.

Operator data lives on dart decorations under a fixed 4-coordinate schema:

    coord 0: w      vertex weight, > 0, constant over a vertex's out-darts
    coord 1: wbar   edge weight, symmetric under dart reversal
    coord 2: V      potential, constant over a vertex's out-darts
    coord 3: alpha  magnetic phase, antisymmetric under dart reversal

Complexes whose decorations have any other width — none at all, or
statistical edge marks — fall back to the default schema w = degree,
wbar = 1, V = 0, alpha = 0, which makes the Laplacian the simple-walk
generator of the underlying skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Triangulation, ball, build_triangulation
from .errors import MissingBallClass, NonpositiveWeight, SchemaViolation
from .iso import CanonicalCode, _combined, _traverse

_SCHEMA_DIM = 4
_TOL = 1e-12


@dataclass(frozen=True)
class DecorationSchema:
    """Accessor for (w, wbar, V, alpha) on a triangulation's darts.

    Only 4-coordinate decorations carry operator data. Every other
    dimension — including statistical edge marks of unrelated width — reads
    as the default schema (w = degree, wbar = 1, V = 0, alpha = 0), so the
    walk operators of a marked ensemble match its unmarked skeleton.
    validate() is the strict check: it accepts only dimension 0 or a
    consistent dimension 4.
    """

    def carries_operator_data(self, T: Triangulation) -> bool:
        return T.decoration_dim == _SCHEMA_DIM

    def validate(self, T: Triangulation) -> None:
        """Raise SchemaViolation naming every offending dart."""
        if T.decoration_dim == 0:
            return
        bad = []
        if T.decoration_dim != _SCHEMA_DIM:
            raise SchemaViolation(
                f"schema needs {_SCHEMA_DIM} decoration coordinates, "
                f"got {T.decoration_dim}", darts=T.darts)
        for v in T.vertices:
            outs = [(v, u) for u in T.adjacency[v]]
            w0 = T.decorations[outs[0]][0]
            V0 = T.decorations[outs[0]][2]
            for d in outs:
                vec = T.decorations[d]
                if vec[0] <= 0:
                    bad.append(d)
                elif abs(vec[0] - w0) > _TOL or abs(vec[2] - V0) > _TOL:
                    bad.append(d)
        for (u, v) in T.edges:
            a = T.decorations[(u, v)]
            b = T.decorations[(v, u)]
            if abs(a[1] - b[1]) > _TOL:
                bad.extend([(u, v), (v, u)])
            if abs(a[3] + b[3]) > _TOL:
                bad.extend([(u, v), (v, u)])
        if bad:
            seen = []
            for d in bad:
                if d not in seen:
                    seen.append(d)
            raise SchemaViolation(
                f"{len(seen)} darts violate the operator schema", darts=seen)

    def vertex_weight(self, T: Triangulation, v) -> float:
        if T.decoration_dim != _SCHEMA_DIM:
            return float(T.degree(v))
        return T.decorations[(v, T.adjacency[v][0])][0]

    def edge_weight(self, T: Triangulation, dart) -> float:
        if T.decoration_dim != _SCHEMA_DIM:
            return 1.0
        return T.decorations[tuple(dart)][1]

    def potential(self, T: Triangulation, v) -> float:
        if T.decoration_dim != _SCHEMA_DIM:
            return 0.0
        return T.decorations[(v, T.adjacency[v][0])][2]

    def phase(self, T: Triangulation, dart) -> float:
        if T.decoration_dim != _SCHEMA_DIM:
            return 0.0
        return T.decorations[tuple(dart)][3]


DEFAULT_SCHEMA = DecorationSchema()


def schema_decorations(T: Triangulation, w=None, wbar=None, V=None,
                       alpha=None) -> Triangulation:
    """Decorated copy of T carrying explicit operator data.

    w, V: dict vertex -> value (defaults: degree, 0). wbar: dict undirected
    edge (u,v) u<v -> value (default 1). alpha: dict directed dart -> value,
    stored antisymmetrically (default 0).
    """
    w = dict(w or {})
    V = dict(V or {})
    wbar = dict(wbar or {})
    alpha = dict(alpha or {})
    deco = {}
    for (u, v) in T.darts:
        e = (u, v) if u < v else (v, u)
        a = alpha.get((u, v))
        if a is None:
            back = alpha.get((v, u))
            a = -back if back is not None else 0.0
        deco[(u, v)] = (float(w.get(u, T.degree(u))),
                        float(wbar.get(e, 1.0)),
                        float(V.get(u, 0.0)),
                        float(a))
    return build_triangulation(T.faces, deco, degree_bound=T.degree_bound)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Matrix of a local operator in the triangulation's vertex order.

    weights holds the vertex weights w making the operator self-adjoint in
    the weighted inner product <f, g>_w = sum w(x) f(x) conj(g(x)).
    """

    tri: Triangulation
    matrix: np.ndarray
    weights: np.ndarray

    @property
    def vertices(self):
        return self.tri.vertices

    def index(self, v) -> int:
        return self.tri.vertex_index[v]


def laplacian(T: Triangulation, schema: DecorationSchema = DEFAULT_SCHEMA) -> OperatorMatrix:
    """Walk Laplacian: off-diagonal wbar(x,y)/w(x), diagonal minus the row
    sum, so rows sum to zero exactly."""
    if schema.carries_operator_data(T):
        schema.validate(T)
    n = T.n_vertices
    M = np.zeros((n, n))
    wvec = np.array([schema.vertex_weight(T, v) for v in T.vertices])
    for v in T.vertices:
        i = T.vertex_index[v]
        acc = 0.0
        for u in T.adjacency[v]:
            val = schema.edge_weight(T, (v, u)) / wvec[i]
            M[i, T.vertex_index[u]] = val
            acc += val
        M[i, i] = -acc
    return OperatorMatrix(T, M, wvec)


def magnetic_laplacian(T: Triangulation,
                       schema: DecorationSchema = DEFAULT_SCHEMA) -> OperatorMatrix:
    """Magnetic walk operator: off-diagonal wbar e^{i alpha}/w(x), diagonal
    V(x) - 1. Self-adjoint for the w-weighted inner product."""
    if schema.carries_operator_data(T):
        schema.validate(T)
    n = T.n_vertices
    M = np.zeros((n, n), dtype=complex)
    wvec = np.array([schema.vertex_weight(T, v) for v in T.vertices])
    for v in T.vertices:
        i = T.vertex_index[v]
        for u in T.adjacency[v]:
            M[i, T.vertex_index[u]] = (
                schema.edge_weight(T, (v, u))
                * np.exp(1j * schema.phase(T, (v, u))) / wvec[i])
        M[i, i] = schema.potential(T, v) - 1.0
    return OperatorMatrix(T, M, wvec)


def symmetrized_matrix(op: OperatorMatrix) -> np.ndarray:
    """Similarity transform W^{1/2} H W^{-1/2}, an honestly self-adjoint
    matrix with the same spectrum."""
    if np.any(op.weights <= 0):
        raise NonpositiveWeight("vertex weights must be positive")
    s = np.sqrt(op.weights)
    return (s[:, None] * op.matrix) / s[None, :]


# ---------------------------------------------------------------------------
# finite-range local rules
# ---------------------------------------------------------------------------


def vertex_ball_class(T: Triangulation, v, r: int):
    """Isomorphism class of the radius-r ball at a vertex, with the aligned
    vertex order.

    Minimizes the rooted stream over the vertex's out-darts and both
    orientations (out-darts tried in rotation order, +1 before -1), so the
    returned BFS vertex order is reproducible across isomorphic balls.
    Returns (code, vertex_order).
    """
    if r < 1:
        raise ValueError("rule radius must be >= 1")
    best = None
    for d in ((v, u) for u in T.adjacency[v]):
        A = ball(T, d, r)
        for s in (1, -1):
            stream = _combined(A.tri, A.marked, s)
            key = (A.tri.n_vertices, A.tri.n_edges, A.tri.n_faces,
                   A.tri.decoration_dim) + stream
            if best is None or key < best[0]:
                _, order, _ = _traverse(A.tri, A.marked, s)
                best = (key, order)
    return CanonicalCode(("vertex-ball",) + best[0]), tuple(best[1])


@dataclass(frozen=True, eq=False)
class LocalRule:
    """Finite-range rule: one coefficient row per ball isomorphism class.

    table maps the CanonicalCode of a vertex's decorated radius-r ball to a
    row of coefficients indexed by the aligned BFS vertex order of the ball.
    Rows must be invariant under root-fixing ball automorphisms, otherwise
    the assembled operator would depend on the alignment choice.
    """

    radius: int
    table: dict

    def row_for(self, code: CanonicalCode):
        row = self.table.get(code)
        if row is None:
            raise MissingBallClass(
                f"no rule row for ball class {code.digest[:12]}", code=code)
        return row


def local_rule_matrix(T: Triangulation, rule: LocalRule,
                      schema: DecorationSchema = DEFAULT_SCHEMA) -> OperatorMatrix:
    """Assemble the operator defined by applying the rule at every vertex."""
    n = T.n_vertices
    sample = next(iter(rule.table.values()))
    M = np.zeros((n, n), dtype=np.asarray(sample).dtype)
    for v in T.vertices:
        code, order = vertex_ball_class(T, v, rule.radius)
        row = rule.row_for(code)
        if len(row) != len(order):
            raise ValueError(
                f"rule row for {code.digest[:12]} has {len(row)} entries, "
                f"ball has {len(order)} vertices")
        i = T.vertex_index[v]
        for coeff, u in zip(row, order):
            M[i, T.vertex_index[u]] += coeff
    wvec = np.array([schema.vertex_weight(T, v) for v in T.vertices])
    return OperatorMatrix(T, M, wvec)


def rule_from_operator(T: Triangulation, op: OperatorMatrix, r: int,
                       tol: float = 1e-10) -> LocalRule:
    """Read a finite-range operator back into a local rule.

    Requires the operator's rows to be supported on radius-r balls and to
    agree across vertices with isomorphic decorated balls; inconsistency
    raises ValueError (the operator is not r-local rule-driven).
    """
    table: dict = {}
    M = op.matrix
    for v in T.vertices:
        i = T.vertex_index[v]
        code, order = vertex_ball_class(T, v, r)
        inside = {T.vertex_index[u] for u in order}
        outside = [j for j in range(T.n_vertices) if j not in inside]
        if outside and np.max(np.abs(M[i, outside])) > tol:
            raise ValueError(f"row of vertex {v} reaches beyond radius {r}")
        row = tuple(M[i, T.vertex_index[u]] for u in order)
        known = table.get(code)
        if known is None:
            table[code] = row
        elif np.max(np.abs(np.array(known) - np.array(row))) > tol:
            raise ValueError(
                f"vertices with ball class {code.digest[:12]} carry "
                f"different rows; operator is not rule-driven at radius {r}")
    return LocalRule(r, table)


def laplacian_rule(T: Triangulation, r: int = 1,
                   schema: DecorationSchema = DEFAULT_SCHEMA) -> LocalRule:
    """The walk Laplacian of T expressed as a radius-r local rule."""
    return rule_from_operator(T, laplacian(T, schema), r)


def symmetrize_directional(T: Triangulation, f: dict) -> dict:
    """Average a dart function over the out-darts of each tail:
    g(x1, x2) = mean over x3 ~ x1 of f(x1, x3). Idempotent; the result
    depends only on the tail."""
    out = {}
    for v in T.vertices:
        vals = [f[(v, u)] for u in T.adjacency[v]]
        mean = sum(vals) / len(vals)
        for u in T.adjacency[v]:
            out[(v, u)] = mean
    return out
