"""Rooted isomorphism, canonical codes, patch embedding, and the
pointed-triangulation metric.

The workhorse is a deterministic traversal of an oriented triangulation from
a root dart: breadth-first over vertices, and at each vertex the rotation
fan is read starting from the dart through which the vertex was discovered
(the root vertex starts at the root dart). Heads are emitted as discovery
numbers, a GAP sentinel marks the wrap position of an open boundary fan, and
END closes each vertex. Two rooted triangulations are isomorphic by an
orientation-preserving map iff their token streams agree; reading fans
against the rotation gives the mirror stream, so reflections reduce to the
same comparison. Since a dart plus an orientation freezes the whole
traversal, a rooted map has at most these two isomorphisms onto another, and
minimizing over the two streams yields a canonical code.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import networkx as nx

from .core import (
    Patch,
    PointedTriangulation,
    Triangulation,
    ball,
    neighbors,
)
from .errors import NonManifold

GAP = -2
END = -3
SEP = -4


def _boundary_vertices(T: Triangulation) -> frozenset:
    return frozenset(v for d in T.boundary_darts for v in d)


def _traverse(T: Triangulation, root, orientation: int):
    """Token stream, vertex discovery order, and dart order from a root dart.

    orientation +1 reads each fan along the rotation, -1 against it. The
    stream lists, per vertex in discovery order, the discovery numbers of
    the fan heads (GAP at an open fan's wrap, END after each vertex).
    """
    on_boundary = _boundary_vertices(T)
    index = {root[0]: 0}
    order = [root[0]]
    anchor = {root[0]: root}
    darts = []
    tokens = []
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        rots = list(T.rotations[v])
        if orientation == -1:
            rots.reverse()
        i = rots.index(anchor[v])
        seq = rots[i:] + rots[:i]
        wrap = len(rots) - i  # seq position where the cyclic order wraps
        for j, d in enumerate(seq):
            if v in on_boundary and j == wrap:
                tokens.append(GAP)
            w = d[1]
            if w not in index:
                index[w] = len(order)
                order.append(w)
                anchor[w] = (w, v)
            tokens.append(index[w])
            darts.append(d)
        if v in on_boundary and wrap == len(rots):
            tokens.append(GAP)
        tokens.append(END)
    return tuple(tokens), order, darts


def _combined(T: Triangulation, root, orientation: int, with_decorations=True):
    """Structural stream plus (optionally) the dart decorations in stream order."""
    tokens, _, darts = _traverse(T, root, orientation)
    if with_decorations and T.decoration_dim:
        deco = []
        for d in darts:
            deco.extend(T.decorations[d])
        return tokens + (SEP,) + tuple(deco)
    return tokens + (SEP,)


@dataclass(frozen=True)
class CanonicalCode:
    """Hashable canonical form of a rooted patch; equal codes mean rooted
    isomorphism (decoration-exact when built with decorations)."""

    data: tuple

    @property
    def digest(self) -> str:
        return hashlib.sha256(repr(self.data).encode()).hexdigest()

    def __repr__(self):
        return f"CanonicalCode({self.digest[:12]})"


_POINT_CODE_DATA = ("point",)


def code_of_patch(A: Patch, with_decorations: bool = True) -> CanonicalCode:
    """Canonical code of a patch rooted at its marked dart.

    Degenerate (radius-0) patches all share one code: a bare direction
    carries no structure and no decoration constraint.
    """
    if A.degenerate:
        return CanonicalCode(_POINT_CODE_DATA)
    T = A.tri
    streams = [_combined(T, A.marked, s, with_decorations) for s in (1, -1)]
    head = ("ball", T.n_vertices, T.n_edges, T.n_faces,
            T.decoration_dim if with_decorations else 0)
    return CanonicalCode(head + min(streams))


def canonical_code(T: Triangulation, x, r: int,
                   with_decorations: bool = True) -> CanonicalCode:
    """Canonical code of the radius-r ball around the dart x."""
    return code_of_patch(ball(T, x, r), with_decorations)


def triangulation_code(T: Triangulation) -> bytes:
    """Root-free canonical form: minimum of the rooted streams over all
    darts and both orientations. Reflections are identified."""
    best = None
    for d in T.darts:
        for s in (1, -1):
            stream = _combined(T, d, s)
            if best is None or stream < best:
                best = stream
    head = (T.n_vertices, T.n_edges, T.n_faces, T.decoration_dim)
    return repr(head + best).encode()


def automorphism_count(T: Triangulation, orientation_preserving: bool = False) -> int:
    """Number of automorphisms (decoration-respecting when decorated).

    An automorphism is determined by the image of one dart and a chirality,
    so counting darts whose stream matches a reference stream counts maps.
    With orientation_preserving=True reflections are excluded.
    """
    ref = _combined(T, T.darts[0], 1)
    n_op = sum(1 for d in T.darts if _combined(T, d, 1) == ref)
    if orientation_preserving:
        return n_op
    n_refl = sum(1 for d in T.darts if _combined(T, d, -1) == ref)
    return n_op + n_refl


# ---------------------------------------------------------------------------
# embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Vertex map realizing a patch inside a pointed triangulation.

    orientation is +1 when face orientations are preserved, -1 when the
    image is the mirror reading.
    """

    vertex_map: dict = field(compare=False)
    orientation: int = 1

    def image_dart(self, d):
        u, v = d
        return (self.vertex_map[u], self.vertex_map[v])


def _try_embed(A: Patch, host: Triangulation, root, sigma: int):
    tA = A.tri
    m = A.marked
    g = {m[0]: root[0]}
    if m[1] in g and g[m[1]] != root[1]:
        return None
    g[m[1]] = root[1]
    if root not in host.dart_set:
        return None

    matched = set()
    stack = [m, (m[1], m[0])]
    seen_sides = set()
    while stack:
        d = stack.pop()
        if d in seen_sides:
            continue
        seen_sides.add(d)
        f = tA.face_left.get(d)
        if f is None:
            continue
        if f in matched:
            continue
        u, v = d
        iu, iv = g[u], g[v]
        img_side = (iu, iv) if sigma == 1 else (iv, iu)
        fp = host.face_left.get(img_side)
        if fp is None:
            return None
        w = next(x for x in f if x != u and x != v)
        iw = next(x for x in fp if x != iu and x != iv)
        if w in g:
            if g[w] != iw:
                return None
        else:
            g[w] = iw
        matched.add(f)
        for s in ((u, v), (v, w), (w, u)):
            stack.append(s)
            stack.append((s[1], s[0]))

    if len(matched) != tA.n_faces:
        return None
    if len(set(g.values())) != len(g):
        return None
    for d in tA.darts:
        img = (g[d[0]], g[d[1]])
        if img not in host.dart_set:
            return None
        if not A.omega.permits(d, host.decoration(img)):
            return None
    return Embedding(dict(g), sigma)


def embed(A: Patch, P: PointedTriangulation):
    """Root-aligned embedding of the patch A into the pointed triangulation,
    or None. The marked dart lands on the root; orientation-preserving maps
    are preferred, mirror maps tried second. Decorations of the host must
    satisfy the patch's constraint at every matched dart.
    """
    host, root = P.tri, P.root
    if A.degenerate:
        return Embedding({A.marked[0]: root[0], A.marked[1]: root[1]}, 1)
    for sigma in (1, -1):
        emb = _try_embed(A, host, root, sigma)
        if emb is not None:
            return emb
    return None


# ---------------------------------------------------------------------------
# the pointed-triangulation metric
# ---------------------------------------------------------------------------


def _pointed(x) -> tuple:
    if isinstance(x, PointedTriangulation):
        return x.tri, x.root
    if isinstance(x, Patch):
        if x.degenerate:
            raise ValueError("degenerate patch has no ambient triangulation")
        return x.tri, x.marked
    raise TypeError("expected PointedTriangulation or Patch")


def _ball_defect(P, Q, r: int) -> float:
    """Least max dart-decoration distance over root-matching isomorphisms of
    the two radius-r balls; inf when no isomorphism exists (or a ball cannot
    be realized as a patch)."""
    if r == 0:
        return 0.0
    TP, xP = P
    TQ, xQ = Q
    try:
        AP = ball(TP, xP, r)
        AQ = ball(TQ, xQ, r)
    except NonManifold:
        return math.inf
    a, b = AP.tri, AQ.tri
    if a.decoration_dim != b.decoration_dim:
        return math.inf
    best = math.inf
    sa, _, da = _traverse(a, AP.marked, 1)
    for s in (1, -1):
        sb, _, db = _traverse(b, AQ.marked, s)
        if sa != sb:
            continue
        if not a.decoration_dim:
            return 0.0
        defect = 0.0
        for du, dv in zip(da, db):
            pa = a.decorations[du]
            pb = b.decorations[dv]
            defect = max(defect, max(abs(p - q) for p, q in zip(pa, pb)))
        best = min(best, defect)
    return best


@dataclass(frozen=True)
class DeltaDetail:
    """How a one-sided distance was achieved."""

    value: float
    match_radius: int
    defect: float


DEFAULT_RADIUS_CAP = 8


def delta_hat_detail(P, Q, r_max: int = DEFAULT_RADIUS_CAP) -> DeltaDetail:
    """One-sided distance min_r max(e^-r, defect(r)) with the radius-0 term
    pinned to 1 (a bare direction always matches)."""
    P = _pointed(P)
    Q = _pointed(Q)
    best = DeltaDetail(1.0, 0, 0.0)
    for r in range(1, r_max + 1):
        eps = _ball_defect(P, Q, r)
        val = max(math.exp(-r), eps)
        if val < best.value:
            best = DeltaDetail(val, r, eps)
    return best


def delta_hat(P, Q, r_max: int = DEFAULT_RADIUS_CAP) -> float:
    return delta_hat_detail(P, Q, r_max).value


def delta(P, Q, r_max: int = DEFAULT_RADIUS_CAP) -> float:
    """Symmetrized pointed-triangulation distance."""
    return delta_hat(P, Q, r_max) + delta_hat(Q, P, r_max)


# ---------------------------------------------------------------------------
# the dart-pair bundle graph
# ---------------------------------------------------------------------------


def sphere_bundle(T: Triangulation) -> nx.Graph:
    """Graph on the darts of T: distinct darts (x1,x2), (y1,y2) are adjacent
    iff x1 equals-or-neighbors y1 and x2 equals-or-neighbors y2."""
    G = nx.Graph()
    G.add_nodes_from(T.darts)
    for d in T.darts:
        x1, x2 = d
        c1 = {x1} | neighbors(T, x1)
        c2 = {x2} | neighbors(T, x2)
        for y1 in c1:
            for y2 in c2:
                e = (y1, y2)
                if e != d and e in T.dart_set:
                    G.add_edge(d, e)
    return G
