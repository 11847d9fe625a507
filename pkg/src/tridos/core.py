"""Decorated triangulations of 2-manifolds as oriented combinatorial maps.

A triangulation is stored by its oriented face list. A dart is an ordered
vertex pair (tail, head); both directions of every edge are darts. The twin
involution is (u, v) <-> (v, u) and is fixed-point-free because faces with
repeated vertices are rejected. Counterclockwise rotation around a vertex is
derived from the faces: for a face (a, b, c) the dart (a, b) is followed by
(a, c) in the rotation at a. Directed edges that lie in no face are the
boundary darts; a vertex whose rotation is a single closed cycle is interior,
a single open fan marks a boundary vertex, anything else is non-manifold.

Decorations are real vectors of one fixed dimension per triangulation,
attached to darts, compared in the Chebyshev metric. Dimension 0 means
undecorated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import (
    DegreeExceeded,
    NonManifold,
    OrientationConflict,
    UnknownVertex,
)

Dart = tuple[int, int]
Face = tuple[int, int, int]

DEFAULT_DEGREE_BOUND = 12


# ---------------------------------------------------------------------------
# decoration space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecorationSpace:
    """Fixed-dimension real vectors with the Chebyshev (max-coordinate) metric.

    Dimension 0 is the undecorated degenerate case: the single empty vector,
    all distances 0. Discrete alphabets are embedded as integer coordinates.
    """

    dimension: int

    def __post_init__(self):
        if self.dimension < 0:
            raise ValueError("decoration dimension must be >= 0")

    @staticmethod
    def distance(a: tuple, b: tuple) -> float:
        """Chebyshev distance; +inf when the dimensions disagree."""
        if len(a) != len(b):
            return float("inf")
        if not a:
            return 0.0
        return max(abs(x - y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the structural checks. violations: list of (rule, location)."""

    is_valid: bool
    violations: tuple = ()

    def __bool__(self) -> bool:
        return self.is_valid


def _face_sides(face: Face):
    a, b, c = face
    return (a, b), (b, c), (c, a)


def validate_faces(faces, degree_bound: int = DEFAULT_DEGREE_BOUND) -> ValidationReport:
    """Run every structural check on a raw face list, collecting violations.

    Checks: face shape (3 distinct vertices), undirected edge multiplicity
    <= 2, no repeated directed edge (global orientation), single fan or cycle
    at every vertex, connectivity, degree bound, and V - E + F = 2 for closed
    complexes (genus 0). Returns a report instead of raising so callers can
    show everything that is wrong at once.
    """
    violations = []
    faces = [tuple(f) for f in faces]
    if not faces:
        return ValidationReport(False, (("face-shape", "empty face list"),))
    if degree_bound <= 6:
        violations.append(("degree-bound", f"degree bound {degree_bound} <= 6"))

    shape_ok = True
    for f in faces:
        if len(f) != 3 or len(set(f)) != 3:
            violations.append(("face-shape", f))
            shape_ok = False
    if not shape_ok:
        return ValidationReport(False, tuple(violations))

    edge_count: dict[tuple, int] = {}
    for f in faces:
        for u, v in _face_sides(f):
            e = (u, v) if u < v else (v, u)
            edge_count[e] = edge_count.get(e, 0) + 1
    for e, n in edge_count.items():
        if n > 2:
            violations.append(("edge-multiplicity", e))

    face_left: dict[Dart, Face] = {}
    for f in faces:
        for d in _face_sides(f):
            if d in face_left:
                violations.append(("orientation", d))
            else:
                face_left[d] = f
    if any(rule == "edge-multiplicity" or rule == "orientation"
           for rule, _ in violations):
        return ValidationReport(False, tuple(violations))

    # rotation successor at the tail vertex: (a,b) -> (a,c) for face (a,b,c)
    rot_next: dict[Dart, Dart] = {}
    for (a, b), f in face_left.items():
        # f is a cyclic triple containing directed (a,b); third vertex follows
        i = f.index(a)
        rot_next[(a, b)] = (a, f[(i + 2) % 3])

    out_darts: dict[int, set] = {}
    for u, v in face_left:
        out_darts.setdefault(u, set()).add((u, v))
        out_darts.setdefault(v, set()).add((v, u))

    vertices = sorted(out_darts)
    for v in vertices:
        darts_v = out_darts[v]
        if len(darts_v) > degree_bound:
            violations.append(("degree", v))
        # orbit structure of rot_next restricted to darts at v
        succ = {d: rot_next[d] for d in darts_v if d in rot_next}
        has_pred = set(succ.values())
        starts = [d for d in darts_v if d not in has_pred]
        if len(starts) == 0:
            # expect one single cycle covering all darts at v
            d0 = min(darts_v)
            seen = {d0}
            d = succ.get(d0)
            while d is not None and d != d0 and d not in seen:
                seen.add(d)
                d = succ.get(d)
            if d != d0 or len(seen) != len(darts_v):
                violations.append(("vertex-link", v))
        elif len(starts) == 1:
            # expect one open fan covering all darts at v
            d = starts[0]
            seen = set()
            while d is not None and d not in seen:
                seen.add(d)
                d = succ.get(d)
            if len(seen) != len(darts_v):
                violations.append(("vertex-link", v))
        else:
            violations.append(("vertex-link", v))

    # connectivity over the 1-skeleton
    seen = {vertices[0]}
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for (_, w) in out_darts[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(vertices):
        violations.append(("connectivity", f"{len(seen)} of {len(vertices)} vertices reached"))

    n_vertices = len(vertices)
    n_edges = len(edge_count)
    n_faces = len(faces)
    closed = all(n == 2 for n in edge_count.values())
    if closed and n_vertices - n_edges + n_faces != 2:
        violations.append(
            ("euler-characteristic", n_vertices - n_edges + n_faces))

    return ValidationReport(not violations, tuple(violations))


_RAISE_MAP = {
    "face-shape": ValueError,
    "degree-bound": ValueError,
    "edge-multiplicity": NonManifold,
    "orientation": OrientationConflict,
    "vertex-link": NonManifold,
    "connectivity": NonManifold,
    "euler-characteristic": NonManifold,
    "degree": DegreeExceeded,
}

# raise the most structural problem first, not the first in scan order
_SEVERITY = ["face-shape", "degree-bound", "edge-multiplicity", "orientation",
             "vertex-link", "connectivity", "euler-characteristic", "degree"]


# ---------------------------------------------------------------------------
# triangulation
# ---------------------------------------------------------------------------

class Triangulation:
    """Immutable oriented combinatorial map with per-dart decorations.

    Construct through build_triangulation, which validates first. Attributes
    are populated once and must not be mutated afterwards; every operation in
    the library treats triangulations as shareable read-only values.
    """

    def __init__(self, faces, decorations=None,
                 degree_bound: int = DEFAULT_DEGREE_BOUND, _validated=False):
        faces = tuple(tuple(f) for f in faces)
        if not _validated:
            report = validate_faces(faces, degree_bound)
            if not report:
                by_rule = {rule: loc for rule, loc in reversed(report.violations)}
                for rule in _SEVERITY:
                    if rule in by_rule:
                        raise _RAISE_MAP[rule](f"{rule}: {by_rule[rule]}")
        # canonical face storage: rotate so the smallest vertex comes first
        canon = []
        for f in faces:
            i = f.index(min(f))
            canon.append((f[i], f[(i + 1) % 3], f[(i + 2) % 3]))
        self.faces: tuple[Face, ...] = tuple(sorted(canon))
        self.degree_bound = degree_bound

        face_left: dict[Dart, Face] = {}
        rot_next: dict[Dart, Dart] = {}
        for f in self.faces:
            a, b, c = f
            face_left[(a, b)] = f
            face_left[(b, c)] = f
            face_left[(c, a)] = f
            rot_next[(a, b)] = (a, c)
            rot_next[(b, c)] = (b, a)
            rot_next[(c, a)] = (c, b)
        self.face_left = face_left
        self.rot_next = rot_next
        self.rot_prev = {d2: d1 for d1, d2 in rot_next.items()}

        out: dict[int, set] = {}
        for u, v in face_left:
            out.setdefault(u, set()).add((u, v))
            out.setdefault(v, set()).add((v, u))
        self.vertices: tuple[int, ...] = tuple(sorted(out))
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}

        # rotation order per vertex: boundary fans start at the dart with no
        # predecessor; interior cycles start at the smallest dart
        rotations: dict[int, tuple[Dart, ...]] = {}
        for v, darts_v in out.items():
            starts = [d for d in darts_v
                      if d not in self.rot_prev or self.rot_prev[d] not in darts_v]
            d = starts[0] if starts else min(darts_v)
            first = d
            ring = [d]
            while True:
                d = rot_next.get(d)
                if d is None or d == first:
                    break
                ring.append(d)
            rotations[v] = tuple(ring)
        self.rotations = rotations
        self.adjacency = {v: tuple(h for _, h in rotations[v]) for v in rotations}

        self.darts: tuple[Dart, ...] = tuple(sorted(
            d for v in self.vertices for d in rotations[v]))
        self.dart_set = frozenset(self.darts)
        self.boundary_darts = frozenset(
            d for d in self.darts if d not in face_left)
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(
            (u, v) for u, v in self.darts if u < v))
        self.is_closed = not self.boundary_darts

        if decorations is None:
            self.decoration_dim = 0
            self.decorations: dict[Dart, tuple] = {}
        else:
            deco = {}
            dim = None
            for key, vec in decorations.items():
                d = tuple(key)
                if d not in self.dart_set:
                    raise UnknownVertex(f"decoration references non-dart {d}")
                vec = tuple(float(x) for x in vec)
                if dim is None:
                    dim = len(vec)
                elif len(vec) != dim:
                    raise ValueError(
                        f"ragged decoration dimensions: {len(vec)} != {dim}")
                deco[d] = vec
            if dim is None or dim == 0:
                raise ValueError("decoration map given but carries no coordinates")
            missing = len(self.darts) - len(deco)
            if missing:
                raise ValueError(f"decorations must cover all darts ({missing} missing)")
            self.decoration_dim = dim
            self.decorations = deco

    # -- basic queries ------------------------------------------------------

    def decoration(self, dart: Dart) -> tuple:
        if self.decoration_dim == 0:
            return ()
        return self.decorations[dart]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def twin(self, dart: Dart) -> Dart:
        return (dart[1], dart[0])

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def __repr__(self):
        kind = "closed" if self.is_closed else "bounded"
        return (f"Triangulation({kind}, V={self.n_vertices}, E={self.n_edges}, "
                f"F={self.n_faces}, dim={self.decoration_dim})")


def build_triangulation(faces, decorations=None,
                        degree_bound: int = DEFAULT_DEGREE_BOUND) -> Triangulation:
    """Validate a face list and assemble the combinatorial map.

    faces: iterable of oriented vertex triples sharing a global orientation
    (each undirected edge used by at most two faces, in opposite directions).
    decorations: optional map {(tail, head): vector} covering every dart with
    one fixed dimension. Raises NonManifold / OrientationConflict /
    DegreeExceeded for structural problems, UnknownVertex for decoration keys
    that are not darts.
    """
    return Triangulation(faces, decorations, degree_bound)


def euler_characteristic(T: Triangulation) -> int:
    """V - E + F. Equals 2 for closed genus-0 complexes, 1 for disks."""
    return T.n_vertices - T.n_edges + T.n_faces


def neighbors(T: Triangulation, v: int) -> frozenset:
    """Heads of the darts with tail v."""
    adj = T.adjacency.get(v)
    if adj is None:
        raise UnknownVertex(f"vertex {v} not in triangulation")
    return frozenset(adj)


def graph_distances(T: Triangulation, sources, cutoff=None) -> dict:
    """BFS distances over the 1-skeleton from a vertex or set of vertices.

    Returns {vertex: distance} for every vertex within cutoff (all vertices
    when cutoff is None).
    """
    if isinstance(sources, int):
        sources = (sources,)
    dist = {}
    queue = deque()
    for s in sources:
        if s not in T.adjacency:
            raise UnknownVertex(f"vertex {s} not in triangulation")
        dist[s] = 0
        queue.append(s)
    while queue:
        u = queue.popleft()
        du = dist[u]
        if cutoff is not None and du >= cutoff:
            continue
        for w in T.adjacency[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def boundary_cycles(T: Triangulation) -> list[list[int]]:
    """Boundary cycles as vertex lists, positively oriented.

    Positive orientation means each consecutive directed edge has its face on
    the left, i.e. the surface lies to the left when walking the cycle. Each
    cycle starts at its smallest vertex for determinism. Empty for closed
    triangulations.
    """
    # a free dart (a,b) has no face on its left; its twin (b,a) does, so the
    # positive walk steps b -> a. Manifold boundary vertices carry exactly one
    # free out-dart and one free in-dart, so succ is a permutation.
    succ = {b: a for (a, b) in T.boundary_darts}
    cycles = []
    unvisited = set(succ)
    while unvisited:
        start = min(unvisited)
        cyc = [start]
        unvisited.discard(start)
        u = succ[start]
        while u != start:
            cyc.append(u)
            unvisited.discard(u)
            u = succ[u]
        cycles.append(cyc)
    return sorted(cycles)


# ---------------------------------------------------------------------------
# patches and pointed triangulations
# ---------------------------------------------------------------------------

class Omega:
    """Constraint on permissible decorations, one rule per dart."""

    kind = "abstract"

    def permits(self, dart: Dart, vector: tuple) -> bool:
        raise NotImplementedError

    def covers(self, darts) -> bool:
        raise NotImplementedError


class WildcardOmega(Omega):
    """Any decoration is permissible."""

    kind = "wildcard"

    def permits(self, dart, vector):
        return True

    def covers(self, darts):
        return True

    def __repr__(self):
        return "WildcardOmega()"


class ExactOmega(Omega):
    """One exact vector per dart; matching is plain equality."""

    kind = "exact"

    def __init__(self, vectors: dict):
        self.vectors = {tuple(d): tuple(float(x) for x in v)
                        for d, v in vectors.items()}

    def permits(self, dart, vector):
        want = self.vectors.get(tuple(dart))
        return want is not None and want == tuple(vector)

    def covers(self, darts):
        return all(d in self.vectors for d in darts)

    def __repr__(self):
        return f"ExactOmega({len(self.vectors)} darts)"


class BoxOmega(Omega):
    """Closed coordinate intervals per dart: lo_i <= x_i <= hi_i."""

    kind = "box"

    def __init__(self, bounds: dict):
        self.bounds = {tuple(d): tuple((float(lo), float(hi)) for lo, hi in b)
                       for d, b in bounds.items()}

    def permits(self, dart, vector):
        box = self.bounds.get(tuple(dart))
        if box is None or len(box) != len(vector):
            return False
        return all(lo <= x <= hi for x, (lo, hi) in zip(vector, box))

    def covers(self, darts):
        return all(d in self.bounds for d in darts)

    def __repr__(self):
        return f"BoxOmega({len(self.bounds)} darts)"


@dataclass(frozen=True)
class Patch:
    """Finite triangulation-with-boundary, a marked dart, and a decoration
    constraint.

    The degenerate radius-0 patch records only the marked direction (tri is
    None); it matches everything and carries no decorations.
    """

    tri: Triangulation | None
    marked: Dart
    omega: Omega = field(default_factory=WildcardOmega)

    def __post_init__(self):
        object.__setattr__(self, "marked", tuple(self.marked))
        if self.tri is not None:
            if self.marked not in self.tri.dart_set:
                raise UnknownVertex(f"marked dart {self.marked} not in patch")
            if not self.omega.covers(self.tri.darts):
                raise ValueError("omega constraint does not cover every dart")

    @property
    def degenerate(self) -> bool:
        return self.tri is None

    def __repr__(self):
        if self.degenerate:
            return f"Patch(degenerate, marked={self.marked})"
        return f"Patch({self.tri!r}, marked={self.marked}, {self.omega!r})"


@dataclass(frozen=True)
class PointedTriangulation:
    """A triangulation with a marked tangent vector (root dart)."""

    tri: Triangulation
    root: Dart

    def __post_init__(self):
        object.__setattr__(self, "root", tuple(self.root))
        if self.root not in self.tri.dart_set:
            raise UnknownVertex(f"root dart {self.root} not in triangulation")


def ball(T: Triangulation, x: Dart, r: int) -> Patch:
    """The radius-r combinatorial ball around tail(x), marked at x.

    Vertices: everything within graph distance r of tail(x). Faces: those
    with all three vertices inside. Edges are the kept faces' edges; chords
    whose faces reach outside are dropped so the ball stays a face-generated
    complex (shortest-path edges always survive, so ball distances to the
    root agree with the ambient ones). r = 0 returns the degenerate patch
    that records only the direction of x. The constraint is the exact
    decorations inherited from T.
    """
    x = tuple(x)
    if x not in T.dart_set:
        raise UnknownVertex(f"dart {x} not in triangulation")
    if r < 0:
        raise ValueError("radius must be >= 0")
    if r == 0:
        return Patch(None, x)
    dist = graph_distances(T, x[0], cutoff=r)
    kept = [f for f in T.faces
            if f[0] in dist and f[1] in dist and f[2] in dist]
    deco = None
    if T.decoration_dim:
        deco = {}
        for f in kept:
            for u, v in _face_sides(f):
                deco[(u, v)] = T.decorations[(u, v)]
                deco[(v, u)] = T.decorations[(v, u)]
    sub = Triangulation(kept, deco, degree_bound=T.degree_bound)
    omega: Omega = ExactOmega(sub.decorations) if T.decoration_dim else WildcardOmega()
    return Patch(sub, x, omega)


def interior(A: Patch | Triangulation, n: int) -> frozenset:
    """Vertices of A at graph distance >= n from the boundary, inside A.

    n = 0 gives every vertex; closed complexes have no boundary, so every
    vertex is interior at every depth.
    """
    tri = A.tri if isinstance(A, Patch) else A
    if tri is None:
        raise ValueError("degenerate patch has no interior")
    if n < 0:
        raise ValueError("interior depth must be >= 0")
    boundary = {v for d in tri.boundary_darts for v in d}
    if not boundary:
        return frozenset(tri.vertices)
    dist = graph_distances(tri, boundary)
    return frozenset(v for v in tri.vertices if dist.get(v, 0) >= n)
