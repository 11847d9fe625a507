"""Sphere ensembles and patch generators.

Three families ship here: glued triangular-lattice balls with i.i.d. edge
decorations ("double-grid" spheres), face-substitution iterates driven by a
SubstitutionRule, and the hyperbolic disk/sphere family grown ring by ring so
that every interior vertex has degree 7 (boundary degrees 3 and 4, read as
the two-letter word alphabet A/B). Plus the small fixed fixtures the test
suite and the eigenfunction search lean on: tetrahedron, octahedron, vertex
stars, the alternating-ring annulus, and its capped-cylinder closure.

All generators are deterministic given their parameters (and seed, where a
seed exists); vertex ids are assigned in a reproducible order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_DEGREE_BOUND,
    ExactOmega,
    Patch,
    Triangulation,
    WildcardOmega,
    boundary_cycles,
    build_triangulation,
    euler_characteristic,
)
from .errors import ArcMismatch, UnexpectedDegree

# ---------------------------------------------------------------------------
# small fixed complexes
# ---------------------------------------------------------------------------


def tetrahedron(decorations=None) -> Triangulation:
    """Smallest closed triangulation: V=4, E=6, F=4, all degrees 3."""
    return build_triangulation(
        [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)], decorations)


def octahedron() -> Triangulation:
    """Closed, V=6, all degrees 4. Poles 0 and 5, equator 1-2-3-4."""
    return build_triangulation([
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
        (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4)])


def vertex_star(degree: int) -> Patch:
    """Fan of `degree` faces around a center vertex; marked at a spoke.

    The radius-1 ball of a degree-d interior vertex, undecorated (wildcard
    constraint), so it probes vertex degree under embedding.
    """
    if degree < 3:
        raise ValueError("a vertex star needs degree >= 3")
    ring = list(range(1, degree + 1))
    faces = [(0, ring[i], ring[(i + 1) % degree]) for i in range(degree)]
    tri = build_triangulation(faces)
    return Patch(tri, (0, 1))


# ---------------------------------------------------------------------------
# triangular-lattice balls and doubling
# ---------------------------------------------------------------------------

_AXIAL_NEIGHBORS = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]


def _hex_distance(a: int, b: int) -> int:
    return (abs(a) + abs(b) + abs(a + b)) // 2


def triangular_ball(k: int) -> Patch:
    """Radius-k ball of the degree-6 triangular lattice; V = 3k^2+3k+1.

    Axial coordinates (a, b) with neighbor steps +-{(1,0),(0,1),(1,-1)};
    faces are the up/down lattice triangles with all corners inside. Marked
    dart: center toward (1, 0). Boundary cycle has length 6k with six
    degree-3 corners (word A) and degree-4 sides (word B).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    coords = sorted((a, b)
                    for a in range(-k, k + 1)
                    for b in range(-k, k + 1)
                    if _hex_distance(a, b) <= k)
    index = {c: i for i, c in enumerate(coords)}
    faces = []
    # anchors one step outside can still own an all-inside down triangle
    for a in range(-k - 1, k + 1):
        for b in range(-k - 1, k + 1):
            up = ((a, b), (a + 1, b), (a, b + 1))
            down = ((a + 1, b), (a + 1, b + 1), (a, b + 1))
            for tri in (up, down):
                if all(c in index for c in tri):
                    faces.append(tuple(index[c] for c in tri))
    T = build_triangulation(faces)
    return Patch(T, (index[(0, 0)], index[(1, 0)]))


def glue_double(A) -> Triangulation:
    """Close a disk by gluing a mirror copy along its boundary cycle.

    The mirror copy reverses face orientation and is identified with the
    original by the identity correspondence on the boundary, so a ridge
    vertex of disk-degree q ends at degree 2q - 2. Decorations (if any) are
    copied dart-by-dart onto the mirror. Raises DegreeExceeded through
    validation when a ridge degree exceeds the disk's bound.
    """
    tri = A.tri if isinstance(A, Patch) else A
    cycles = boundary_cycles(tri)
    if len(cycles) != 1 or euler_characteristic(tri) != 1:
        raise ValueError("glue_double needs a disk with a single boundary cycle")
    boundary = set(cycles[0])
    offset = max(tri.vertices) + 1
    mirror = {}
    fresh = offset
    for v in tri.vertices:
        if v in boundary:
            mirror[v] = v
        else:
            mirror[v] = fresh
            fresh += 1
    faces = list(tri.faces)
    faces += [(mirror[a], mirror[c], mirror[b]) for (a, b, c) in tri.faces]
    deco = None
    if tri.decoration_dim:
        deco = dict(tri.decorations)
        for (u, v), vec in tri.decorations.items():
            deco[(mirror[u], mirror[v])] = vec
    return build_triangulation(faces, deco, degree_bound=tri.degree_bound)


def decorate_iid(T: Triangulation, alphabet, seed: int) -> Triangulation:
    """Redecorate: each undirected edge gets an independent uniform symbol.

    Both darts of an edge receive the same vector. Symbols may be scalars or
    equal-length tuples; they are embedded as float coordinates. Pure
    function of (T, alphabet, seed).
    """
    symbols = [s if isinstance(s, (tuple, list)) else (s,) for s in alphabet]
    if not symbols:
        raise ValueError("alphabet must be nonempty")
    width = len(symbols[0])
    if any(len(s) != width for s in symbols):
        raise ValueError("alphabet symbols must share one width")
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(symbols), size=len(T.edges))
    deco = {}
    for (u, v), i in zip(T.edges, picks):
        vec = tuple(float(x) for x in symbols[int(i)])
        deco[(u, v)] = vec
        deco[(v, u)] = vec
    return build_triangulation(T.faces, deco, degree_bound=T.degree_bound)


def double_grid_sphere(k: int, alphabet=None, seed=None) -> Triangulation:
    """Two mirror triangular-lattice k-balls glued boundary-to-boundary.

    V = 6k^2 + 2, E = 18k^2, F = 12k^2; ridge degrees 4 (corners) and 6,
    every other degree 6. With an alphabet, edges are decorated i.i.d.
    (seed required).
    """
    T = glue_double(triangular_ball(k))
    if alphabet is not None:
        if seed is None:
            raise ValueError("seed is required when decorating")
        T = decorate_iid(T, alphabet, seed)
    return T


# ---------------------------------------------------------------------------
# hyperbolic family: interior degree 7, boundary word over {A, B}
# ---------------------------------------------------------------------------


def _least_rotation(s: str) -> str:
    """Booth's algorithm: lexicographically least cyclic rotation."""
    if not s:
        return s
    d = s + s
    f = [-1] * len(d)
    k = 0
    for j in range(1, len(d)):
        sj = d[j]
        i = f[j - k - 1]
        while i != -1 and sj != d[k + i + 1]:
            if sj < d[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != d[k + i + 1]:
            if sj < d[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return d[k:k + len(s)]


@dataclass(frozen=True)
class BoundaryWord:
    """Cyclic word over {A, B}; stored at its least rotation.

    A marks a degree-3 boundary vertex, B a degree-4 one. expand() applies
    the one-step rewriting A -> BAA, B -> BA that the ring construction
    realizes on disk boundaries.
    """

    word: str

    def __post_init__(self):
        if set(self.word) - {"A", "B"}:
            raise ValueError("alphabet is exactly {A, B}")
        object.__setattr__(self, "word", _least_rotation(self.word))

    def __len__(self):
        return len(self.word)

    @property
    def counts(self) -> tuple[int, int]:
        return self.word.count("A"), self.word.count("B")

    def expand(self) -> "BoundaryWord":
        # simultaneous rewriting (a sequential replace would hit new letters)
        return BoundaryWord(
            "".join("BAA" if ch == "A" else "BA" for ch in self.word))


def boundary_word(A) -> BoundaryWord:
    """Read a disk's boundary cycle as a word: degree 3 -> A, degree 4 -> B.

    Raises UnexpectedDegree for any other boundary degree; the word is
    returned at its canonical (least) rotation, so equality means equality
    up to rotation.
    """
    tri = A.tri if isinstance(A, Patch) else A
    cycles = boundary_cycles(tri)
    if len(cycles) != 1:
        raise ValueError("boundary_word needs a single boundary cycle")
    letters = []
    for v in cycles[0]:
        deg = tri.degree(v)
        if deg == 3:
            letters.append("A")
        elif deg == 4:
            letters.append("B")
        else:
            raise UnexpectedDegree(f"boundary vertex {v} has degree {deg}")
    return BoundaryWord("".join(letters))


def theta(n: int) -> Patch:
    """Hyperbolic disk: n rings, interior degrees 7, boundary degrees 3/4.

    Ring 1 is the degree-7 star. Each further ring adds one vertex per
    boundary edge and then enough fan vertices per old boundary vertex to
    close it at degree 7; the boundary word rewrites as A -> BAA, B -> BA
    (up to rotation), so lengths run 7, 21, 56, 147, ...
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    faces = [(0, i, (i % 7) + 1) for i in range(1, 8)]
    cycle = list(range(1, 8))
    degree = {i: 3 for i in cycle}
    next_id = 8
    for _ in range(n - 1):
        L = len(cycle)
        edge_vertex = []
        for i in range(L):
            b, b_next = cycle[i], cycle[(i + 1) % L]
            m = next_id
            next_id += 1
            faces.append((b_next, b, m))
            edge_vertex.append(m)
        new_cycle = []
        for i in range(L):
            b = cycle[i]
            m_prev = edge_vertex[(i - 1) % L]
            m_here = edge_vertex[i]
            gap = 7 - degree[b] - 2  # fan vertices needed to close b at 7
            fan = list(range(next_id, next_id + gap))
            next_id += gap
            chain = [m_prev] + fan + [m_here]
            for a, c in zip(chain, chain[1:]):
                faces.append((b, a, c))
            new_cycle.extend(fan + [m_here])
        degree = {}
        for i, m in enumerate(edge_vertex):
            degree[m] = 4
        for v in new_cycle:
            degree.setdefault(v, 3)
        cycle = new_cycle
    tri = build_triangulation(faces)
    return Patch(tri, (0, 1))


def hyperbolic_sphere(k: int) -> Triangulation:
    """Two mirror hyperbolic k-disks glued along the boundary.

    Off-ridge degrees are 7; ridge degrees are 4 (from A) and 6 (from B).
    """
    return glue_double(theta(k))


# ---------------------------------------------------------------------------
# face substitution
# ---------------------------------------------------------------------------


def vertex_decorations(T: Triangulation) -> dict:
    """Per-vertex decoration, requiring all out-darts of a vertex to agree."""
    if not T.decoration_dim:
        raise ValueError("triangulation carries no decorations")
    out = {}
    for v in T.vertices:
        vals = {T.decorations[(v, w)] for w in T.adjacency[v]}
        if len(vals) != 1:
            raise ValueError(f"vertex {v} has mixed out-dart decorations")
        out[v] = vals.pop()
    return out


def _vertex_decorated(faces, vdec: dict, degree_bound=DEFAULT_DEGREE_BOUND) -> Triangulation:
    """Build a triangulation whose dart decorations repeat the tail vertex's."""
    T0 = build_triangulation(faces, None, degree_bound)
    deco = {d: tuple(vdec[d[0]]) for d in T0.darts}
    return build_triangulation(faces, deco, degree_bound)


@dataclass(frozen=True)
class FaceImage:
    """Replacement disk for one decorated face class.

    tri: vertex-decorated disk; marks: the three boundary vertices playing
    the roles of the face corners, in face orientation order.
    """

    tri: Triangulation
    marks: tuple[int, int, int]


class SubstitutionRule:
    """Face-substitution rule keyed by ordered corner-decoration triples.

    Each image is a disk with three marked boundary vertices; the boundary
    arc between consecutive marks must depend only on the decorations at its
    two endpoints (checked across all images, and reversal-consistent), which
    is what makes neighboring images glue. Pass validate_arcs=False only to
    build a deliberately broken rule for diagnostics; substitution_apply will
    then raise ArcMismatch at the first inconsistent gluing.
    """

    def __init__(self, images: dict, validate_arcs: bool = True):
        self.images: dict[tuple, FaceImage] = {}
        for key, image in images.items():
            key = tuple(tuple(float(x) for x in d) for d in key)
            if len(key) != 3:
                raise ValueError("rule keys are decoration triples")
            self.images[key] = image
        self._arc_paths: dict[tuple, tuple] = {}   # per (key, corner i): vertex path
        self._arc_words: dict[tuple, tuple] = {}   # (dec_u, dec_v) -> decoration word
        for key, image in self.images.items():
            self._check_image(key, image, validate_arcs)

    def _check_image(self, key, image: FaceImage, validate_arcs: bool):
        tri = image.tri
        cycles = boundary_cycles(tri)
        if len(cycles) != 1 or euler_characteristic(tri) != 1:
            raise ValueError(f"image for {key} is not a disk")
        vdec = vertex_decorations(tri)
        marks = image.marks
        cyc = cycles[0]
        if len(set(marks)) != 3 or any(m not in cyc for m in marks):
            raise ValueError(f"marks {marks} must be three distinct boundary vertices")
        for m, d in zip(marks, key):
            if vdec[m] != d:
                raise ValueError(
                    f"mark {m} decoration {vdec[m]} differs from key {d}")
        # positive boundary order must visit marks as a, b, c
        i0 = cyc.index(marks[0])
        ordered = cyc[i0:] + cyc[:i0]
        if ordered.index(marks[1]) > ordered.index(marks[2]):
            raise ValueError(
                f"marks {marks} are not in positive boundary order")
        # split the cycle into the three arcs a->b, b->c, c->a
        pos = {marks[1]: ordered.index(marks[1]), marks[2]: ordered.index(marks[2])}
        arcs = (ordered[: pos[marks[1]] + 1],
                ordered[pos[marks[1]]: pos[marks[2]] + 1],
                ordered[pos[marks[2]]:] + [marks[0]])
        edge_set = set(tri.edges)
        for i, path in enumerate(arcs):
            self._arc_paths[(key, i)] = tuple(path)
            # no chord of the patch may connect non-consecutive arc vertices
            for s in range(len(path)):
                for t in range(s + 2, len(path)):
                    e = (min(path[s], path[t]), max(path[s], path[t]))
                    if e in edge_set and not (s == 0 and t == len(path) - 1):
                        raise ValueError(
                            f"arc {i} of image {key} carries interior edge {e}")
            word = tuple(vdec[v] for v in path)
            ends = (word[0], word[-1])
            if validate_arcs:
                known = self._arc_words.get(ends)
                if known is not None and known != word:
                    raise ArcMismatch(
                        f"arc word for endpoints {ends} differs across images: "
                        f"{known} vs {word}")
                self._arc_words[ends] = word
                rev = self._arc_words.get((ends[1], ends[0]))
                if rev is not None and tuple(reversed(rev)) != word:
                    raise ArcMismatch(
                        f"arc words for {ends} are not reversal-consistent")

    def image_for(self, triple):
        """Image and rotation offset for an ordered corner-decoration triple."""
        triple = tuple(tuple(d) for d in triple)
        for r in range(3):
            rotated = triple[r:] + triple[:r]
            if rotated in self.images:
                return self.images[rotated], r
        raise ValueError(f"rule has no image for face class {triple}")

    def arc_path(self, key, i):
        return self._arc_paths[(key, i)]

    @property
    def keys(self):
        return tuple(self.images)


def substitution_apply(T: Triangulation, rule: SubstitutionRule) -> Triangulation:
    """Replace every face by its image patch, gluing along boundary arcs.

    T must be vertex-decorated and every decorated face must have an image
    (up to cyclic rotation). Adjacent faces whose images induce different
    decorated arc words over a shared edge raise ArcMismatch; degree growth
    beyond T's bound raises DegreeExceeded. Output vertex ids keep T's
    vertices for the corners; arc and interior vertices are fresh and
    deterministic. Output is closed iff T is closed.
    """
    vdec = vertex_decorations(T)
    next_id = max(T.vertices) + 1
    out_faces: list[tuple] = []
    out_vdec: dict[int, tuple] = {v: vdec[v] for v in T.vertices}

    # one shared arc-vertex path per undirected edge, allocated on first use
    arc_ids: dict[tuple, list] = {}
    arc_word_seen: dict[tuple, tuple] = {}

    def arc_for(u, v, word):
        """Fresh (or reused) interior vertex ids for the u->v arc."""
        nonlocal next_id
        e = (u, v) if u < v else (v, u)
        w_canon = word if u < v else tuple(reversed(word))
        if e in arc_ids:
            if arc_word_seen[e] != w_canon:
                raise ArcMismatch(
                    f"edge {e}: adjacent faces induce arc words "
                    f"{arc_word_seen[e]} vs {w_canon}")
            ids = arc_ids[e]
        else:
            ids = list(range(next_id, next_id + len(word) - 2))
            next_id += len(ids)
            arc_ids[e] = ids
            arc_word_seen[e] = w_canon
            for w, d in zip(ids, w_canon[1:-1]):
                out_vdec[w] = d
        return ids if u < v else list(reversed(ids))

    for face in T.faces:
        triple = tuple(vdec[v] for v in face)
        image, r = rule.image_for(triple)
        corners = (face[r], face[(r + 1) % 3], face[(r + 2) % 3])
        key = tuple(vdec[v] for v in corners)
        ivdec = vertex_decorations(image.tri)
        vmap = {image.marks[i]: corners[i] for i in range(3)}
        for i in range(3):
            path = rule.arc_path(key, i)
            u, v = corners[i], corners[(i + 1) % 3]
            word = tuple(ivdec[p] for p in path)
            ids = arc_for(u, v, word)
            for p, w in zip(path[1:-1], ids):
                vmap[p] = w
        for p in image.tri.vertices:
            if p not in vmap:
                vmap[p] = next_id
                out_vdec[next_id] = ivdec[p]
                next_id += 1
        for (a, b, c) in image.tri.faces:
            out_faces.append((vmap[a], vmap[b], vmap[c]))

    return _vertex_decorated(out_faces, out_vdec, degree_bound=T.degree_bound)


@dataclass(frozen=True)
class SubstitutionReport:
    """Nondegeneracy report: smallest uniform k, or the failing face class."""

    nondegenerate: bool
    k: int | None = None
    failing: tuple | None = None


def substitution_validate(rule: SubstitutionRule, max_k: int = 6) -> SubstitutionReport:
    """Find the smallest k <= max_k giving every face class an interior face.

    Each class is expanded from a single-face seed; an interior face is one
    none of whose vertices lies on the boundary. Expansion runs with a large
    internal degree bound so that degree growth alone cannot mask
    degeneracy. Reports the first failing class when some class never gains
    an interior face.
    """
    worst = 0
    for key in rule.keys:
        seed = _vertex_decorated(
            [(0, 1, 2)], {i: key[i] for i in range(3)}, degree_bound=1 << 16)
        found = None
        T = seed
        for k in range(1, max_k + 1):
            T = substitution_apply(T, rule)
            on_boundary = {v for d in T.boundary_darts for v in d}
            if any(not (set(f) & on_boundary) for f in T.faces):
                found = k
                break
        if found is None:
            return SubstitutionReport(False, None, key)
        worst = max(worst, found)
    return SubstitutionReport(True, worst, None)


# -- shipped sample rules ---------------------------------------------------


def _all_triples(alphabet):
    symbols = [tuple(float(x) for x in (s if isinstance(s, (tuple, list)) else (s,)))
               for s in alphabet]
    for p in symbols:
        for q in symbols:
            for r in symbols:
                yield p, q, r


def four_subdivision_rule(alphabet=(0,)) -> SubstitutionRule:
    """Each face splits into four; midpoints take the componentwise min of
    their edge's endpoint decorations (symmetric, so reversed arcs agree)."""
    images = {}
    for p, q, r in _all_triples(alphabet):
        def mn(x, y):
            return tuple(min(a, b) for a, b in zip(x, y))
        vdec = {0: p, 1: q, 2: r, 3: mn(p, q), 4: mn(q, r), 5: mn(r, p)}
        tri = _vertex_decorated(
            [(0, 3, 5), (3, 1, 4), (5, 4, 2), (3, 4, 5)], vdec)
        images[(p, q, r)] = FaceImage(tri, (0, 1, 2))
    return SubstitutionRule(images)


def identity_rule(alphabet=(0,)) -> SubstitutionRule:
    """Face maps to itself; degenerate (never gains an interior face)."""
    images = {}
    for p, q, r in _all_triples(alphabet):
        tri = _vertex_decorated([(0, 1, 2)], {0: p, 1: q, 2: r})
        images[(p, q, r)] = FaceImage(tri, (0, 1, 2))
    return SubstitutionRule(images)


def center_fan_rule(alphabet=(0, 1), degenerate_key=None) -> SubstitutionRule:
    """Faces split into three around a center vertex (arcs stay bare edges).

    With degenerate_key set, that one class keeps the identity image: a rule
    with a degenerate branch for exercising substitution_validate failure
    reporting. Arc words are the bare endpoint pairs in every class, so the
    mixed rule is still arc-consistent.
    """
    if degenerate_key is not None:
        degenerate_key = tuple(tuple(float(x) for x in d) for d in degenerate_key)
    images = {}
    for p, q, r in _all_triples(alphabet):
        if (p, q, r) == degenerate_key:
            tri = _vertex_decorated([(0, 1, 2)], {0: p, 1: q, 2: r})
            images[(p, q, r)] = FaceImage(tri, (0, 1, 2))
            continue
        center = tuple(min(a, b, c) for a, b, c in zip(p, q, r))
        vdec = {0: p, 1: q, 2: r, 3: center}
        tri = _vertex_decorated([(0, 1, 3), (1, 2, 3), (2, 0, 3)], vdec)
        images[(p, q, r)] = FaceImage(tri, (0, 1, 2))
    return SubstitutionRule(images)


def substitution_sphere(n: int, alphabet=(0,), base: Triangulation | None = None) -> Triangulation:
    """n-fold four-subdivision iterate of a vertex-decorated base sphere.

    Default base: tetrahedron with the first alphabet symbol everywhere.
    """
    rule = four_subdivision_rule(alphabet)
    if base is None:
        first = alphabet[0]
        vec = tuple(float(x) for x in (first if isinstance(first, (tuple, list)) else (first,)))
        base = _vertex_decorated(tetrahedron().faces, {v: vec for v in range(4)})
    T = base
    for _ in range(n):
        T = substitution_apply(T, rule)
    return T


# ---------------------------------------------------------------------------
# alternating-ring fixtures for the compactly supported eigenfunction
# ---------------------------------------------------------------------------


def _band_faces(ring_a, ring_b):
    """Antiprism band between two same-length rings (lists of vertex ids)."""
    n = len(ring_a)
    faces = []
    for j in range(n):
        jn = (j + 1) % n
        faces.append((ring_a[j], ring_a[jn], ring_b[j]))
        faces.append((ring_b[j], ring_a[jn], ring_b[jn]))
    return faces


def ring_annulus(rings: int = 3, circumference: int = 4) -> Patch:
    """Stacked antiprism bands: `rings` rings of equal circumference.

    Middle-ring vertices have degree 6 with their two same-ring neighbors
    adjacent to both of their cross-ring neighbors, which is exactly the
    collar geometry that supports the alternating compactly supported
    eigenfunction at -4/3 of the default-schema Laplacian (even
    circumference). Marked on the second ring.
    """
    if rings < 2 or circumference < 3:
        raise ValueError("need rings >= 2 and circumference >= 3")
    ring = [list(range(i * circumference, (i + 1) * circumference))
            for i in range(rings)]
    faces = []
    for i in range(rings - 1):
        faces += _band_faces(ring[i], ring[i + 1])
    tri = build_triangulation(faces)
    mark_ring = ring[1] if rings > 2 else ring[0]
    return Patch(tri, (mark_ring[0], mark_ring[1]))


def capped_cylinder_sphere(rings: int = 5, circumference: int = 4) -> Triangulation:
    """Closed sphere: stacked antiprism bands with a cone cap on each end.

    With the defaults: V = 22, E = 60, F = 40; three interior rings each
    carry an alternating eigenfunction of the default Laplacian at -4/3.
    """
    annulus = ring_annulus(rings, circumference)
    faces = list(annulus.tri.faces)
    n = circumference
    bottom = list(range(n))
    top = list(range((rings - 1) * n, rings * n))
    a_bot = rings * n
    a_top = rings * n + 1
    for j in range(n):
        jn = (j + 1) % n
        faces.append((bottom[jn], bottom[j], a_bot))
        faces.append((top[j], top[jn], a_top))
    return build_triangulation(faces)


def alternating_ring_vector(T, ring_vertices) -> dict:
    """+1/-1 alternating values on an even cycle, 0 elsewhere."""
    if len(ring_vertices) % 2:
        raise ValueError("alternating vector needs an even ring")
    vec = {v: 0.0 for v in T.vertices}
    for i, v in enumerate(ring_vertices):
        vec[v] = 1.0 if i % 2 == 0 else -1.0
    return vec


# ---------------------------------------------------------------------------
# exhaustive enumeration of tiny spheres (tests only)
# ---------------------------------------------------------------------------


def enumerate_spheres(max_faces: int = 12,
                      degree_bound: int = DEFAULT_DEGREE_BOUND) -> list[Triangulation]:
    """All closed genus-0 triangulations with at most max_faces faces, up to
    isomorphism (reflections identified). Intended for tests; capped at 12
    faces by design.

    Backtracking: grow from the fixed seed face (0,1,2), always completing
    the smallest open directed edge with every viable third vertex (existing
    or one fresh), then deduplicate by canonical code over all root darts.
    """
    if max_faces > 12:
        raise ValueError("enumerator is capped at 12 faces")
    from .iso import triangulation_code

    results: list[Triangulation] = []
    seen: set[bytes] = set()

    def close_or_branch(faces, face_sides, edge_count, degrees, n_vertices):
        open_darts = sorted(d for d in face_sides
                            if (d[1], d[0]) not in face_sides)
        if not open_darts:
            report_faces = list(faces)
            try:
                T = build_triangulation(report_faces, degree_bound=degree_bound)
            except Exception:
                return
            code = triangulation_code(T)
            if code not in seen:
                seen.add(code)
                results.append(T)
            return
        if len(faces) >= max_faces:
            return
        a, b = open_darts[0]
        # the completing face must contain directed (b, a)... the twin side:
        # face on the other side of edge {a,b} holds directed (b,a)? No: the
        # existing face holds (a,b); its twin face holds (b,a).
        for c in list(range(n_vertices)) + [n_vertices]:
            if c == a or c == b:
                continue
            new_face = (b, a, c)
            sides = ((b, a), (a, c), (c, b))
            if any(s in face_sides for s in sides):
                continue
            ok = True
            for u, v in sides:
                e = (u, v) if u < v else (v, u)
                if edge_count.get(e, 0) >= 2:
                    ok = False
                    break
            if not ok:
                continue
            if max(degrees.get(a, 0), degrees.get(b, 0)) >= degree_bound:
                continue
            # duplicate face as a vertex set is non-simplicial
            if frozenset(new_face) in (frozenset(f) for f in faces):
                continue
            faces.append(new_face)
            for s in sides:
                face_sides.add(s)
                e = (s[0], s[1]) if s[0] < s[1] else (s[1], s[0])
                edge_count[e] = edge_count.get(e, 0) + 1
                if edge_count[e] == 1:
                    degrees[s[0]] = degrees.get(s[0], 0) + 1
                    degrees[s[1]] = degrees.get(s[1], 0) + 1
            close_or_branch(faces, face_sides, edge_count, degrees,
                            n_vertices + (1 if c == n_vertices else 0))
            faces.pop()
            for s in sides:
                face_sides.discard(s)
                e = (s[0], s[1]) if s[0] < s[1] else (s[1], s[0])
                edge_count[e] -= 1
                if edge_count[e] == 0:
                    del edge_count[e]
                    degrees[s[0]] -= 1
                    degrees[s[1]] -= 1

    seed = (0, 1, 2)
    face_sides = {(0, 1), (1, 2), (2, 0)}
    edge_count = {(0, 1): 1, (1, 2): 1, (0, 2): 1}
    degrees = {0: 2, 1: 2, 2: 2}
    close_or_branch([seed], face_sides, edge_count, degrees, 3)
    return results
