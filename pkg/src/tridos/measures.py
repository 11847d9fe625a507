"""Empirical measures on rooted spheres and random-walk diagnostics.

An EmpiricalMeasure is a finite convex combination of rooted spheres: each
atom is a PointedTriangulation with a weight, and weights sum to one. The
two stock weightings are dart-uniform (every dart of every sphere equally
likely, given the sphere) and vertex-uniform (vertices equally likely, a
vertex's mass split over its out-darts, so patch queries still see darts).

Random-walk helpers use the simple walk (uniform step to a neighbor).
Cesaro averaging keeps bipartite examples convergent, and the patch-density
convention splits vertex occupation over out-darts so that long-run patch
densities line up with dart-uniform patch frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Patch, PointedTriangulation, Triangulation
from .errors import EmptyEnsemble, UnknownVertex
from .iso import embed

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Finite measure on rooted spheres; atom weights must sum to one."""

    atoms: tuple  # of (PointedTriangulation, float)

    def __post_init__(self):
        atoms = tuple((pt, float(w)) for pt, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise EmptyEnsemble("measure needs at least one atom")
        total = sum(w for _, w in atoms)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"atom weights sum to {total!r}, not 1")
        if any(w < 0 for _, w in atoms):
            raise ValueError("atom weights must be nonnegative")

    def spheres(self):
        """The distinct underlying triangulations, each with its total mass,
        in first-appearance order."""
        seen = {}
        order = []
        for pt, w in self.atoms:
            key = id(pt.tri)
            if key not in seen:
                seen[key] = [pt.tri, 0.0]
                order.append(key)
            seen[key][1] += w
        return [(seen[k][0], seen[k][1]) for k in order]


def uniform_measure(spheres, mode: str = "dart-uniform") -> EmpiricalMeasure:
    """Equal weight on each sphere, rooted per the mode.

    dart-uniform: all darts of a sphere equally likely. vertex-uniform:
    all vertices equally likely, each splitting its mass over out-darts.
    """
    spheres = list(spheres)
    if not spheres:
        raise EmptyEnsemble("no spheres given")
    if mode not in ("dart-uniform", "vertex-uniform"):
        raise ValueError(f"unknown mode {mode!r}")
    per = 1.0 / len(spheres)
    atoms = []
    for T in spheres:
        if mode == "dart-uniform":
            w = per / len(T.darts)
            atoms.extend((PointedTriangulation(T, d), w) for d in T.darts)
        else:
            for v in T.vertices:
                w = per / T.n_vertices / T.degree(v)
                atoms.extend((PointedTriangulation(T, (v, u)), w)
                             for u in T.adjacency[v])
    return EmpiricalMeasure(tuple(atoms))


def patch_frequency(m: EmpiricalMeasure, A: Patch) -> float:
    """Measure of the event "the patch embeds at the root"."""
    total = 0.0
    cache: dict = {}
    for pt, w in m.atoms:
        key = (id(pt.tri), pt.root)
        hit = cache.get(key)
        if hit is None:
            hit = embed(A, pt) is not None
            cache[key] = hit
        if hit:
            total += w
    return total


def measure_distance(m1: EmpiricalMeasure, m2: EmpiricalMeasure, probes) -> float:
    """Largest disagreement of patch frequencies over the probe patches."""
    return max((abs(patch_frequency(m1, A) - patch_frequency(m2, A))
                for A in probes), default=0.0)


# ---------------------------------------------------------------------------
# random walks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WalkDistribution:
    """Distribution of the simple walk after a fixed number of steps (or its
    Cesaro average over steps 1..n)."""

    probabilities: dict
    steps: int
    start: int
    cesaro: bool = False

    def as_vector(self, T: Triangulation) -> np.ndarray:
        out = np.zeros(T.n_vertices)
        for v, p in self.probabilities.items():
            out[T.vertex_index[v]] = p
        return out


def _start_vertex(T, start) -> int:
    if isinstance(start, tuple):
        start = start[0]
    if start not in T.vertex_index:
        raise UnknownVertex(f"start {start} not in triangulation")
    return start


def _transition(T: Triangulation) -> np.ndarray:
    n = T.n_vertices
    P = np.zeros((n, n))
    for v in T.vertices:
        i = T.vertex_index[v]
        share = 1.0 / T.degree(v)
        for u in T.adjacency[v]:
            P[i, T.vertex_index[u]] = share
    return P


_MONTE_CARLO_THRESHOLD = 100_000


def _walk_vectors(T, start, n, seed=None, samples=200_000):
    """Occupation vectors p_1..p_n of the simple walk from start."""
    v0 = T.vertex_index[_start_vertex(T, start)]
    if T.n_vertices <= _MONTE_CARLO_THRESHOLD:
        P = _transition(T)
        p = np.zeros(T.n_vertices)
        p[v0] = 1.0
        out = []
        for _ in range(n):
            p = p @ P
            out.append(p.copy())
        return out
    # sampled fallback for very large complexes
    rng = np.random.default_rng(seed)
    idx_adj = [np.array([T.vertex_index[u] for u in T.adjacency[v]])
               for v in T.vertices]
    counts = np.zeros((n, T.n_vertices))
    pos = np.full(samples, v0)
    for k in range(n):
        steps = rng.random(samples)
        pos = np.array([idx_adj[p][int(s * len(idx_adj[p]))]
                        for p, s in zip(pos, steps)])
        np.add.at(counts[k], pos, 1.0)
    return [c / samples for c in counts]


def rw_distribution(T: Triangulation, start, k: int,
                    cesaro: bool = False, seed=None) -> WalkDistribution:
    """Distribution of the simple walk after k steps (exact below the
    Monte-Carlo size threshold)."""
    if k < 1:
        raise ValueError("need at least one step")
    vecs = _walk_vectors(T, start, k, seed=seed)
    p = sum(vecs) / k if cesaro else vecs[-1]
    probs = {v: float(p[T.vertex_index[v]]) for v in T.vertices
             if p[T.vertex_index[v]] > 0}
    return WalkDistribution(probs, k, _start_vertex(T, start), cesaro)


def _dart_indicator(T: Triangulation, A: Patch) -> np.ndarray:
    """Per-vertex fraction of out-darts where the patch embeds."""
    ind = np.zeros(T.n_vertices)
    code_cache: dict = {}
    for v in T.vertices:
        hits = 0
        for u in T.adjacency[v]:
            pt = PointedTriangulation(T, (v, u))
            if embed(A, pt) is not None:
                hits += 1
        ind[T.vertex_index[v]] = hits / T.degree(v)
    return ind


def rw_patch_density(T: Triangulation, x, A: Patch, n: int,
                     cesaro: bool = True, seed=None) -> float:
    """Expected patch indicator along the walk from x.

    Vertex occupation is split over out-darts, so with Cesaro averaging this
    converges to the dart-uniform patch frequency of the sphere.
    """
    dist = rw_distribution(T, x, n, cesaro=cesaro, seed=seed)
    ind = _dart_indicator(T, A)
    return float(dist.as_vector(T) @ ind)


def reiter_defect(T: Triangulation, x, y, n: int, seed=None) -> float:
    """L1 distance between the Cesaro-averaged walk distributions from two
    starts; an invariance (almost-invariance) diagnostic that decays for
    neighbors on growing spheres."""
    gx = rw_distribution(T, x, n, cesaro=True, seed=seed).as_vector(T)
    gy = rw_distribution(T, y, n, cesaro=True, seed=seed).as_vector(T)
    return float(np.abs(gx - gy).sum())
