"""Filtrations and local views built from point clouds and weighted graphs.

Scale comparisons are closed (``d <= r``).  Clique enumeration walks the
threshold graph in ascending vertex order and extends each clique only with
larger common neighbours, so every clique is emitted once in lexicographic
order; ``max_dim`` caps the simplex dimension (default 3).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .complex import SimplicialComplex, build_complex
from .errors import InvalidPartition, NonMonotoneScales, UnknownVertex
from .numerics import DEFAULT_TOL, Tolerance, pseudoinverse
from .persist import Filtration, make_filtration

DEFAULT_MAX_DIM = 3


@dataclass(frozen=True)
class PointCloud:
    """Finite metric space given by its distance matrix."""

    distances: np.ndarray
    points: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"distance matrix must be square, got {d.shape}")
        if not np.all(np.isfinite(d)) or (d < 0).any():
            raise ValueError("distances must be finite and non-negative")
        if not np.allclose(d, d.T, rtol=0, atol=1e-12) or np.abs(np.diag(d)).max(initial=0) > 0:
            raise ValueError("distance matrix must be symmetric with zero diagonal")
        object.__setattr__(self, "distances", d)

    @classmethod
    def from_points(cls, points) -> "PointCloud":
        x = np.asarray(points, dtype=float)
        if x.ndim != 2:
            raise ValueError("points must be a 2-D array (one row per point)")
        diff = x[:, None, :] - x[None, :, :]
        return cls(np.sqrt((diff ** 2).sum(-1)), x)

    def __len__(self):
        return self.distances.shape[0]

    def neighbours(self, v: int, r: float) -> List[int]:
        row = self.distances[v]
        return [u for u in range(len(self)) if u != v and row[u] <= r]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph; edges are stored with the smaller id first."""

    vertices: Tuple[int, ...]
    edges: Mapping[Tuple[int, int], float]

    def __post_init__(self):
        vs = tuple(sorted(set(int(v) for v in self.vertices)))
        es = {}
        for (a, b), w in dict(self.edges).items():
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            key = (min(a, b), max(a, b))
            if key in es:
                raise ValueError(f"duplicate edge {key}")
            es[key] = float(w)
        missing = {x for e in es for x in e} - set(vs)
        vs = tuple(sorted(set(vs) | missing))
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", dict(sorted(es.items())))

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, int, float]], vertices: Iterable[int] = ()) -> "WeightedGraph":
        return cls(tuple(vertices), {(int(a), int(b)): w for a, b, w in edges})

    def adjacency(self, r: Optional[float] = None) -> Dict[int, set]:
        adj = {v: set() for v in self.vertices}
        for (a, b), w in self.edges.items():
            if r is None or w <= r:
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def neighbours(self, v: int, r: Optional[float] = None) -> List[int]:
        if v not in set(self.vertices):
            raise UnknownVertex(f"vertex {v} is not in the graph")
        return sorted(self.adjacency(r)[v])


def cliques(vertices: Sequence[int], adj: Mapping[int, set], max_size: int) -> List[Tuple[int, ...]]:
    """All cliques with at most ``max_size`` vertices, lexicographically."""
    out = []

    def extend(clique, candidates):
        out.append(clique)
        if len(clique) == max_size:
            return
        for i, u in enumerate(candidates):
            extend(clique + (u,), [w for w in candidates[i + 1:] if w in adj[u]])

    verts = sorted(vertices)
    for i, v in enumerate(verts):
        extend((v,), [u for u in verts[i + 1:] if u in adj[v]])
    return out


def clique_complex(vertices: Sequence[int], adj: Mapping[int, set], max_dim: int = DEFAULT_MAX_DIM) -> SimplicialComplex:
    return build_complex(cliques(vertices, adj, max_dim + 1))


def _threshold_adjacency(x: PointCloud, vertices: Sequence[int], r: float) -> Dict[int, set]:
    d = x.distances
    vs = list(vertices)
    adj = {v: set() for v in vs}
    for i, a in enumerate(vs):
        for b in vs[i + 1:]:
            if d[a, b] <= r:
                adj[a].add(b)
                adj[b].add(a)
    return adj


def vietoris_rips(x: PointCloud, r: float, max_dim: int = DEFAULT_MAX_DIM) -> SimplicialComplex:
    """Simplices of diameter at most ``r`` up to dimension ``max_dim``."""
    vs = range(len(x))
    return clique_complex(vs, _threshold_adjacency(x, vs, r), max_dim)


def _check_scales(scales) -> Tuple[float, ...]:
    s = tuple(float(r) for r in scales)
    if not s:
        raise NonMonotoneScales("at least one scale is required")
    if any(a >= b for a, b in zip(s, s[1:])):
        raise NonMonotoneScales(f"scales must be strictly ascending: {s}")
    return s


def vr_filtration(x: PointCloud, scales: Sequence[float], max_dim: int = DEFAULT_MAX_DIM) -> Filtration:
    s = _check_scales(scales)
    return make_filtration([vietoris_rips(x, r, max_dim) for r in s], s)


def clique_filtration(g: WeightedGraph, scales: Sequence[float], max_dim: int = DEFAULT_MAX_DIM) -> Filtration:
    """Clique complexes of ``G_r = (V, {e : w(e) <= r})``; every vertex is born at step 0."""
    s = _check_scales(scales)
    return make_filtration([clique_complex(g.vertices, g.adjacency(r), max_dim) for r in s], s)


def neighbourhood_complex(x: PointCloud, v: int, r: float, max_dim: int = DEFAULT_MAX_DIM) -> SimplicialComplex:
    """``VR(N_r(v), r)`` capped at ``max_dim - 1`` (the link of a ``max_dim`` complex)."""
    nbrs = x.neighbours(v, r)
    if max_dim < 1:
        return build_complex([])
    return clique_complex(nbrs, _threshold_adjacency(x, nbrs, r), max_dim - 1)


def neighborhood_link_filtration(
    x: PointCloud, v: int, scales: Sequence[float], max_dim: int = DEFAULT_MAX_DIM
) -> List[SimplicialComplex]:
    """Link filtration of ``v`` in the VR filtration, built from neighbourhoods only.

    Returned as a plain list because early steps may be empty complexes.
    """
    if not 0 <= v < len(x):
        raise UnknownVertex(f"point index {v} out of range")
    s = _check_scales(scales)
    return [neighbourhood_complex(x, v, r, max_dim) for r in s]


def graph_link_view(
    g: WeightedGraph, v: int, r: Optional[float] = None, max_dim: int = DEFAULT_MAX_DIM
) -> SimplicialComplex:
    """Clique complex of ``G_r[N_r(v)]`` (the link of ``v`` in ``Clq(G_r)``)."""
    nbrs = g.neighbours(v, r)
    if max_dim < 1:
        return build_complex([])
    adj = g.adjacency(r)
    sub = {u: adj[u] & set(nbrs) for u in nbrs}
    return clique_complex(nbrs, sub, max_dim - 1)


def local_laplacian_dim1_graph(g: WeightedGraph, v: int, r: Optional[float] = None) -> np.ndarray:
    """Graph Laplacian of ``G_r[N_r(v)]`` in ascending neighbour order."""
    nbrs = g.neighbours(v, r)
    pos = {u: i for i, u in enumerate(nbrs)}
    adj = g.adjacency(r)
    lap = np.zeros((len(nbrs), len(nbrs)))
    for u in nbrs:
        for w in adj[u]:
            if w in pos:
                lap[pos[u], pos[w]] = -1.0
        lap[pos[u], pos[u]] = sum(1 for w in adj[u] if w in pos)
    return lap


def incidence_split(
    vertices: Sequence[int], edges: Sequence[Tuple[int, int]], inner: Sequence[int]
) -> Tuple[np.ndarray, np.ndarray, List[int], List[int]]:
    """Signed incidence matrix of a graph split into inner and outer vertex rows.

    Edge ``(a, b)`` with ``a < b`` has boundary ``b - a``.  Returns
    ``(B_in, B_out, inner_order, outer_order)``.
    """
    verts = sorted(set(vertices))
    inner = sorted(set(inner))
    if not set(inner) <= set(verts):
        raise InvalidPartition(f"inner vertices {sorted(set(inner) - set(verts))} not in the graph")
    outer = [u for u in verts if u not in set(inner)]
    row = {u: i for i, u in enumerate(inner + outer)}
    b = np.zeros((len(verts), len(edges)))
    for j, (a, c) in enumerate(edges):
        a, c = min(a, c), max(a, c)
        b[row[a], j] = -1.0
        b[row[c], j] = 1.0
    return b[: len(inner)], b[len(inner):], inner, outer


def persistent_laplacian_from_split(b_in, b_out, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``B_in P B_in^T`` with ``P = I - B_out^T (B_out B_out^T)^+ B_out``."""
    b_in = np.asarray(b_in, dtype=float)
    b_out = np.asarray(b_out, dtype=float)
    if b_out.size == 0:
        b_out = np.zeros((0, b_in.shape[1]))
    p = np.eye(b_in.shape[1]) - b_out.T @ pseudoinverse(b_out @ b_out.T, tol) @ b_out
    lap = b_in @ p @ b_in.T
    return (lap + lap.T) / 2


def persistent_laplacian_dim1_graph_closed_form(
    g_j: WeightedGraph, inner: Sequence[int], r: Optional[float] = None, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Closed-form 0-dimensional persistent Laplacian of ``G_i <= G_j``.

    ``inner`` is the vertex set of ``G_i``; the result is indexed by it in
    ascending order.  Only edges of weight ``<= r`` are used when ``r`` is given.
    """
    edges = [e for e, w in g_j.edges.items() if r is None or w <= r]
    b_in, b_out, _, _ = incidence_split(g_j.vertices, edges, inner)
    return persistent_laplacian_from_split(b_in, b_out, tol)
