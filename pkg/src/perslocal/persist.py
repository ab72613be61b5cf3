"""Persistent and generalized Laplacians of chain maps, and filtrations.

For a chain map ``f: V -> W`` (a :class:`DGMorphism`) the persistence domain in
degree ``n`` is ``Theta = {x in W_n : d_W x in im f}``, represented by a matrix
with orthonormal columns.  The pullback differential is
``delta = f^+ d_W iota`` and the generalized Laplacian on ``V_n`` is

    delta delta^T + d_V^T d_V + (I - f^+ f)

whose last term vanishes when ``f`` is an isometric embedding (inclusions).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import numerics as nx
from .complex import ChainComplex, SimplicialComplex, chain_complex
from .errors import (
    IndexOutOfRange,
    NonMonotoneScales,
    NonNestedFiltration,
    NotAChainMap,
    UnknownVertex,
    VertexNotBorn,
)
from .localize import link, relative_chain_complex
from .numerics import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class DGMorphism:
    """Degree-zero chain map between two chain complexes."""

    source: ChainComplex
    target: ChainComplex
    maps: Mapping[int, np.ndarray]

    def map(self, n: int) -> np.ndarray:
        m = self.maps.get(n)
        if m is None:
            return np.zeros((self.target.size(n), self.source.size(n)))
        return m

    def chain_map_defect(self) -> float:
        """``max |d_W F_n - F_{n-1} d_V|`` over all degrees."""
        worst = 0.0
        degs = set(self.source.degrees) | set(self.target.degrees)
        for n in degs:
            lhs = self.target.boundary(n) @ self.map(n)
            rhs = self.map(n - 1) @ self.source.boundary(n)
            if lhs.size:
                worst = max(worst, float(np.abs(lhs - rhs).max()))
        return worst

    def validate(self, atol: float = 1e-10) -> "DGMorphism":
        defect = self.chain_map_defect()
        if defect > atol:
            raise NotAChainMap(f"chain map defect {defect:.3e}")
        return self


def identity_morphism(c: ChainComplex) -> DGMorphism:
    return DGMorphism(c, c, {n: np.eye(s) for n, s in c.sizes.items()})


def selection_matrix(small: Sequence, big_index: Mapping) -> np.ndarray:
    """0/1 matrix sending the i-th basis element of ``small`` to its slot in ``big``."""
    m = np.zeros((len(big_index), len(small)))
    for j, s in enumerate(small):
        m[big_index[s], j] = 1.0
    return m


def inclusion_morphism(
    k_small: SimplicialComplex, k_big: SimplicialComplex, augmented: bool = False
) -> DGMorphism:
    """Chain map induced by a subcomplex inclusion ``k_small <= k_big``."""
    src = chain_complex(k_small, augmented)
    dst = chain_complex(k_big, augmented)
    maps = {}
    for n in range(k_small.max_dimension + 1):
        try:
            maps[n] = selection_matrix(k_small.simplices(n), k_big.index(n))
        except KeyError as exc:
            raise NonNestedFiltration(f"simplex {exc.args[0]} missing from the larger complex")
    if augmented:
        maps[-1] = np.ones((1, 1))
    return DGMorphism(src, dst, maps)


def _perm_sign(seq) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def simplicial_map_morphism(
    k: SimplicialComplex, l: SimplicialComplex, vertex_map: Mapping[int, int]
) -> DGMorphism:
    """Chain map of a simplicial map given on vertices.

    A simplex whose image repeats a vertex maps to zero; otherwise it maps to
    the sorted image simplex times the sign of the sorting permutation.
    """
    maps = {}
    for n in range(k.max_dimension + 1):
        idx = l.index(n)
        m = np.zeros((len(idx), k.count(n)))
        for j, s in enumerate(k.simplices(n)):
            image = [vertex_map[x] for x in s]
            if len(set(image)) < len(image):
                continue
            t = tuple(sorted(image))
            if t not in idx:
                raise NotAChainMap(f"image {t} of {s} is not a simplex of the target")
            m[idx[t], j] = _perm_sign(image)
        maps[n] = m
    return DGMorphism(chain_complex(k), chain_complex(l), maps)


# -- persistent operators --------------------------------------------------------


def persistence_domain(f: DGMorphism, n: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of ``{x in W_n : d_W x in im f_{n-1}}``."""
    d = f.target.boundary(n)
    fm = f.map(n - 1)
    outside = nx.projector_onto_kernel(fm.T, tol)
    return nx.orthonormal_kernel_basis(outside @ d, tol)


def pullback_differential(
    f: DGMorphism, n: int, theta: Optional[np.ndarray] = None, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """``f_{n-1}^+ d_W theta``: maps Theta-coordinates into ``V_{n-1}``."""
    if theta is None:
        theta = persistence_domain(f, n, tol)
    return nx.pseudoinverse(f.map(n - 1), tol) @ f.target.boundary(n) @ theta


def generalized_persistent_laplacian(
    f: DGMorphism, n: int, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Generalized Laplacian of ``f`` acting on ``V_n``."""
    up = pullback_differential(f, n + 1, tol=tol)
    down = f.source.boundary(n)
    fn = f.map(n)
    lap = up @ up.T + down.T @ down + nx.projector_onto_kernel(fn, tol)
    return (lap + lap.T) / 2


def persistent_betti_oracle(f: DGMorphism, n: int, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of ``H_n(V) -> H_n(W)``: ``rank[F Z_V | B_W] - rank B_W``.

    Exact integer elimination when all inputs are integral, otherwise
    tolerance-based SVD rank.
    """
    dv = f.source.boundary(n)
    fn = f.map(n)
    bw = f.target.boundary(n + 1)
    rows = f.target.size(n)
    if rows == 0 or f.source.size(n) == 0:
        return 0
    if all(nx.is_integral(m) for m in (dv, fn, bw)):
        z = nx.exact_kernel(np.rint(dv).astype(np.int64), f.source.size(n))
        fz = np.rint(fn).astype(np.int64).astype(object) @ z if z.shape[1] else np.zeros((rows, 0), dtype=object)
        stacked = nx.hstack_int([fz, np.rint(bw).astype(np.int64)], rows)
        return nx.exact_rank(stacked) - nx.exact_rank(np.rint(bw).astype(np.int64))
    z = nx.orthonormal_kernel_basis(dv, tol)
    stacked = np.hstack([fn @ z, bw]) if rows else np.zeros((0, 0))
    return nx.rank(stacked, tol) - nx.rank(bw, tol)


# -- filtrations -----------------------------------------------------------------


@dataclass(frozen=True)
class Filtration:
    complexes: Tuple[SimplicialComplex, ...]
    scales: Tuple[float, ...]

    def __len__(self):
        return len(self.complexes)

    def __getitem__(self, i) -> SimplicialComplex:
        return self.complexes[i]

    @property
    def m(self) -> int:
        return len(self.complexes) - 1

    def birth(self, v: int) -> int:
        for i, k in enumerate(self.complexes):
            if (v,) in k.index(0):
                return i
        raise UnknownVertex(f"vertex {v} never appears in the filtration")

    def persistent_vertex(self, v: int) -> "PersistentVertex":
        return PersistentVertex(v, self.birth(v))


def make_filtration(complexes: Sequence[SimplicialComplex], scales: Sequence[float]) -> Filtration:
    """Validate scales and nesting and wrap them in a :class:`Filtration`."""
    scales = tuple(float(r) for r in scales)
    if not scales:
        raise NonMonotoneScales("a filtration needs at least one scale")
    if len(scales) != len(complexes):
        raise ValueError("one scale per complex required")
    if any(a >= b for a, b in zip(scales, scales[1:])):
        raise NonMonotoneScales(f"scales must be strictly ascending: {scales}")
    for i, (a, b) in enumerate(zip(complexes, complexes[1:])):
        for s in a.all_simplices():
            if s not in b:
                raise NonNestedFiltration(f"simplex {s} of step {i} missing at step {i + 1}")
    return Filtration(tuple(complexes), scales)


@dataclass(frozen=True)
class PersistentVertex:
    v: int
    birth: int


def _check_pair(filt: Filtration, pv: PersistentVertex, i: int, j: int):
    if not 0 <= i <= j <= filt.m:
        raise IndexOutOfRange(f"need 0 <= i <= j <= {filt.m}, got ({i}, {j})")
    if i < pv.birth:
        raise VertexNotBorn(f"vertex {pv.v} is born at index {pv.birth} > {i}")


def link_pair(filt: Filtration, pv: PersistentVertex, i: int, j: int):
    _check_pair(filt, pv, i, j)
    return link(filt[i], pv.v), link(filt[j], pv.v)


def persistent_laplacian_of_links(
    lk_i: SimplicialComplex, lk_j: SimplicialComplex, n: int,
    augmented: bool = False, tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """Persistent local Laplacian in degree ``n >= 1`` from the two link complexes."""
    f = inclusion_morphism(lk_i, lk_j, augmented)
    if f.source.size(n - 1) == 0:
        return np.zeros((0, 0))
    return generalized_persistent_laplacian(f, n - 1, tol)


def persistent_local_laplacian(
    filt: Filtration, pv: PersistentVertex, n: int, i: int, j: int,
    tol: Tolerance = DEFAULT_TOL, augmented: bool = False,
) -> np.ndarray:
    """(i, j)-persistent local Laplacian at ``pv`` computed on the link filtration.

    ``n = 0`` uses the closed form ``[[deg_{r_j} v]]``.  ``augmented`` has the
    same meaning as in :func:`perslocal.localize.local_laplacian`.
    """
    if n == 0:
        return persistent_local_laplacian_dim0(filt, pv, i, j)
    lk_i, lk_j = link_pair(filt, pv, i, j)
    return persistent_laplacian_of_links(lk_i, lk_j, n, augmented, tol)


def persistent_local_laplacian_dim0(filt: Filtration, pv: PersistentVertex, i: int, j: int) -> np.ndarray:
    _check_pair(filt, pv, i, j)
    return np.array([[float(filt[j].degree(pv.v))]])


def relative_inclusion(k_i: SimplicialComplex, k_j: SimplicialComplex, v: int) -> DGMorphism:
    """Chain map ``C_*(K_i, K_i - v) -> C_*(K_j, K_j - v)`` on coface bases."""
    src, basis_i = relative_chain_complex(k_i, v)
    dst, basis_j = relative_chain_complex(k_j, v)
    maps = {}
    for n, cof in basis_i.items():
        idx = {s: t for t, s in enumerate(basis_j[n])}
        maps[n] = selection_matrix(cof, idx)
    return DGMorphism(src, dst, maps)


def relative_persistent_local_laplacian(
    filt: Filtration, pv: PersistentVertex, n: int, i: int, j: int, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Same operator built directly on the relative complexes (canonical K basis)."""
    _check_pair(filt, pv, i, j)
    f = relative_inclusion(filt[i], filt[j], pv.v)
    if f.source.size(n) == 0:
        return np.zeros((0, 0))
    return generalized_persistent_laplacian(f, n, tol)


def persistent_local_betti(
    filt: Filtration, pv: PersistentVertex, n: int, i: int, j: int,
    route: str = "relative", tol: Tolerance = DEFAULT_TOL,
) -> int:
    """Rank of ``H_n(K_i, K_i - v) -> H_n(K_j, K_j - v)``.

    ``route="relative"`` runs the exact oracle on the quotient complexes;
    ``route="link"`` runs it on the augmented link inclusion one degree down.
    """
    _check_pair(filt, pv, i, j)
    if route == "relative":
        return persistent_betti_oracle(relative_inclusion(filt[i], filt[j], pv.v), n, tol)
    if route == "link":
        lk_i, lk_j = link(filt[i], pv.v), link(filt[j], pv.v)
        return persistent_betti_oracle(inclusion_morphism(lk_i, lk_j, augmented=True), n - 1, tol)
    raise ValueError(f"unknown route {route!r}")
