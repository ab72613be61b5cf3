"""Links, deleted subcomplexes and local Laplacians at a vertex.

Two independent routes to the local Laplacian live here:

* :func:`local_laplacian` works on the link ``Lk_K(v)`` and returns the link
  Laplacian one dimension down.  Its basis is the coface basis
  ``[v, s_1, ..., s_n]`` listed in the canonical order of the link simplices
  ``(s_1, ..., s_n)``; the uniform sign ``(-1)**n`` of the identification drops
  out of the Laplacian so the matrix is the link matrix itself.
* :func:`relative_chain_complex` / :func:`relative_local_laplacian` build the
  quotient complex ``C_*(K, K - v)`` directly from the boundary matrices of
  ``K`` restricted to cofaces of ``v`` (canonical orientation of ``K``).

At ``n = 1`` the two differ by the term ``dbar_1^T dbar_1`` (the all-ones
matrix on the edges at ``v``): the link route uses the unaugmented link
complex, as in the worked matrices of the method, while the quotient complex
carries the augmentation.  ``augmented=True`` adds that term to the link route
so that both agree in every dimension and the kernel has the dimension of the
local homology ``H_n(K, K - v)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .complex import (
    ChainComplex,
    Simplex,
    SimplicialComplex,
    combinatorial_laplacian,
    reduced_betti_numbers,
    subcomplex,
)
from .errors import UnknownVertex


def _require_vertex(k: SimplicialComplex, v: int):
    if (v,) not in k.index(0):
        raise UnknownVertex(f"vertex {v} is not in the complex")


def link(k: SimplicialComplex, v: int) -> SimplicialComplex:
    """``{s in K : v not in s, s + {v} in K}``."""
    _require_vertex(k, v)
    levels = []
    for n in range(1, k.max_dimension + 1):
        level = [tuple(x for x in s if x != v) for s in k.simplices(n) if v in s]
        if not level:
            break
        levels.append(level)
    return SimplicialComplex(levels)


def deleted_subcomplex(k: SimplicialComplex, v: int) -> SimplicialComplex:
    _require_vertex(k, v)
    return subcomplex(k, lambda s: v not in s)


def closed_star(k: SimplicialComplex, v: int) -> SimplicialComplex:
    _require_vertex(k, v)
    lk = link(k, v)
    return subcomplex(k, lambda s: v in s or s in lk)


def cofaces(k: SimplicialComplex, v: int, n: int) -> Tuple[Simplex, ...]:
    """n-simplices containing ``v``, in the canonical order of ``K``."""
    return tuple(s for s in k.simplices(n) if v in s)


@dataclass(frozen=True)
class LocalView:
    """A vertex together with its link and the coface bases induced from it."""

    base: SimplicialComplex
    vertex: int
    link: SimplicialComplex

    def cofaces(self, n: int) -> Tuple[Simplex, ...]:
        """Cofaces of dimension ``n`` listed in the link's canonical order."""
        if n == 0:
            return ((self.vertex,),)
        return tuple(tuple(sorted(s + (self.vertex,))) for s in self.link.simplices(n - 1))

    def orientation_signs(self, n: int) -> np.ndarray:
        """Sign of ``[v, s_1..s_n]`` against the ascending orientation, per coface."""
        if n == 0:
            return np.ones(1)
        v = self.vertex
        return np.array(
            [(-1.0) ** sum(1 for x in s if x < v) for s in self.link.simplices(n - 1)]
        )


def local_view(k: SimplicialComplex, v: int) -> LocalView:
    return LocalView(k, v, link(k, v))


def link_route_laplacian(lk: SimplicialComplex, n: int, augmented: bool = False) -> np.ndarray:
    """Local Laplacian in degree ``n >= 1`` from a link complex alone."""
    m = lk.count(n - 1)
    if m == 0:
        return np.zeros((0, 0))
    lap = combinatorial_laplacian(lk, n - 1)
    if augmented and n == 1:
        lap = lap + np.ones((m, m))
    return lap


def local_laplacian(k: SimplicialComplex, v: int, n: int, augmented: bool = False) -> np.ndarray:
    """Matrix of the n-th local Laplacian at ``v`` in the coface basis.

    ``n = 0`` gives ``[[deg v]]``.  For ``n >= 1`` the result is the
    ``(n-1)``-th combinatorial Laplacian of the link; a ``0 x 0`` matrix when
    ``v`` has no n-cofaces.
    """
    _require_vertex(k, v)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return np.array([[float(k.degree(v))]])
    return link_route_laplacian(link(k, v), n, augmented)


def local_betti(k: SimplicialComplex, v: int, up_to: int) -> list:
    """Local Betti numbers ``dim H_n(K, K - v)`` for ``n = 0..up_to``.

    Read off the reduced Betti numbers of the link shifted up by one; the
    empty link contributes the single class in degree 0.
    """
    _require_vertex(k, v)
    lk = link(k, v)
    red = reduced_betti_numbers(lk, up_to - 1 if up_to >= 1 else None)
    out = [1 if red.empty else 0]
    for n in range(1, up_to + 1):
        vals = red.values
        out.append(vals[n - 1] if n - 1 < len(vals) else 0)
    return out


# -- direct quotient construction ----------------------------------------------


def relative_chain_complex(k: SimplicialComplex, v: int) -> Tuple[ChainComplex, Dict[int, tuple]]:
    """``C_*(K, K - v)`` with the coface basis in the canonical order of ``K``.

    Returns the chain complex and the basis simplices per degree.  Faces that
    avoid ``v`` are zero in the quotient, so each boundary matrix is the
    sub-block of ``d_n`` on coface rows and columns.
    """
    _require_vertex(k, v)
    basis = {}
    sizes = {}
    bounds = {}
    for n in range(k.max_dimension + 1):
        cof = cofaces(k, v, n)
        if not cof:
            break
        basis[n] = cof
        sizes[n] = len(cof)
    for n in range(1, len(basis)):
        d = k._boundary(n)
        rows = [k.index(n - 1)[s] for s in basis[n - 1]]
        cols = [k.index(n)[s] for s in basis[n]]
        bounds[n] = d[np.ix_(rows, cols)].astype(float)
    return ChainComplex(sizes, bounds), basis


def relative_local_laplacian(k: SimplicialComplex, v: int, n: int) -> np.ndarray:
    """``dbar_{n+1} dbar_{n+1}^T + dbar_n^T dbar_n`` on ``C_n(K, K - v)``."""
    cc, _ = relative_chain_complex(k, v)
    up = cc.boundary(n + 1)
    down = cc.boundary(n)
    return up @ up.T + down.T @ down


def to_link_basis(k: SimplicialComplex, v: int, n: int, mat: np.ndarray) -> np.ndarray:
    """Re-express an operator on ``C_n(K, K - v)`` in the link-ordered coface basis.

    Applies the permutation from canonical ``K`` order to link order and the
    orientation signs of ``[v, s_1..s_n]``.
    """
    view = local_view(k, v)
    target = view.cofaces(n)
    src = {s: i for i, s in enumerate(cofaces(k, v, n))}
    perm = [src[s] for s in target]
    signs = view.orientation_signs(n)
    out = mat[np.ix_(perm, perm)]
    return out * np.outer(signs, signs)
