"""Simplicial complexes, boundary matrices, combinatorial Laplacians.

Simplices are tuples of strictly ascending non-negative vertex ids; the
orientation of a simplex is its ascending vertex order and the boundary sign
of the face obtained by deleting position ``i`` is ``(-1)**i``.  Within each
dimension the basis is sorted lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionOutOfRange, InvalidSimplex
from .numerics import exact_rank

Simplex = Tuple[int, ...]


def check_simplex(s: Iterable[int]) -> Simplex:
    t = tuple(int(x) for x in s)
    if not t:
        raise InvalidSimplex("empty simplex")
    if t[0] < 0:
        raise InvalidSimplex(f"negative vertex id in {t}")
    if any(a >= b for a, b in zip(t, t[1:])):
        raise InvalidSimplex(f"vertex ids must be strictly ascending: {t}")
    return t


def faces(s: Simplex):
    """Codimension-one faces with their boundary signs, in deletion order."""
    for i in range(len(s)):
        yield s[:i] + s[i + 1:], (-1) ** i


class SimplicialComplex:
    """Face-closed set of simplices with a canonical basis per dimension.

    Instances are immutable; build them with :func:`build_complex`.
    """

    __slots__ = ("_simplices", "_index")

    def __init__(self, by_dim: Sequence[Sequence[Simplex]]):
        self._simplices = tuple(tuple(sorted(level)) for level in by_dim)
        self._index = tuple({s: i for i, s in enumerate(level)} for level in self._simplices)

    @property
    def max_dimension(self) -> int:
        return len(self._simplices) - 1

    def simplices(self, n: int) -> Tuple[Simplex, ...]:
        if 0 <= n < len(self._simplices):
            return self._simplices[n]
        return ()

    def all_simplices(self):
        for level in self._simplices:
            yield from level

    def index(self, n: int) -> Dict[Simplex, int]:
        if 0 <= n < len(self._index):
            return self._index[n]
        return {}

    def count(self, n: int) -> int:
        return len(self.simplices(n))

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(s[0] for s in self.simplices(0))

    def __contains__(self, s) -> bool:
        s = tuple(s)
        return s in self.index(len(s) - 1)

    def __len__(self):
        return sum(len(level) for level in self._simplices)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self._simplices == other._simplices

    def __hash__(self):
        return hash(self._simplices)

    def __repr__(self):
        counts = ", ".join(str(len(level)) for level in self._simplices)
        return f"SimplicialComplex(f=({counts}))"

    @property
    def is_empty(self) -> bool:
        return not self._simplices

    def degree(self, v: int) -> int:
        return sum(1 for e in self.simplices(1) if v in e)

    # algebra -------------------------------------------------------------

    def boundary_matrix(self, n: int) -> np.ndarray:
        """Integer matrix of ``d_n``: rows = (n-1)-simplices, cols = n-simplices."""
        if not 0 <= n <= self.max_dimension:
            raise DimensionOutOfRange(f"n={n} outside 0..{self.max_dimension}")
        return self._boundary(n)

    def _boundary(self, n: int) -> np.ndarray:
        cols = self.simplices(n)
        if n <= 0:
            return np.zeros((0, len(cols)), dtype=np.int64)
        rows = self.index(n - 1)
        b = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for j, s in enumerate(cols):
            for face, sign in faces(s):
                b[rows[face], j] = sign
        return b

    def laplacian(self, n: int) -> np.ndarray:
        return combinatorial_laplacian(self, n)


def build_complex(simplices: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Face closure of ``simplices`` in canonical order.

    Raises
    ------
    InvalidSimplex
        On empty, unsorted or repeated vertex ids.
    """
    levels: list = []
    for s in simplices:
        t = check_simplex(s)
        d = len(t) - 1
        while len(levels) <= d:
            levels.append(set())
        if t in levels[d]:
            continue
        for k in range(1, len(t) + 1):
            levels[k - 1].update(combinations(t, k))
    return SimplicialComplex(levels)


def subcomplex(k: SimplicialComplex, keep) -> SimplicialComplex:
    """Simplices of ``k`` satisfying ``keep``; caller guarantees face closure."""
    levels = [[s for s in k.simplices(n) if keep(s)] for n in range(k.max_dimension + 1)]
    while levels and not levels[-1]:
        levels.pop()
    return SimplicialComplex(levels)


def combinatorial_laplacian(k: SimplicialComplex, n: int) -> np.ndarray:
    """``d_{n+1} d_{n+1}^T + d_n^T d_n`` in the canonical basis of C_n."""
    if not 0 <= n <= k.max_dimension:
        raise DimensionOutOfRange(f"n={n} outside 0..{k.max_dimension}")
    up = k._boundary(n + 1).astype(float)
    down = k._boundary(n).astype(float)
    return up @ up.T + down.T @ down


def betti_numbers(k: SimplicialComplex, up_to: Optional[int] = None) -> list:
    """Betti numbers by rank-nullity on exact integer boundary ranks."""
    top = k.max_dimension if up_to is None else up_to
    ranks = [exact_rank(k._boundary(n)) for n in range(top + 2)]
    return [k.count(n) - ranks[n] - ranks[n + 1] for n in range(top + 1)]


@dataclass(frozen=True)
class ReducedBetti:
    values: tuple
    empty: bool  # the complex is empty, so reduced H_{-1} is one-dimensional


def reduced_betti_numbers(k: SimplicialComplex, up_to: Optional[int] = None) -> ReducedBetti:
    if k.is_empty:
        n = 0 if up_to is None else up_to + 1
        return ReducedBetti((0,) * n, True)
    b = betti_numbers(k, up_to)
    b[0] -= 1
    return ReducedBetti(tuple(b), False)


# -- abstract chain complexes -------------------------------------------------


@dataclass(frozen=True)
class ChainComplex:
    """Finite chain complex of real inner-product spaces with orthonormal bases.

    ``sizes[n]`` is ``dim C_n``; ``boundaries[n]`` is the matrix of
    ``d_n: C_n -> C_{n-1}``.  Missing degrees are zero spaces.
    """

    sizes: Dict[int, int]
    boundaries: Dict[int, np.ndarray]

    def size(self, n: int) -> int:
        return self.sizes.get(n, 0)

    def boundary(self, n: int) -> np.ndarray:
        b = self.boundaries.get(n)
        if b is None:
            return np.zeros((self.size(n - 1), self.size(n)))
        return b

    @property
    def degrees(self):
        return sorted(d for d, s in self.sizes.items() if s)


def chain_complex(k: SimplicialComplex, augmented: bool = False) -> ChainComplex:
    """Simplicial chain complex of ``k``.

    With ``augmented=True`` a one-dimensional degree ``-1`` (the empty simplex)
    is appended and ``d_0`` becomes the augmentation, so homology is reduced.
    """
    sizes = {n: k.count(n) for n in range(k.max_dimension + 1)}
    bounds = {n: k._boundary(n).astype(float) for n in range(1, k.max_dimension + 1)}
    if augmented:
        sizes[-1] = 1
        bounds[0] = np.ones((1, k.count(0)))
    return ChainComplex(sizes, bounds)
