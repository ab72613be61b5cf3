"""Dense real linear algebra shared by every module.

All rank and zero decisions go through a single :class:`Tolerance` so that the
rank used to build a persistence domain and the zero count read off a spectrum
cannot disagree.  Matrices are plain ``numpy.ndarray`` objects of dtype float64
(integer boundary matrices are promoted on entry).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .errors import NotSymmetric

__all__ = [
    "Tolerance",
    "Spectrum",
    "DEFAULT_TOL",
    "as_matrix",
    "pseudoinverse",
    "projector_onto_kernel",
    "symmetric_eigenvalues",
    "orthonormal_kernel_basis",
    "rank",
    "exact_rank",
    "exact_kernel",
    "is_integral",
]


@dataclass(frozen=True)
class Tolerance:
    """Relative/absolute cut-off used for every rank and zero decision."""

    relative: float = 1e-9
    absolute_floor: float = 1e-12

    def __post_init__(self):
        if not (self.relative > 0 and self.absolute_floor > 0):
            raise ValueError("tolerances must be strictly positive")

    def threshold(self, scale: float) -> float:
        """Effective threshold for a matrix whose largest magnitude is ``scale``."""
        return max(self.absolute_floor, self.relative * float(scale))


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple
    zero_multiplicity: int
    spectral_gap: Optional[float]
    threshold: float = field(default=0.0, compare=False)

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def nonzero(self) -> tuple:
        return self.eigenvalues[self.zero_multiplicity:]


def as_matrix(m, rows: Optional[int] = None, cols: Optional[int] = None) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D float array."""
    a = np.asarray(m, dtype=float)
    if a.ndim == 1 and rows is None and cols is None:
        a = a.reshape(-1, 1)
    if rows is not None or cols is not None:
        a = a.reshape(rows if rows is not None else -1, cols if cols is not None else -1)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _svd(a: np.ndarray, full: bool = False):
    if a.size == 0:
        r, c = a.shape
        k = min(r, c)
        u = np.eye(r) if full else np.zeros((r, k))
        vt = np.eye(c) if full else np.zeros((k, c))
        return u, np.zeros(k), vt
    return np.linalg.svd(a, full_matrices=full)


def _cutoff(s: np.ndarray, tol: Tolerance) -> float:
    return tol.threshold(s.max() if s.size else 0.0)


def pseudoinverse(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD with small singular values zeroed."""
    a = as_matrix(m)
    u, s, vt = _svd(a)
    keep = s > _cutoff(s, tol)
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (vt.T * inv) @ u.T


def rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    a = as_matrix(m)
    s = _svd(a)[1]
    return int(np.count_nonzero(s > _cutoff(s, tol)))


def projector_onto_kernel(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector ``I - m^+ m`` onto ``ker(m)``.

    Assembled as ``I - V_r V_r^T`` from the retained right singular vectors,
    which equals ``I - m^+ m`` under the same cutoff but stays idempotent when
    a singular value sits close to the threshold.
    """
    a = as_matrix(m)
    cols = a.shape[1]
    if a.size == 0:
        return np.eye(cols)
    _, s, vt = _svd(a)
    vr = vt[s > _cutoff(s, tol)]
    p = np.eye(cols) - vr.T @ vr
    return (p + p.T) / 2


def orthonormal_kernel_basis(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Columns form an orthonormal basis of ``ker(m)`` (right singular vectors)."""
    a = as_matrix(m)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols)
    _, s, vt = _svd(a, full=True)
    r = int(np.count_nonzero(s > _cutoff(s, tol)))
    return vt[r:].T.copy()


def symmetric_eigenvalues(m, tol: Tolerance = DEFAULT_TOL) -> Spectrum:
    """Eigenvalues of a (numerically) symmetric matrix, with zero classification.

    Raises
    ------
    NotSymmetric
        If ``max|m - m^T|`` exceeds the effective threshold.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"matrix is not square: {a.shape}")
    if a.size == 0:
        return Spectrum((), 0, None, tol.absolute_floor)
    scale = np.abs(a).max()
    defect = np.abs(a - a.T).max()
    if defect > tol.threshold(scale):
        raise NotSymmetric(f"symmetry defect {defect:.3e}")
    w = np.linalg.eigvalsh((a + a.T) / 2)
    thr = tol.threshold(np.abs(w).max())
    zero = int(np.count_nonzero(np.abs(w) <= thr))
    above = w[w > thr]
    gap = float(above.min()) if above.size else None
    # eigvalsh is ascending; entries in [-thr, thr] are the zero block
    return Spectrum(tuple(float(x) for x in w), zero, gap, thr)


# -- exact integer linear algebra (oracle side) --------------------------------


def is_integral(m) -> bool:
    a = np.asarray(m, dtype=float)
    return bool(np.all(np.isfinite(a)) and np.all(a == np.round(a)))


def _int_rows(m) -> list:
    a = np.asarray(m)
    return [[int(round(x)) for x in row] for row in a.reshape(a.shape[0], -1)]


def _rref_int(rows: list, ncols: int):
    """Fraction-free Gauss-Jordan elimination on integer rows.

    Returns the reduced rows (each pivot row content-normalised) and the pivot
    column list.
    """
    rows = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        pc = piv[c]
        for i in range(len(rows)):
            if i == r or rows[i][c] == 0:
                continue
            a = rows[i][c]
            new = [pc * x - a * y for x, y in zip(rows[i], piv)]
            g = 0
            for x in new:
                g = gcd(g, x)
            if g > 1:
                new = [x // g for x in new]
            rows[i] = new
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def exact_rank(m) -> int:
    """Rank of an integer matrix by exact elimination."""
    a = np.asarray(m)
    if a.size == 0:
        return 0
    rows, _ = _rref_int(_int_rows(a), a.shape[1])
    return len(rows)


def exact_kernel(m, ncols: Optional[int] = None) -> np.ndarray:
    """Integer basis of ``ker(m)`` as columns (exact)."""
    a = np.asarray(m)
    n = a.shape[1] if ncols is None else ncols
    if a.size == 0:
        return np.eye(n, dtype=object)
    rows, pivots = _rref_int(_int_rows(a), n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        lcm = 1
        for row, c in zip(rows, pivots):
            if row[f]:
                lcm = lcm * abs(row[c]) // gcd(lcm, abs(row[c]))
        vec = [0] * n
        vec[f] = lcm
        for row, c in zip(rows, pivots):
            if row[f]:
                vec[c] = -row[f] * lcm // row[c]
        basis.append(vec)
    if not basis:
        return np.zeros((n, 0), dtype=object)
    return np.array(basis, dtype=object).T


def hstack_int(blocks: Sequence[np.ndarray], nrows: int) -> np.ndarray:
    parts = []
    for b in blocks:
        b = np.asarray(b, dtype=object)
        parts.append(b.reshape(nrows, -1) if b.size else np.zeros((nrows, 0), dtype=object))
    return np.concatenate(parts, axis=1) if parts else np.zeros((nrows, 0), dtype=object)
