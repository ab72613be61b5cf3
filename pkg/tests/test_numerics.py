import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from perslocal.errors import NotSymmetric
from perslocal.numerics import (
    Tolerance,
    exact_kernel,
    exact_rank,
    orthonormal_kernel_basis,
    projector_onto_kernel,
    pseudoinverse,
    rank,
    symmetric_eigenvalues,
)

RESID = 1e-8
# rounding in any pseudoinverse grows like eps times the condition number of the retained part
KAPPA_FACTOR = 64 * np.finfo(float).eps


def retained_condition(f, tol=Tolerance()):
    s = np.linalg.svd(f, compute_uv=False)
    if not s.size:
        return 1.0
    kept = s[s > tol.threshold(s[0])]
    return float(kept[0] / kept[-1]) if kept.size else 1.0


def penrose_bound(f):
    return max(RESID, KAPPA_FACTOR * retained_condition(f))

shapes = st.tuples(st.integers(1, 12), st.integers(1, 12))
small_matrices = shapes.flatmap(
    lambda s: arrays(np.float64, s, elements=st.floats(-1, 1, allow_nan=False, width=64))
)

# outer rows (v1, v2) of a 4-edge incidence matrix whose edges are not all oriented ascending
MIXED_B_OUT = np.array([[0.0, -1, 1, 0], [0, 0, -1, 1]])


def test_tolerance_rejects_non_positive():
    with pytest.raises(ValueError):
        Tolerance(0.0, 1e-12)
    with pytest.raises(ValueError):
        Tolerance(1e-9, -1.0)


def test_threshold_uses_floor_and_scale():
    tol = Tolerance(1e-9, 1e-12)
    assert tol.threshold(0.0) == 1e-12
    assert tol.threshold(1e6) == pytest.approx(1e-3)


# -- pseudoinverse -------------------------------------------------------------


def test_pinv_identity():
    assert np.allclose(pseudoinverse(np.eye(3)), np.eye(3), atol=1e-14)


def test_pinv_zero_is_zero_transposed_shape():
    p = pseudoinverse(np.zeros((2, 3)))
    assert p.shape == (3, 2)
    assert not p.any()


def test_pinv_column_vector():
    f = np.array([[-1.0], [1.0]])
    fp = pseudoinverse(f)
    assert fp.shape == (1, 2)
    assert np.allclose(fp, [[-0.5, 0.5]], atol=1e-15)
    assert np.allclose(f @ fp @ f, f)
    assert np.allclose((fp @ f).T, fp @ f)


def test_pinv_empty_shapes():
    assert pseudoinverse(np.zeros((0, 3))).shape == (3, 0)
    assert pseudoinverse(np.zeros((4, 0))).shape == (0, 4)


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_penrose_conditions(f):
    fp = pseudoinverse(f)
    bound = penrose_bound(f)
    # only the discarded singular values (below the cutoff) survive here
    assert np.abs(f @ fp @ f - f).max() <= RESID
    # f+ f f+ = f+ is checked relative to the size of f+, which is unbounded
    assert np.abs(fp @ f @ fp - fp).max() <= bound * max(1.0, np.abs(fp).max())
    assert np.abs((f @ fp).T - f @ fp).max() <= bound
    assert np.abs((fp @ f).T - fp @ f).max() <= bound


def test_penrose_well_conditioned_stays_tight(rng):
    for _ in range(50):
        f = rng.uniform(-1, 1, tuple(rng.integers(1, 13, 2)))
        if retained_condition(f) > 1e4:
            continue
        fp = pseudoinverse(f)
        assert np.abs(fp @ f @ fp - fp).max() <= RESID * max(1.0, np.abs(fp).max())
        assert np.abs((f @ fp).T - f @ fp).max() <= RESID
        assert np.abs((fp @ f).T - fp @ f).max() <= RESID


def test_penrose_ill_conditioned_example():
    f = np.array([[1e-8, 1.0], [1e-8, 1e-8]])
    fp = pseudoinverse(f)
    reference = np.linalg.pinv(f)
    assert np.abs((fp @ f).T - fp @ f).max() <= 10 * np.abs((reference @ f).T - reference @ f).max() + RESID
    assert np.abs((fp @ f).T - fp @ f).max() <= penrose_bound(f)


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_pinv_commutes_with_transpose(f):
    fp = pseudoinverse(f)
    assert np.abs(pseudoinverse(f.T) - fp.T).max() <= penrose_bound(f) * max(1.0, np.abs(fp).max())


def test_pinv_left_inverse_for_injective(rng):
    for _ in range(20):
        rows = int(rng.integers(3, 12))
        cols = int(rng.integers(1, rows + 1))
        f = rng.uniform(-1, 1, (rows, cols))
        assert np.abs(pseudoinverse(f) @ f - np.eye(cols)).max() <= RESID


# -- projector / kernel / rank -------------------------------------------------


def test_projector_trivial_cases():
    assert np.allclose(projector_onto_kernel(np.zeros((2, 3))), np.eye(3))
    assert np.allclose(projector_onto_kernel(np.eye(3)), 0)


def test_projector_on_outer_rows():
    p = projector_onto_kernel(MIXED_B_OUT)
    xi1 = np.array([1.0, 0, 0, 0])
    xi2 = np.array([0.0, 1, 1, 1]) / np.sqrt(3)
    expected = np.outer(xi1, xi1) + np.outer(xi2, xi2)
    assert np.abs(p - expected).max() <= 1e-12
    assert rank(p) == 2


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_projector_idempotent_symmetric(m):
    p = projector_onto_kernel(m)
    assert np.abs(p @ p - p).max() <= RESID
    assert np.abs(p - p.T).max() <= RESID
    assert np.abs(m @ p).max() <= RESID


def test_kernel_basis_identity_is_empty():
    q = orthonormal_kernel_basis(np.eye(4))
    assert q.shape == (4, 0)


def test_kernel_basis_zero_row():
    q = orthonormal_kernel_basis(np.zeros((1, 3)))
    assert q.shape == (3, 3)
    assert np.abs(q.T @ q - np.eye(3)).max() <= 1e-12


def test_kernel_basis_outer_rows_span():
    q = orthonormal_kernel_basis(MIXED_B_OUT)
    assert q.shape == (4, 2)
    target = np.array([[1.0, 0, 0, 0], [0, 1, 1, 1]]).T
    # same span: projecting each onto the other loses nothing
    assert np.abs(q @ q.T @ target - target).max() <= 1e-12
    assert np.abs(q.T @ q - np.eye(2)).max() <= 1e-12


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_kernel_basis_properties(m):
    q = orthonormal_kernel_basis(m)
    assert q.shape[1] == m.shape[1] - rank(m)
    if q.shape[1]:
        assert np.abs(q.T @ q - np.eye(q.shape[1])).max() <= RESID
        assert np.abs(m @ q).max() <= RESID


def test_rank_examples():
    assert rank(np.zeros((3, 4))) == 0
    assert rank(np.eye(5)) == 5
    triangle_b1 = np.array([[-1, -1, 0], [1, 0, -1], [0, 1, 1]], dtype=float)
    assert rank(triangle_b1) == 2
    assert exact_rank(triangle_b1.astype(int)) == 2


def test_exact_kernel_integer_columns():
    m = np.array([[1, 1, 0], [0, 1, 1]])
    z = exact_kernel(m, 3)
    assert z.shape == (3, 1)
    assert not (m.astype(object) @ z).any()


@settings(max_examples=40, deadline=None)
@given(shapes.flatmap(lambda s: arrays(np.int64, s, elements=st.integers(-2, 2))))
def test_exact_rank_matches_svd_rank(m):
    assert exact_rank(m) == rank(m.astype(float))
    z = exact_kernel(m, m.shape[1])
    assert z.shape[1] == m.shape[1] - exact_rank(m)
    assert not (m.astype(object) @ z).any()


# -- spectra -------------------------------------------------------------------


def test_spectrum_of_edge_laplacian():
    s = symmetric_eigenvalues(np.array([[1.0, -1], [-1, 1]]))
    assert np.allclose(s.eigenvalues, [0, 2], atol=1e-14)
    assert s.zero_multiplicity == 1
    assert s.spectral_gap == pytest.approx(2.0, abs=1e-14)


def test_spectrum_three_minus_ones():
    s = symmetric_eigenvalues(3 * np.eye(3) - np.ones((3, 3)))
    assert np.allclose(s.eigenvalues, [0, 3, 3], atol=1e-13)
    assert s.zero_multiplicity == 1


def test_spectrum_zero_has_no_gap():
    s = symmetric_eigenvalues(np.zeros((2, 2)))
    assert s.eigenvalues == (0.0, 0.0)
    assert s.zero_multiplicity == 2
    assert s.spectral_gap is None


def test_spectrum_empty():
    s = symmetric_eigenvalues(np.zeros((0, 0)))
    assert len(s) == 0 and s.zero_multiplicity == 0 and s.spectral_gap is None


def test_not_symmetric_raises():
    with pytest.raises(NotSymmetric):
        symmetric_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_gram_spectrum_non_negative(p):
    s = symmetric_eigenvalues(p.T @ p)
    assert min(s.eigenvalues) >= -RESID
    assert list(s.eigenvalues) == sorted(s.eigenvalues)
    assert s.zero_multiplicity + len(s.nonzero) == len(s)
