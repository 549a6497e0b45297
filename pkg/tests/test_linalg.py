"""Linear-algebra layer: oracles first, then the library against them."""

import numpy as np
import pytest

from framerel.errors import DimensionError
from framerel.linalg import (
    MatrixSubspace,
    hermitian_basis,
    hs_inner,
    hs_project,
    is_density_matrix,
    is_projection,
    is_psd,
    is_unitary,
    max_abs,
    min_eigenvalue,
    null_space,
    operator_norm,
    orthonormalize,
    partial_trace_first,
    psd_span_samples,
    span_subspace,
    tensor_product,
    unvec,
    vec,
    vector_kernel,
)

# ----------------------------------------------------------------- oracles
#
# Independent implementations used to pin down conventions.  These are
# written from the definitions (index formulas, explicit loops), not by
# calling the code under test.


def kron_oracle(a, b):
    """(a (x) b)[i*db + k, j*db + l] = a[i,j] b[k,l]."""
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da * db, da * db), dtype=complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                for l in range(db):
                    out[i * db + k, j * db + l] = a[i, j] * b[k, l]
    return out


def partial_trace_oracle(m, da, db):
    """Sum of the diagonal (i,i) blocks of the (da x da) block structure."""
    out = np.zeros((db, db), dtype=complex)
    for i in range(da):
        out += m[i * db : (i + 1) * db, i * db : (i + 1) * db]
    return out


def project_oracle(m, spanning):
    """Least-squares projection onto a (not necessarily orthonormal) span."""
    a = np.stack([s.reshape(-1) for s in spanning], axis=1)
    coeff, *_ = np.linalg.lstsq(a, m.reshape(-1), rcond=None)
    return (a @ coeff).reshape(m.shape)


# ------------------------------------------------------------------ basics


def test_vec_unvec_row_major():
    m = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.array_equal(vec(m), np.array([1, 2, 3, 4], dtype=complex))
    assert np.array_equal(unvec(vec(m)), m)
    with pytest.raises(DimensionError):
        unvec(np.arange(3, dtype=complex))


def test_tensor_product_matches_index_oracle():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert max_abs(tensor_product(a, b) - kron_oracle(a, b)) < 1e-14


def test_partial_trace_first_matches_block_oracle():
    rng = np.random.default_rng(12)
    for da, db in [(2, 2), (2, 3), (4, 2)]:
        m = rng.standard_normal((da * db, da * db)) + 1j * rng.standard_normal((da * db, da * db))
        got = partial_trace_first(m, da, db)
        assert max_abs(got - partial_trace_oracle(m, da, db)) < 1e-14
    # trace is preserved
    m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    assert abs(np.trace(partial_trace_first(m, 2, 3)) - np.trace(m)) < 1e-12


def test_partial_trace_of_product_factorizes():
    rng = np.random.default_rng(13)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    got = partial_trace_first(tensor_product(a, b), 3, 2)
    assert max_abs(got - np.trace(a) * b) < 1e-12


def test_predicates_on_fixed_matrices():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    assert is_unitary(x)
    assert not is_unitary(x + 0.1 * np.eye(2))
    assert is_projection(np.diag([1.0, 0.0]).astype(complex))
    assert not is_projection(np.diag([0.5, 0.5]).astype(complex))
    assert is_psd(np.diag([0.3, 0.0]).astype(complex))
    assert not is_psd(np.diag([0.3, -0.2]).astype(complex))
    assert is_density_matrix(np.diag([0.75, 0.25]).astype(complex))
    assert not is_density_matrix(np.diag([0.75, 0.75]).astype(complex))
    assert min_eigenvalue(np.diag([2.0, -3.0]).astype(complex)) == -3.0


def test_operator_norm_is_largest_singular_value():
    m = np.diag([3.0, -4.0]).astype(complex)
    assert operator_norm(m) == 4.0


# ----------------------------------------------------------- orthonormalize


def test_orthonormalize_drops_dependents_and_is_deterministic():
    v1 = np.array([1.0, 0.0, 0.0], dtype=complex)
    v2 = np.array([1.0, 1.0, 0.0], dtype=complex)
    basis = orthonormalize([v1, v2, v1 + v2])
    assert len(basis) == 2
    gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
    assert max_abs(gram - np.eye(2)) < 1e-12
    again = orthonormalize([v1, v2, v1 + v2])
    for a, b in zip(basis, again):
        assert np.array_equal(a, b)  # bit-for-bit reproducible


def test_orthonormalize_randomized_gram_property():
    rng = np.random.default_rng(21)
    for _ in range(20):
        n = rng.integers(2, 7)
        k = rng.integers(1, n + 2)
        vs = [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(k)]
        basis = orthonormalize(vs)
        assert len(basis) == np.linalg.matrix_rank(np.stack(vs))
        gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
        assert max_abs(gram - np.eye(len(basis))) < 1e-12


# ----------------------------------------------------------------- kernels


def test_vector_kernel_dimension_matches_rank_oracle():
    rng = np.random.default_rng(31)
    for _ in range(10):
        rows = rng.integers(1, 6)
        cols = rng.integers(1, 6)
        m = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
        kern = vector_kernel(m)
        assert kern.shape[0] == cols - np.linalg.matrix_rank(m)
        if kern.shape[0]:
            assert max_abs(m @ kern.T) < 1e-12


def test_vector_kernel_scale_invariant():
    m = np.array([[1.0, 1.0, 0.0]], dtype=complex)
    k1 = vector_kernel(m)
    k2 = vector_kernel(1e6 * m)
    assert k1.shape == k2.shape == (2, 3)


def test_null_space_of_commutation_constraint():
    # matrices commuting with diag(1, -1) are the diagonals: dimension 2
    z = np.diag([1.0, -1.0]).astype(complex)
    eye = np.eye(2)
    constraint = np.kron(eye, z.T) - np.kron(z, eye)  # vec(Xz - zX) rows
    space = null_space(constraint)
    assert space.dim == 2
    for b in space.basis:
        assert max_abs(b @ z - z @ b) < 1e-12


# ---------------------------------------------------------------- subspaces


def test_hs_project_matches_lstsq_oracle_on_fixed_case():
    eye = np.eye(2, dtype=complex)
    zmat = np.diag([1.0, -1.0]).astype(complex)
    space = span_subspace([eye, zmat])
    xmat = np.array([[0, 1], [1, 0]], dtype=complex)
    # oracle values: X is HS-orthogonal to span{I, Z}, (I+X)/2 projects to I/2
    assert max_abs(hs_project(xmat, space)) == 0.0
    got = hs_project((eye + xmat) / 2, space)
    assert max_abs(got - eye / 2) < 1e-14
    rng = np.random.default_rng(41)
    for _ in range(25):
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert max_abs(space.project(m) - project_oracle(m, [eye, zmat])) < 1e-12


def test_projection_is_idempotent_and_self_adjoint():
    rng = np.random.default_rng(42)
    mats = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(4)]
    space = span_subspace(mats)
    for _ in range(10):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        pa = space.project(a)
        assert max_abs(space.project(pa) - pa) < 1e-12
        lhs = hs_inner(space.project(a), b)
        rhs = hs_inner(a, space.project(b))
        assert abs(lhs - rhs) < 1e-11


def test_subspace_membership_and_coefficients():
    eye = np.eye(2, dtype=complex)
    zmat = np.diag([1.0, -1.0]).astype(complex)
    space = span_subspace([eye, zmat])
    assert space.dim == 2
    assert space.contains(np.diag([3.0, 7.0]).astype(complex))
    assert not space.contains(np.array([[0, 1], [0, 0]], dtype=complex))
    m = np.diag([2.0, 1.0]).astype(complex)
    assert max_abs(space.combine(space.coefficients(m)) - m) < 1e-14


def test_matrix_subspace_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        MatrixSubspace(2, (np.eye(3, dtype=complex),))
    with pytest.raises(DimensionError):
        span_subspace([np.eye(2, dtype=complex), np.eye(3, dtype=complex)])


def test_hermitian_basis_of_non_selfadjoint_span():
    # complex spans absorb i, so the interesting cases are spans that are
    # not closed under the adjoint: span{E01} holds no hermitian element
    # except 0, and span{I, E01} only the multiples of I
    e01 = np.array([[0, 1], [0, 0]], dtype=complex)
    assert hermitian_basis(span_subspace([e01])) == []
    eye = np.eye(2, dtype=complex)
    basis = hermitian_basis(span_subspace([eye, e01]))
    assert len(basis) == 1
    assert max_abs(basis[0] @ basis[0] - np.eye(2) / 2) < 1e-12  # I/sqrt(2) squared


def test_hermitian_basis_spans_hermitians_of_closed_span():
    rng = np.random.default_rng(43)
    space = span_subspace(
        [np.eye(2, dtype=complex), np.diag([1.0, -1.0]).astype(complex),
         np.array([[0, 1], [1, 0]], dtype=complex)]
    )
    basis = hermitian_basis(space)
    assert len(basis) == 3
    for h in basis:
        assert max_abs(h - np.conj(h).T) < 1e-12
        assert space.contains(h)


def test_psd_span_samples_are_psd_members_of_span():
    space = span_subspace(
        [np.eye(2, dtype=complex), np.diag([1.0, -1.0]).astype(complex)]
    )
    samples = psd_span_samples(space, count=8, seed=3)
    assert len(samples) >= 3
    for s in samples:
        assert is_psd(s, 1e-12)
        assert space.contains(s, 1e-10)
        assert abs(operator_norm(s) - 1.0) < 1e-10
    again = psd_span_samples(space, count=8, seed=3)
    assert len(again) == len(samples)
    for a, b in zip(samples, again):
        assert np.array_equal(a, b)
