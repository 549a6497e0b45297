"""Dense complex linear algebra over the Hilbert-Schmidt inner product.

Everything downstream (group actions, frames, relativization) works on
plain square ``complex128`` numpy arrays.  Subspaces of the d x d matrix
space are carried as explicit orthonormal bases, so membership tests,
projections and kernels stay cheap and bit-for-bit reproducible: bases
come from a two-pass modified Gram-Schmidt with fixed input ordering,
kernels from LAPACK's SVD, both deterministic on a given platform.

Tolerances are absolute and entrywise.  ``DEFAULT_TOL`` is the global
default; every function takes an explicit override, which is how the
scenario runner threads a configured value through.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

DEFAULT_TOL = 1e-9


def as_operator(m) -> np.ndarray:
    """Coerce to a square complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(m).T


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b)."""
    return complex(np.vdot(a, b))


def hs_norm(m) -> float:
    """Frobenius norm, the norm of the HS inner product."""
    return float(np.linalg.norm(m))


def max_abs(m) -> float:
    """Largest entrywise absolute value (0.0 for empty input)."""
    a = np.asarray(m)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + dagger(m)) / 2.0


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_operator(m)
    return max_abs(a - dagger(a)) <= tol


def min_eigenvalue(m) -> float:
    """Smallest eigenvalue of the Hermitian part."""
    return float(np.linalg.eigvalsh(hermitian_part(as_operator(m)))[0])


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    """Hermitian within tol, then minimum eigenvalue >= -tol * dim."""
    a = as_operator(m)
    if max_abs(a - dagger(a)) > tol:
        return False
    return min_eigenvalue(a) >= -tol * a.shape[0]


def is_projection(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_operator(m)
    return is_hermitian(a, tol) and max_abs(a @ a - a) <= tol


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_operator(m)
    return max_abs(a @ dagger(a) - identity(a.shape[0])) <= tol


def is_density_matrix(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_operator(m)
    return is_psd(a, tol) and abs(np.trace(a) - 1.0) <= tol * a.shape[0]


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product, first factor on coarse (block) indices."""
    return np.kron(as_operator(a), as_operator(b))


def partial_trace_first(m, dim_first: int, dim_second: int) -> np.ndarray:
    """Trace out the first tensor factor of an operator on C^a (x) C^b."""
    a = as_operator(m)
    if dim_first <= 0 or dim_second <= 0:
        raise DimensionError("tensor factor dimensions must be positive")
    if a.shape[0] != dim_first * dim_second:
        raise DimensionError(
            f"operator of dimension {a.shape[0]} does not factor as "
            f"{dim_first} x {dim_second}"
        )
    blocks = a.reshape(dim_first, dim_second, dim_first, dim_second)
    return np.einsum("ijil->jl", blocks)


def operator_norm(m) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_operator(m), 2))


def vec(m) -> np.ndarray:
    """Row-major flattening of a matrix into a vector."""
    return np.asarray(m, dtype=np.complex128).reshape(-1)


def unvec(v, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`; infers a square dimension when omitted."""
    a = np.asarray(v, dtype=np.complex128).reshape(-1)
    if dim is None:
        dim = int(round(np.sqrt(a.size)))
    if dim * dim != a.size:
        raise DimensionError(f"vector of length {a.size} is not a flattened square matrix")
    return a.reshape(dim, dim)


def orthonormalize(vectors, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Two-pass modified Gram-Schmidt in fixed input order.

    Returns an orthonormal list spanning the input span; vectors whose
    residual after projection is <= tol are dropped as dependent.
    """
    basis: list[np.ndarray] = []
    for v in vectors:
        w = np.asarray(v, dtype=np.complex128).reshape(-1).copy()
        for _ in range(2):
            for b in basis:
                w -= np.vdot(b, w) * b
        nrm = float(np.linalg.norm(w))
        if nrm > tol:
            basis.append(w / nrm)
    return basis


def vector_kernel(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal rows spanning the right null space of ``a``.

    The cutoff scales with the largest singular value so that an overall
    rescaling of the constraint rows does not change the answer.
    """
    m = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    if m.size == 0:
        raise DimensionError("empty constraint matrix")
    _, s, vh = np.linalg.svd(m)
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return np.conj(vh[rank:])


@dataclass(frozen=True, eq=False)
class MatrixSubspace:
    """A linear subspace of d x d matrices with an HS-orthonormal basis.

    Factories (:func:`span_subspace`, :func:`null_space`) guarantee the
    orthonormality; direct construction is for callers that already
    hold an orthonormal family.
    """

    ambient_dim: int
    basis: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = self.ambient_dim
        if d <= 0:
            raise DimensionError("ambient dimension must be positive")
        for b in self.basis:
            if b.shape != (d, d):
                raise DimensionError(
                    f"basis element of shape {b.shape} in ambient dimension {d}"
                )
        stack = (
            np.stack([vec(b) for b in self.basis])
            if self.basis
            else np.zeros((0, d * d), dtype=np.complex128)
        )
        object.__setattr__(self, "_stack", stack)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coefficients(self, m) -> np.ndarray:
        """HS coefficients of ``m`` against the orthonormal basis."""
        a = as_operator(m)
        if a.shape[0] != self.ambient_dim:
            raise DimensionError(
                f"operator of dimension {a.shape[0]} in ambient {self.ambient_dim}"
            )
        return np.conj(self._stack) @ vec(a)

    def project(self, m) -> np.ndarray:
        """Orthogonal projection of ``m`` onto the subspace."""
        c = self.coefficients(m)
        return unvec(self._stack.T @ c, self.ambient_dim)

    def residual(self, m) -> float:
        """Entrywise distance from ``m`` to the subspace."""
        return max_abs(as_operator(m) - self.project(m))

    def contains(self, m, tol: float = DEFAULT_TOL) -> bool:
        return self.residual(m) <= tol

    def combine(self, coefficients) -> np.ndarray:
        """Linear combination of the basis with the given coefficients."""
        c = np.asarray(coefficients, dtype=np.complex128)
        if c.shape != (self.dim,):
            raise DimensionError(f"expected {self.dim} coefficients, got {c.shape}")
        return unvec(self._stack.T @ c, self.ambient_dim)


def span_subspace(matrices, ambient_dim: int | None = None, tol: float = DEFAULT_TOL) -> MatrixSubspace:
    """Subspace spanned by the given matrices (dependents dropped)."""
    mats = [as_operator(m) for m in matrices]
    if not mats:
        if ambient_dim is None:
            raise DimensionError("ambient dimension required for an empty span")
        return MatrixSubspace(ambient_dim, ())
    d = mats[0].shape[0]
    if ambient_dim is not None and ambient_dim != d:
        raise DimensionError(f"matrices of dimension {d} in ambient {ambient_dim}")
    for m in mats:
        if m.shape[0] != d:
            raise DimensionError("mixed matrix dimensions in span")
    ortho = orthonormalize([vec(m) for m in mats], tol)
    return MatrixSubspace(d, tuple(unvec(v, d) for v in ortho))


def null_space(rows, tol: float = DEFAULT_TOL) -> MatrixSubspace:
    """Joint kernel of a family of flattened-matrix constraint rows.

    Each row is a d x d matrix flattened as a vector; the solutions are
    returned as an orthonormal basis of d x d matrices.
    """
    arr = [np.asarray(r, dtype=np.complex128).reshape(-1) for r in rows]
    if not arr:
        raise DimensionError("at least one constraint row is required")
    n = arr[0].size
    for r in arr:
        if r.size != n:
            raise DimensionError("constraint rows have mixed lengths")
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise DimensionError(f"row length {n} is not a flattened square matrix")
    kernel = vector_kernel(np.stack(arr), tol)
    return MatrixSubspace(d, tuple(unvec(v, d) for v in kernel))


def hs_project(m, subspace: MatrixSubspace) -> np.ndarray:
    """Orthogonal projection of ``m`` onto ``subspace`` (HS inner product)."""
    return subspace.project(m)


def _transpose_permutation(d: int) -> np.ndarray:
    return np.arange(d * d).reshape(d, d).T.reshape(-1)


def hermitian_basis(subspace: MatrixSubspace, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the real space of Hermitian elements of the span.

    Solves H = H^dag as a real-linear condition on the complex basis
    coefficients; the result can be smaller than the complex dimension
    when the span is not closed under the adjoint.
    """
    n = subspace.dim
    if n == 0:
        return []
    d = subspace.ambient_dim
    m = np.stack([vec(b) for b in subspace.basis], axis=1)  # (d*d, n)
    pm = m[_transpose_permutation(d), :]
    a1 = m - np.conj(pm)
    a2 = 1j * (m + np.conj(pm))
    real_system = np.block(
        [[a1.real, a2.real], [a1.imag, a2.imag]]
    )  # (2 d^2, 2n) real
    rows = vector_kernel(real_system, tol)
    out = []
    for row in rows:
        c = np.real(row[:n]) + 1j * np.real(row[n:])
        h = subspace.combine(c)
        out.append(hermitian_part(h))
    return out


def _shift_into_cone(h: np.ndarray, dim: int) -> np.ndarray | None:
    """Shift a Hermitian matrix by a multiple of I into the PSD cone."""
    low = float(np.linalg.eigvalsh(h)[0])
    shifted = h - min(low, 0.0) * identity(dim)
    nrm = operator_norm(shifted)
    if nrm <= 1e-14:
        return None
    return shifted / nrm


def _rank_one_lattice(dim: int) -> list[np.ndarray]:
    """Deterministic rank-1 projectors: basis kets and pairwise superpositions."""
    kets = [np.eye(dim, dtype=np.complex128)[:, i] for i in range(dim)]
    vs = list(kets)
    for i in range(dim):
        for j in range(i + 1, dim):
            vs.append((kets[i] + kets[j]) / np.sqrt(2))
            vs.append((kets[i] - kets[j]) / np.sqrt(2))
            vs.append((kets[i] + 1j * kets[j]) / np.sqrt(2))
    return [np.outer(v, np.conj(v)) for v in vs]


def psd_span_samples(
    subspace: MatrixSubspace,
    count: int = 16,
    seed: int = 7,
    include_rank_one: bool = False,
    tol: float = DEFAULT_TOL,
) -> list[np.ndarray]:
    """Deterministic PSD elements of the span, for sampled positivity checks.

    A fixed lattice (Hermitian basis directions and pairwise combinations,
    shifted into the cone along I, which the callers guarantee lies in the
    span) is extended with ``count`` seeded random Hermitian combinations.
    With ``include_rank_one`` (full algebras) rank-1 projectors onto a
    fixed set of directions are added as well.
    """
    d = subspace.ambient_dim
    herm = hermitian_basis(subspace, tol)
    samples: list[np.ndarray] = [identity(d)]
    lattice = list(herm[:8])
    for i in range(min(len(herm), 6)):
        for j in range(i + 1, min(len(herm), 6)):
            lattice.append(herm[i] + herm[j])
            lattice.append(herm[i] - herm[j])
    for h in lattice:
        for sign in (1.0, -1.0):
            s = _shift_into_cone(sign * h, d)
            if s is not None:
                samples.append(s)
    if include_rank_one:
        samples.extend(_rank_one_lattice(d))
    if herm and count > 0:
        rng = np.random.default_rng(seed)
        for _ in range(count):
            coeff = rng.standard_normal(len(herm))
            h = sum(c * hk for c, hk in zip(coeff, herm))
            s = _shift_into_cone(h, d)
            if s is not None:
                samples.append(s)
    return samples
