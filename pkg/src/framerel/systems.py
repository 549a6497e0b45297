"""Semi-quantum systems and the channels between them.

A semi-quantum system is a linear subspace of observables on a finite
dimensional Hilbert space, containing the identity and closed under a
group's conjugation action.  It is the finite stand-in for an
ultraweakly closed operator subspace: enough structure to pair with
states, too little (in general) to multiply.  Channels between systems
are unital positive linear maps recorded by their images on the source
basis; on full matrix algebras positivity is certified exactly through
the Choi matrix, on proper subspaces it is sampled over a deterministic
PSD family (and reported as sampled, never as proved).

States enter through operational equivalence: two density matrices are
the same state of a system when every observable in the span gives them
equal expectations.  ``state_class`` picks the canonical representative
by projecting onto the span of adjoints, which makes class equality a
matrix comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    FramerelError,
    GroupMismatch,
    ImageOutsideTarget,
    NotAState,
    NotPositive,
    NotUnital,
    NotUnitary,
    ObjectMismatch,
    OperatorOutsideSystem,
    RequiresFullAlgebra,
)
from .groups import UnitaryRep, act, same_group
from .linalg import (
    DEFAULT_TOL,
    MatrixSubspace,
    as_operator,
    dagger,
    hermitian_part,
    identity,
    is_density_matrix,
    is_unitary,
    max_abs,
    min_eigenvalue,
    psd_span_samples,
    span_subspace,
    unvec,
    vec,
    vector_kernel,
)

DEFAULT_POSITIVITY_SAMPLES = 16
DEFAULT_POSITIVITY_SEED = 7


@dataclass(frozen=True, eq=False)
class SemiQuantumSystem:
    """An action-closed operator subspace containing the identity."""

    rep: UnitaryRep
    space: MatrixSubspace
    adjoint_space: MatrixSubspace
    is_full_algebra: bool
    is_vn_algebra: bool
    is_invariant: bool
    saturation_added: bool = False

    @property
    def dim(self) -> int:
        """Hilbert space dimension the observables act on."""
        return self.rep.dim

    @property
    def group(self):
        return self.rep.group


def _matrix_units(d: int) -> list[np.ndarray]:
    units = []
    for i in range(d):
        for j in range(d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[i, j] = 1.0
            units.append(m)
    return units


def _closed_under_products(space: MatrixSubspace, tol: float) -> bool:
    for a in space.basis:
        if not space.contains(dagger(a), tol):
            return False
        for b in space.basis:
            if not space.contains(a @ b, tol):
                return False
    return True


def _is_invariant_space(rep: UnitaryRep, space: MatrixSubspace, tol: float) -> bool:
    return all(
        max_abs(act(rep, g, b) - b) <= tol
        for b in space.basis
        for g in rep.group.elements()
    )


def _check_system_consistency(rep: UnitaryRep, space: MatrixSubspace, tol: float) -> None:
    if space.ambient_dim != rep.dim:
        raise DimensionError(
            f"subspace ambient dimension {space.ambient_dim} does not match "
            f"representation dimension {rep.dim}"
        )
    if not space.contains(identity(rep.dim), tol):
        raise FramerelError("system span does not contain the identity")
    for b in space.basis:
        for g in rep.group.elements():
            if not space.contains(act(rep, g, b), tol):
                raise FramerelError("system span is not closed under the group action")


def _assemble_system(
    rep: UnitaryRep,
    space: MatrixSubspace,
    tol: float,
    saturation_added: bool = False,
) -> SemiQuantumSystem:
    _check_system_consistency(rep, space, tol)
    full = space.dim == rep.dim**2
    adjoint_space = (
        space if full else span_subspace([dagger(b) for b in space.basis], tol=tol)
    )
    return SemiQuantumSystem(
        rep=rep,
        space=space,
        adjoint_space=adjoint_space,
        is_full_algebra=full,
        is_vn_algebra=full or _closed_under_products(space, tol),
        is_invariant=_is_invariant_space(rep, space, tol),
        saturation_added=saturation_added,
    )


def full_system(rep: UnitaryRep, tol: float = DEFAULT_TOL) -> SemiQuantumSystem:
    """The full matrix algebra on the representation space.

    The published basis is the matrix units in row-major order, which is
    also the flattening order used by superoperator assembly.
    """
    space = MatrixSubspace(rep.dim, tuple(_matrix_units(rep.dim)))
    return _assemble_system(rep, space, tol)


def subspace_system(rep: UnitaryRep, generators, tol: float = DEFAULT_TOL) -> SemiQuantumSystem:
    """Smallest action-closed span containing the generators and I.

    Saturation is a single sweep: the span of {generators, I} and all
    their translates is already closed because translates of translates
    are translates.  ``saturation_added`` records whether the sweep
    enlarged the plain span of {generators, I}.
    """
    gens = [as_operator(g) for g in generators]
    for g in gens:
        if g.shape[0] != rep.dim:
            raise DimensionError(
                f"generator of dimension {g.shape[0]} for a dimension-{rep.dim} system"
            )
    seeds = gens + [identity(rep.dim)]
    plain_dim = span_subspace(seeds, ambient_dim=rep.dim, tol=tol).dim
    orbit = list(seeds)
    for m in seeds:
        for g in rep.group.elements():
            orbit.append(act(rep, g, m))
    space = span_subspace(orbit, ambient_dim=rep.dim, tol=tol)
    return _assemble_system(rep, space, tol, saturation_added=space.dim > plain_dim)


def invariant_subalgebra(rep: UnitaryRep, tol: float = DEFAULT_TOL) -> SemiQuantumSystem:
    """Commutant of the representation: all operators fixed by the action.

    Computed as the joint kernel of the commutation constraints
    X U(g) - U(g) X = 0, stacked over every group element.
    """
    d = rep.dim
    eye = identity(d)
    blocks = []
    for g in rep.group.elements():
        u = rep.matrices[g]
        blocks.append(np.kron(eye, u.T) - np.kron(u, eye))
    kernel_rows = vector_kernel(np.vstack(blocks), tol)
    space = MatrixSubspace(d, tuple(unvec(v, d) for v in kernel_rows))
    return _assemble_system(rep, space, tol)


def system_from_subspace(
    rep: UnitaryRep, space: MatrixSubspace, tol: float = DEFAULT_TOL
) -> SemiQuantumSystem:
    """Wrap an existing orthonormal subspace as a system (flags recomputed)."""
    return _assemble_system(rep, space, tol)


def same_system(a: SemiQuantumSystem, b: SemiQuantumSystem, tol: float = DEFAULT_TOL) -> bool:
    """Same group, same action, same span (mutual containment)."""
    if a is b:
        return True
    if not same_group(a.group, b.group) or a.dim != b.dim:
        return False
    if any(
        max_abs(a.rep.matrices[g] - b.rep.matrices[g]) > tol
        for g in a.group.elements()
    ):
        return False
    if a.space.dim != b.space.dim:
        return False
    return all(b.space.contains(x, tol) for x in a.space.basis) and all(
        a.space.contains(x, tol) for x in b.space.basis
    )


# --------------------------------------------------------------------- channels


@dataclass(frozen=True, eq=False)
class ChannelMap:
    """A unital positive linear map recorded on the source basis.

    ``positivity_check`` is "choi" when the exact full-algebra
    certificate ran, otherwise "sampled" (with the seed and sample count
    that were used).
    """

    source: SemiQuantumSystem
    target: SemiQuantumSystem
    images: tuple[np.ndarray, ...]
    positivity_check: str
    positivity_seed: int | None
    positivity_samples: int

    def __post_init__(self):
        stack = (
            np.stack([vec(m) for m in self.images])
            if self.images
            else np.zeros((0, self.target.dim**2), dtype=np.complex128)
        )
        object.__setattr__(self, "_image_stack", stack)

    def apply(self, a, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Apply to any operator in the source span."""
        m = as_operator(a)
        c = self.source.space.coefficients(m)
        residual = max_abs(m - self.source.space.combine(c))
        if residual > tol:
            raise OperatorOutsideSystem(residual)
        return unvec(c @ self._image_stack, self.target.dim)

    def matrix(self) -> np.ndarray:
        """Superoperator matrix between the published orthonormal bases."""
        cols = [self.target.space.coefficients(im) for im in self.images]
        return (
            np.stack(cols, axis=1)
            if cols
            else np.zeros((self.target.space.dim, 0), dtype=np.complex128)
        )


def _choi_matrix(images: list[np.ndarray], d_source: int) -> np.ndarray:
    d_target = images[0].shape[0]
    choi = np.zeros((d_source * d_target, d_source * d_target), dtype=np.complex128)
    for i in range(d_source):
        for j in range(d_source):
            unit = np.zeros((d_source, d_source), dtype=np.complex128)
            unit[i, j] = 1.0
            choi += np.kron(unit, images[i * d_source + j])
    return choi


def build_channel(
    source: SemiQuantumSystem,
    target: SemiQuantumSystem,
    images,
    tol: float = DEFAULT_TOL,
    samples: int = DEFAULT_POSITIVITY_SAMPLES,
    seed: int = DEFAULT_POSITIVITY_SEED,
) -> ChannelMap:
    """Validate one image per source basis element into a channel.

    Raises ImageOutsideTarget, NotUnital or NotPositive (with witness)
    when the declared data does not describe a unital positive map into
    the target span.
    """
    if not same_group(source.group, target.group):
        raise GroupMismatch("channel endpoints live over different groups")
    imgs = [as_operator(m) for m in images]
    if len(imgs) != source.space.dim:
        raise DimensionError(
            f"expected {source.space.dim} images, got {len(imgs)}"
        )
    for k, im in enumerate(imgs):
        if im.shape[0] != target.dim:
            raise DimensionError(
                f"image {k} has dimension {im.shape[0]}, target has {target.dim}"
            )
        res = target.space.residual(im)
        if res > tol:
            raise ImageOutsideTarget(k, res, witness=im)

    coeff_identity = source.space.coefficients(identity(source.dim))
    image_of_identity = sum(c * im for c, im in zip(coeff_identity, imgs))
    unital_dev = max_abs(image_of_identity - identity(target.dim))
    if unital_dev > tol:
        raise NotUnital(unital_dev)

    if source.is_full_algebra and target.is_full_algebra:
        choi = _choi_matrix(imgs, source.dim)
        herm_dev = max_abs(choi - dagger(choi))
        low = min_eigenvalue(choi)
        if herm_dev > tol or low < -tol * choi.shape[0]:
            raise NotPositive(
                f"Choi matrix fails positivity (hermiticity deviation "
                f"{herm_dev:.3e}, minimum eigenvalue {low:.3e})",
                min_eigenvalue=low,
            )
        mode, used_seed, used_samples = "choi", None, 0
    else:
        psd = psd_span_samples(
            source.space, count=samples, seed=seed,
            include_rank_one=source.is_full_algebra, tol=tol,
        )
        stack = np.stack([vec(m) for m in imgs])
        for s in psd:
            c = source.space.coefficients(s)
            out = unvec(c @ stack, target.dim)
            low = min_eigenvalue(out)
            if low < -tol * target.dim:
                raise NotPositive(
                    f"sampled PSD input maps to a non-PSD image "
                    f"(minimum eigenvalue {low:.3e})",
                    witness=s,
                    min_eigenvalue=low,
                )
        mode, used_seed, used_samples = "sampled", seed, len(psd)

    return ChannelMap(
        source=source,
        target=target,
        images=tuple(imgs),
        positivity_check=mode,
        positivity_seed=used_seed,
        positivity_samples=used_samples,
    )


def identity_channel(system: SemiQuantumSystem, tol: float = DEFAULT_TOL) -> ChannelMap:
    return build_channel(system, system, list(system.space.basis), tol)


def conjugation_channel(
    system: SemiQuantumSystem,
    u,
    target: SemiQuantumSystem | None = None,
    tol: float = DEFAULT_TOL,
) -> ChannelMap:
    """The channel a -> u a u^dag (u unitary)."""
    mat = as_operator(u)
    if not is_unitary(mat, tol):
        raise NotUnitary(max_abs(mat @ dagger(mat) - identity(mat.shape[0])))
    tgt = target if target is not None else system
    if mat.shape[0] != tgt.dim or mat.shape[0] != system.dim:
        raise DimensionError("conjugating unitary has the wrong dimension")
    images = [mat @ b @ dagger(mat) for b in system.space.basis]
    return build_channel(system, tgt, images, tol)


def kraus_channel(
    source: SemiQuantumSystem,
    target: SemiQuantumSystem,
    kraus_ops,
    tol: float = DEFAULT_TOL,
) -> ChannelMap:
    """Channel a -> sum_k K_k a K_k^dag from Kraus operators (target x source)."""
    ops = [np.asarray(k, dtype=np.complex128) for k in kraus_ops]
    if not ops:
        raise DimensionError("at least one Kraus operator is required")
    for k in ops:
        if k.ndim != 2 or k.shape != (target.dim, source.dim):
            raise DimensionError(
                f"Kraus operator of shape {k.shape}, expected "
                f"({target.dim}, {source.dim})"
            )
    images = [
        sum(k @ b @ dagger(k) for k in ops) for b in source.space.basis
    ]
    return build_channel(source, target, images, tol)


def compose_channels(
    second: ChannelMap, first: ChannelMap, tol: float = DEFAULT_TOL
) -> ChannelMap:
    """The composite ``second after first`` (matching middle systems)."""
    if not same_system(first.target, second.source, tol):
        raise ObjectMismatch("channel composition endpoints do not match")
    images = [second.apply(im, tol) for im in first.images]
    return build_channel(
        first.source,
        second.target,
        images,
        tol,
        samples=second.positivity_samples or DEFAULT_POSITIVITY_SAMPLES,
        seed=second.positivity_seed or DEFAULT_POSITIVITY_SEED,
    )


@dataclass(frozen=True)
class EquivarianceResult:
    equivariant: bool
    deviation: float
    witness_element: int | None = None
    witness_index: int | None = None


def is_equivariant(channel: ChannelMap, tol: float = DEFAULT_TOL) -> EquivarianceResult:
    """Check phi(g.a) = g.phi(a) on the source basis, for every element."""
    src, tgt = channel.source, channel.target
    if not same_group(src.group, tgt.group):
        raise GroupMismatch("equivariance needs one group on both sides")
    worst, w_g, w_i = 0.0, None, None
    for g in src.group.elements():
        for i, b in enumerate(src.space.basis):
            lhs = channel.apply(act(src.rep, g, b), tol)
            rhs = act(tgt.rep, g, channel.apply(b, tol))
            dev = max_abs(lhs - rhs)
            if dev > worst:
                worst, w_g, w_i = dev, g, i
    ok = worst <= tol
    return EquivarianceResult(
        equivariant=ok,
        deviation=worst,
        witness_element=None if ok else w_g,
        witness_index=None if ok else w_i,
    )


def channel_superop(channel: ChannelMap) -> np.ndarray:
    """Full-algebra superoperator S with vec(phi(a)) = S vec(a) (row-major)."""
    if not (channel.source.is_full_algebra and channel.target.is_full_algebra):
        raise RequiresFullAlgebra("superoperator form needs full algebras")
    return np.stack([vec(im) for im in channel.images], axis=1)


def predual_channel(channel: ChannelMap, t, tol: float = DEFAULT_TOL) -> np.ndarray:
    """The predual map on states, defined by tr[phi_*(T) a] = tr[T phi(a)].

    Only available between full matrix algebras, where the pairing is
    non-degenerate; elsewhere the predual lives on a quotient and has no
    canonical matrix form.
    """
    s = channel_superop(channel)
    mat = as_operator(t)
    if mat.shape[0] != channel.target.dim:
        raise DimensionError(
            f"predual input has dimension {mat.shape[0]}, expected {channel.target.dim}"
        )
    return unvec(s.T @ vec(mat.T), channel.source.dim).T


# ----------------------------------------------------------------------- states


@dataclass(frozen=True, eq=False)
class StateClass:
    """Operational equivalence class of a density matrix against a system.

    ``canonical`` is the HS projection of the representative onto the
    span of adjoints of the system space; two classes are equal exactly
    when their canonicals agree within tolerance.
    """

    system: SemiQuantumSystem
    canonical: np.ndarray

    def same_as(self, other: "StateClass", tol: float = DEFAULT_TOL) -> bool:
        if self.canonical.shape != other.canonical.shape:
            return False
        return max_abs(self.canonical - other.canonical) <= tol

    def deviation(self, other: "StateClass") -> float:
        return max_abs(self.canonical - other.canonical)

    def expectation(self, observable) -> complex:
        """tr[rho a]; the canonical representative carries all of these."""
        return complex(np.trace(self.canonical @ as_operator(observable)))


def state_class(
    system: SemiQuantumSystem, rho, tol: float = DEFAULT_TOL
) -> StateClass:
    mat = as_operator(rho)
    if mat.shape[0] != system.dim:
        raise NotAState(
            f"state has dimension {mat.shape[0]}, system has {system.dim}"
        )
    if not is_density_matrix(mat, tol):
        raise NotAState(
            f"not a density matrix (trace {complex(np.trace(mat)):.6f}, "
            f"minimum eigenvalue {min_eigenvalue(hermitian_part(mat)):.3e})"
        )
    return StateClass(system=system, canonical=system.adjoint_space.project(mat))


def quotient_dimension(system: SemiQuantumSystem, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the operational state quotient.

    Computed through the pairing: d^2 minus the dimension of the
    annihilator {T : tr[T a] = 0 for all a in the span}.  Banach space
    duality makes this equal to dim span(space), which the test suite
    asserts as an exact integer identity.
    """
    rows = np.stack([vec(b.T) for b in system.space.basis])
    annihilator = vector_kernel(rows, tol)
    return system.dim**2 - annihilator.shape[0]
