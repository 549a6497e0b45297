"""Shared constructions for the test suite: groups, reps, frames, channels.

Everything here is deliberately independent of the library's internals:
representations are given by explicit matrices, permutation products are
computed with itertools, and the smearing/depolarizing channels are
written out in closed form so tests can cross-check library output
against these directly.
"""

import itertools

import numpy as np

import framerel as fr

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def ket(i, d):
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def proj(v):
    return np.outer(v, np.conj(v))


# ------------------------------------------------------------------- groups


def z2():
    return fr.build_cyclic_group(2)


def z2_flip_rep():
    """Z2 on a qubit by conjugation with X."""
    return fr.unitary_rep(z2(), [I2, X])


def zn_phase_rep(n):
    """Zn on a qubit: k acts as diag(1, w^k) with w = exp(2 pi i / n)."""
    g = fr.build_cyclic_group(n)
    w = np.exp(2j * np.pi / n)
    mats = [np.diag([1.0, w**k]).astype(complex) for k in range(n)]
    return fr.unitary_rep(g, mats)


def s3():
    return fr.build_symmetric_group(3)


def s3_irrep2():
    """The 2-dimensional irreducible representation of S3.

    Obtained by restricting the permutation representation on C^3 to the
    plane of sum-zero vectors, in the orthonormal basis
    (1,-1,0)/sqrt(2), (1,1,-2)/sqrt(6).  The permutation matrices are
    built here from itertools, independent of the group module.
    """
    group = s3()
    v = np.array(
        [
            [1 / np.sqrt(2), 1 / np.sqrt(6)],
            [-1 / np.sqrt(2), 1 / np.sqrt(6)],
            [0.0, -2 / np.sqrt(6)],
        ]
    )
    mats = []
    for p in sorted(itertools.permutations(range(3))):
        perm = np.zeros((3, 3))
        for k in range(3):
            perm[p[k], k] = 1.0
        mats.append((v.T @ perm @ v).astype(complex))
    return fr.unitary_rep(group, mats)


# ------------------------------------------------------------------- frames


def z2_ideal_frame():
    return fr.principal_frame_from_seed(z2_flip_rep(), np.diag([1.0, 0.0]).astype(complex))


def z2_smeared_frame(lam):
    """Seed (1-lam)|0><0| + lam I/2 = diag(1 - lam/2, lam/2)."""
    seed = np.diag([1 - lam / 2, lam / 2]).astype(complex)
    return fr.principal_frame_from_seed(z2_flip_rep(), seed)


def z2_unlocalized_frame():
    return fr.principal_frame_from_seed(z2_flip_rep(), I2 / 2)


def smeared_canonical_frame(group, lam):
    """Canonical frame of a group, smeared toward the uniform effect."""
    n = group.order
    rep = fr.regular_representation(group)
    seed = (1 - lam) * proj(ket(group.identity, n)) + lam * np.eye(n, dtype=complex) / n
    return fr.principal_frame_from_seed(rep, seed)


def unlocalized_canonical_frame(group):
    n = group.order
    rep = fr.regular_representation(group)
    return fr.principal_frame_from_seed(rep, np.eye(n, dtype=complex) / n)


# ------------------------------------------------------------------ channels


def depolarizing_channel(system, nu, target=None):
    """a -> (1-nu) a + nu tr(a) I/d, equivariant for every representation."""
    tgt = target if target is not None else system
    d = system.dim
    images = [
        (1 - nu) * b + nu * np.trace(b) * np.eye(d, dtype=complex) / d
        for b in system.space.basis
    ]
    return fr.build_channel(system, tgt, images)


def smearing_morphism(group, lam, ideal=None):
    """Morphism from a canonical-style ideal frame onto its smeared version."""
    frame = ideal if ideal is not None else fr.canonical_ideal_frame(group)
    d = frame.rep.dim
    seed = (1 - lam) * frame.effects[group.identity] + lam * np.eye(d, dtype=complex) / d
    smeared = fr.principal_frame_from_seed(frame.rep, seed)
    channel = depolarizing_channel(frame.value_system, lam)
    return fr.build_frame_morphism(frame, smeared, channel)


def z2_smearing_morphism(lam):
    ideal = z2_ideal_frame()
    smeared = z2_smeared_frame(lam)
    channel = depolarizing_channel(ideal.value_system, lam)
    return fr.build_frame_morphism(ideal, smeared, channel)


def ampliation_channel(system, extra_dim):
    """a -> a (x) I_k into the full system on rep (x) trivial(k)."""
    joint = fr.tensor_rep(system.rep, fr.trivial_rep(system.group, extra_dim))
    target = fr.full_system(joint)
    eye = np.eye(extra_dim, dtype=complex)
    images = [np.kron(b, eye) for b in system.space.basis]
    return fr.build_channel(system, target, images)


def random_density(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ np.conj(a).T
    return rho / np.trace(rho)


def random_span_element(rng, space):
    c = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return space.combine(c)
