"""Covariant frame observables on finite groups, and morphisms between them.

A frame observable assigns one PSD effect to each group element so that
the effects sum to the identity and translate covariantly under the
frame's own representation: E(g h) = g.E(h).  Principal frames arise by
translating a single seed effect around the group; the canonical ideal
frame of a group puts the regular representation on C^|G| and seeds it
with the projection onto the identity basis vector, which makes every
effect a rank-1 projection.

A frame morphism is a channel between the value systems that carries
the source effects exactly onto the target effects.  Such a channel is
automatically equivariant on the span of the source effects (this is
checked numerically anyway); whether it is equivariant on the whole
value system is recorded separately and never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    EffectSpanNotEquivariant,
    FactorizationFails,
    FrameInvalid,
    GroupMismatch,
    NotAState,
    NotCentral,
    NotUnitary,
    ObjectMismatch,
    SeedNotNormalizing,
    SeedNotPSD,
)
from .groups import FiniteGroup, UnitaryRep, act, regular_representation, same_group
from .linalg import (
    DEFAULT_TOL,
    as_operator,
    dagger,
    identity,
    is_density_matrix,
    is_projection,
    is_psd,
    is_unitary,
    max_abs,
    min_eigenvalue,
)
from .systems import (
    ChannelMap,
    SemiQuantumSystem,
    build_channel,
    compose_channels,
    full_system,
    identity_channel,
    is_equivariant,
    same_system,
)


@dataclass(frozen=True, eq=False)
class FrameObservable:
    """A covariant POVM over a finite group, effects indexed by element id."""

    rep: UnitaryRep
    effects: tuple[np.ndarray, ...]
    value_system: SemiQuantumSystem
    is_ideal: bool

    @property
    def group(self) -> FiniteGroup:
        return self.rep.group

    def effect(self, g: int) -> np.ndarray:
        return self.effects[g]


def _validate_frame(
    rep: UnitaryRep,
    effects: list[np.ndarray],
    value_system: SemiQuantumSystem,
    tol: float,
) -> bool:
    group = rep.group
    if len(effects) != group.order:
        raise DimensionError(
            f"expected {group.order} effects, got {len(effects)}"
        )
    if value_system.dim != rep.dim or not same_group(value_system.group, group):
        raise ObjectMismatch("value system does not live on the frame representation")
    if any(
        max_abs(value_system.rep.matrices[g] - rep.matrices[g]) > tol
        for g in group.elements()
    ):
        raise ObjectMismatch("value system carries a different action")
    total = np.zeros((rep.dim, rep.dim), dtype=np.complex128)
    for g, e in enumerate(effects):
        if e.shape[0] != rep.dim:
            raise DimensionError(
                f"effect {g} has dimension {e.shape[0]}, representation has {rep.dim}"
            )
        if not is_psd(e, tol):
            raise FrameInvalid(
                f"effect for element {group.label(g)} is not positive semidefinite"
            )
        if not value_system.space.contains(e, tol):
            raise FrameInvalid(
                f"effect for element {group.label(g)} leaves the value system span"
            )
        total += e
    dev = max_abs(total - identity(rep.dim))
    if dev > tol:
        raise FrameInvalid(f"effects do not sum to the identity (deviation {dev:.3e})")
    for g in group.elements():
        for h in group.elements():
            dev = max_abs(effects[group.multiply(g, h)] - act(rep, g, effects[h]))
            if dev > tol:
                raise FrameInvalid(
                    f"covariance fails at pair ({group.label(g)}, {group.label(h)}) "
                    f"(deviation {dev:.3e})"
                )
    return all(is_projection(e, tol) for e in effects)


def frame_from_effects(
    rep: UnitaryRep,
    effects,
    value_system: SemiQuantumSystem | None = None,
    tol: float = DEFAULT_TOL,
) -> FrameObservable:
    """Validate an explicit effect family into a frame observable."""
    effs = [as_operator(e) for e in effects]
    vs = value_system if value_system is not None else full_system(rep, tol)
    ideal = _validate_frame(rep, effs, vs, tol)
    return FrameObservable(rep=rep, effects=tuple(effs), value_system=vs, is_ideal=ideal)


def principal_frame_from_seed(
    rep: UnitaryRep,
    seed,
    value_system: SemiQuantumSystem | None = None,
    tol: float = DEFAULT_TOL,
) -> FrameObservable:
    """Frame whose effects are the group translates of one seed effect."""
    s = as_operator(seed)
    if s.shape[0] != rep.dim:
        raise DimensionError(
            f"seed of dimension {s.shape[0]} for a dimension-{rep.dim} representation"
        )
    if not is_psd(s, tol):
        raise SeedNotPSD(min_eigenvalue(s))
    effects = [act(rep, g, s) for g in rep.group.elements()]
    total = sum(effects)
    dev = max_abs(total - identity(rep.dim))
    if dev > tol:
        raise SeedNotNormalizing(dev)
    vs = value_system if value_system is not None else full_system(rep, tol)
    ideal = _validate_frame(rep, effects, vs, tol)
    return FrameObservable(rep=rep, effects=tuple(effects), value_system=vs, is_ideal=ideal)


def canonical_ideal_frame(group: FiniteGroup, tol: float = DEFAULT_TOL) -> FrameObservable:
    """Regular representation seeded at the identity basis projection."""
    rep = regular_representation(group)
    seed = np.zeros((group.order, group.order), dtype=np.complex128)
    seed[group.identity, group.identity] = 1.0
    return principal_frame_from_seed(rep, seed, tol=tol)


def born_measure(frame: FrameObservable, omega, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Outcome distribution p[g] = tr[omega E(g)] of the frame on a state."""
    rho = as_operator(omega)
    if rho.shape[0] != frame.rep.dim:
        raise NotAState(
            f"state has dimension {rho.shape[0]}, frame has {frame.rep.dim}"
        )
    if not is_density_matrix(rho, tol):
        raise NotAState("frame state is not a density matrix")
    values = np.array([np.trace(rho @ e) for e in frame.effects])
    if max_abs(values.imag) > tol * frame.rep.dim:
        raise FrameInvalid("Born weights acquired an imaginary part")
    return values.real.copy()


def same_frame(a: FrameObservable, b: FrameObservable, tol: float = DEFAULT_TOL) -> bool:
    if a is b:
        return True
    if not same_group(a.group, b.group) or a.rep.dim != b.rep.dim:
        return False
    if any(
        max_abs(a.rep.matrices[g] - b.rep.matrices[g]) > tol for g in a.group.elements()
    ):
        return False
    return all(
        max_abs(a.effects[g] - b.effects[g]) <= tol for g in a.group.elements()
    )


# ------------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class FrameMorphism:
    """A value-system channel that factors the target frame through the source."""

    source: FrameObservable
    target: FrameObservable
    channel: ChannelMap
    equivariant_on_value_system: bool

    @property
    def group(self) -> FiniteGroup:
        return self.source.group


def build_frame_morphism(
    source: FrameObservable,
    target: FrameObservable,
    channel: ChannelMap,
    tol: float = DEFAULT_TOL,
) -> FrameMorphism:
    """Validate the factorization target.E(g) = channel(source.E(g)) for all g."""
    if not same_group(source.group, target.group):
        raise GroupMismatch("frame morphism endpoints live over different groups")
    if not same_system(channel.source, source.value_system, tol):
        raise ObjectMismatch("channel source is not the source value system")
    if not same_system(channel.target, target.value_system, tol):
        raise ObjectMismatch("channel target is not the target value system")
    group = source.group
    for g in group.elements():
        dev = max_abs(channel.apply(source.effects[g], tol) - target.effects[g])
        if dev > tol:
            raise FactorizationFails(g, dev, label=group.label(g))
    # Equivariance on the effect span is forced by factorization and
    # covariance; verify it numerically on the effects themselves.
    for g in group.elements():
        for h in group.elements():
            lhs = channel.apply(act(source.rep, g, source.effects[h]), tol)
            rhs = act(target.rep, g, channel.apply(source.effects[h], tol))
            dev = max_abs(lhs - rhs)
            if dev > tol:
                raise EffectSpanNotEquivariant(g, dev)
    full_eq = is_equivariant(channel, tol)
    return FrameMorphism(
        source=source,
        target=target,
        channel=channel,
        equivariant_on_value_system=full_eq.equivariant,
    )


def identity_frame_morphism(frame: FrameObservable, tol: float = DEFAULT_TOL) -> FrameMorphism:
    return build_frame_morphism(
        frame, frame, identity_channel(frame.value_system, tol), tol
    )


def compose_frame_morphisms(
    first: FrameMorphism, second: FrameMorphism, tol: float = DEFAULT_TOL
) -> FrameMorphism:
    """Composite morphism applying ``first`` and then ``second``."""
    if not same_frame(first.target, second.source, tol):
        raise ObjectMismatch("frame morphism composition endpoints do not match")
    channel = compose_channels(second.channel, first.channel, tol)
    return build_frame_morphism(first.source, second.target, channel, tol)


def reorientation_morphism(
    frame: FrameObservable, h: int, tol: float = DEFAULT_TOL
) -> FrameMorphism:
    """Translate a frame by a central element h: effects E'(g) = E(h g).

    The value-system channel is conjugation by U(h).  For non-central h
    the translated family is no longer covariant and NotCentral is
    raised; centrality itself is not tested directly, so a non-faithful
    action that stays covariant is accepted.
    """
    group = frame.group
    if not 0 <= h < group.order:
        raise DimensionError(f"element id {h} outside 0..{group.order - 1}")
    vs = frame.value_system
    images = [act(frame.rep, h, b) for b in vs.space.basis]
    channel = build_channel(vs, vs, images, tol)
    translated = [act(frame.rep, h, e) for e in frame.effects]
    try:
        target = frame_from_effects(frame.rep, translated, vs, tol)
    except FrameInvalid as exc:
        raise NotCentral(h) from exc
    return build_frame_morphism(frame, target, channel, tol)


@dataclass(frozen=True)
class FrameIsomorphismReport:
    isomorphic: bool
    forward_deviation: float
    inverse_deviation: float
    detail: str


def frames_isomorphic_by(
    f1: FrameObservable,
    f2: FrameObservable,
    t,
    tol: float = DEFAULT_TOL,
) -> FrameIsomorphismReport:
    """Check whether conjugation by the unitary t is a frame isomorphism.

    Verification only: confirms a -> t a t^dag carries f1's effects onto
    f2's and its inverse carries them back.  No search is attempted.
    """
    mat = as_operator(t)
    if not is_unitary(mat, tol):
        raise NotUnitary(max_abs(mat @ dagger(mat) - identity(mat.shape[0])))
    if not same_group(f1.group, f2.group):
        raise GroupMismatch("frames live over different groups")
    if mat.shape[0] != f1.rep.dim or f1.rep.dim != f2.rep.dim:
        raise DimensionError("conjugating unitary has the wrong dimension")
    fwd = max(
        max_abs(mat @ f1.effects[g] @ dagger(mat) - f2.effects[g])
        for g in f1.group.elements()
    )
    inv = max(
        max_abs(dagger(mat) @ f2.effects[g] @ mat - f1.effects[g])
        for g in f1.group.elements()
    )
    ok = fwd <= tol and inv <= tol
    detail = "isomorphism verified" if ok else "effects do not correspond under t"
    return FrameIsomorphismReport(
        isomorphic=ok, forward_deviation=fwd, inverse_deviation=inv, detail=detail
    )
