"""Scenario files: declarative descriptions of frames, systems and tasks.

A scenario is one JSON document with named sections.  Matrices are
written as row-major lists of rows, every entry a two-element
``[re, im]`` pair of decimal floats — the same literal form the report
writer uses for witnesses.  Parsing is eager: groups, representations,
systems, frames, channels and frame morphisms are constructed and
validated immediately, so a scenario that parses is a scenario whose
declared objects all exist.  Validation failures from the constructors
are wrapped in :class:`~framerel.errors.ScenarioValidationError` with
the section and name attached.

Sections
--------
``options``            tolerance / seed / samples overridable per file
``group``              ``{"type":"cyclic","order":n}`` or
                       ``{"type":"table","mult":[[...]],"labels":[...]}``
``representations``    ``{"dim":d,"matrices":{"<element-label-or-id>":M}}``
``systems``            ``{"rep":name,"basis":"full" | [M, ...]}``
``frames``             ``{"rep":name,"seed":M}`` or
                       ``{"rep":name,"effects":{"<label>":M}}``,
                       optional ``"value_space":"full" | [M, ...]``
``channels``           ``{"source":sys,"target":sys,"kind":
                       "matrix_images"|"kraus"|"conjugate_unitary",
                       "data":...}``
``frame_morphisms``    ``{"source":frame,"target":frame,"channel":ch}``
``tasks``              ordered list; each entry carries exactly one of
                       the task keys ``relativize`` / ``relative_subspace``
                       / ``yen_morphism`` / ``check`` /
                       ``external_transform`` plus an optional ``id``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import (
    DimensionMismatch,
    FramerelError,
    ScenarioSyntaxError,
    ScenarioValidationError,
    UnknownReference,
)
from .frames import (
    FrameMorphism,
    FrameObservable,
    build_frame_morphism,
    frame_from_effects,
    principal_frame_from_seed,
)
from .groups import FiniteGroup, UnitaryRep, build_cyclic_group, build_group_from_table, unitary_rep
from .linalg import DEFAULT_TOL
from .systems import (
    ChannelMap,
    SemiQuantumSystem,
    build_channel,
    conjugation_channel,
    full_system,
    kraus_channel,
    subspace_system,
)

DEFAULT_SEED = 7
DEFAULT_SAMPLES = 16

_CHECK_NAMES = (
    "channel_axioms",
    "ideal_isomorphism",
    "functor_laws",
    "naturality",
    "tensor_form",
)
_TASK_KEYS = (
    "relativize",
    "relative_subspace",
    "yen_morphism",
    "check",
    "external_transform",
)


# ------------------------------------------------------------ matrix literals


def decode_matrix(obj: Any, where: str) -> np.ndarray:
    """Decode a row-major [re, im]-pair literal into a complex matrix."""
    if not isinstance(obj, list) or not obj:
        raise ScenarioSyntaxError(f"{where}: matrix literal must be a non-empty list of rows")
    rows: list[list[complex]] = []
    width = None
    for r, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise ScenarioSyntaxError(f"{where}: row {r} is not a non-empty list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DimensionMismatch(
                f"{where}: row {r} has {len(row)} entries, previous rows have {width}"
            )
        decoded = []
        for c, entry in enumerate(row):
            if (
                not isinstance(entry, (list, tuple))
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) for x in entry)
            ):
                raise ScenarioSyntaxError(
                    f"{where}: entry ({r},{c}) must be a two-element [re, im] pair"
                )
            decoded.append(complex(entry[0], entry[1]))
        rows.append(decoded)
    return np.array(rows, dtype=np.complex128)


def _clean(x: float) -> float:
    v = round(float(x), 12)
    return 0.0 if v == 0 else v


def encode_matrix(m) -> list:
    """Encode a complex matrix as the row-major [re, im] literal.

    Entries are rounded to 12 decimal digits and negative zero is
    normalized away, so the encoding is byte-stable across runs.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return [[[_clean(z.real), _clean(z.imag)] for z in row] for row in a]


# ----------------------------------------------------------------- spec types


@dataclass(frozen=True)
class ScenarioTask:
    """One resolved task: kind, stable id and decoded parameters."""

    task_id: str
    kind: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ScenarioSpec:
    """A parsed scenario with every declared object already constructed."""

    group: FiniteGroup
    representations: dict[str, UnitaryRep]
    systems: dict[str, SemiQuantumSystem]
    frames: dict[str, FrameObservable]
    channels: dict[str, ChannelMap]
    frame_morphisms: dict[str, FrameMorphism]
    tasks: tuple[ScenarioTask, ...]
    tolerance: float
    seed: int
    samples: int
    document: dict[str, Any]


def serialize_scenario(spec: ScenarioSpec) -> str:
    """Canonical JSON text; parsing it back yields an equivalent spec."""
    return json.dumps(spec.document, indent=2, sort_keys=True) + "\n"


# -------------------------------------------------------------------- helpers


def _require_mapping(obj: Any, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError(f"{where}: expected an object")
    return obj


def _require_keys(obj: dict, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    for k in required:
        if k not in obj:
            raise ScenarioSyntaxError(f"{where}: missing required key '{k}'")
    for k in obj:
        if k not in required and k not in optional:
            raise ScenarioSyntaxError(f"{where}: unknown key '{k}'")


def _resolve_element(group: FiniteGroup, key: str, section: str) -> int:
    try:
        return group.element_of_label(key)
    except FramerelError:
        raise UnknownReference(key, section) from None


def _lookup(table: dict, name: Any, section: str):
    if not isinstance(name, str) or name not in table:
        raise UnknownReference(str(name), section)
    return table[name]


def _wrap_build(section: str, name: str):
    """Context manager turning constructor failures into scenario diagnostics."""

    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, FramerelError) and not isinstance(
                exc, (ScenarioSyntaxError, UnknownReference, DimensionMismatch, ScenarioValidationError)
            ):
                raise ScenarioValidationError(section, name, exc) from exc
            return False

    return _Ctx()


# -------------------------------------------------------------------- parsing


def _parse_group(stanza: Any) -> tuple[FiniteGroup, dict]:
    g = _require_mapping(stanza, "group")
    gtype = g.get("type")
    if gtype == "cyclic":
        _require_keys(g, "group", ("type", "order"))
        order = g["order"]
        if not isinstance(order, int) or order < 1:
            raise ScenarioSyntaxError("group: 'order' must be a positive integer")
        with _wrap_build("group", f"cyclic-{order}"):
            return build_cyclic_group(order), {"type": "cyclic", "order": order}
    if gtype == "table":
        _require_keys(g, "group", ("type", "mult"), ("labels", "identity"))
        mult = g["mult"]
        if not isinstance(mult, list) or not all(isinstance(r, list) for r in mult):
            raise ScenarioSyntaxError("group: 'mult' must be a list of rows")
        labels = g.get("labels")
        identity = g.get("identity")
        with _wrap_build("group", "table"):
            built = build_group_from_table(mult, identity_element=identity, labels=labels)
        canon = {"type": "table", "mult": [list(map(int, r)) for r in mult]}
        if labels is not None:
            canon["labels"] = list(labels)
        if identity is not None:
            canon["identity"] = int(identity)
        return built, canon
    raise ScenarioSyntaxError("group: 'type' must be 'cyclic' or 'table'")


def _parse_element_keyed_matrices(
    group: FiniteGroup, obj: Any, where: str, section: str, dim: int | None
) -> tuple[list[np.ndarray], dict]:
    """Decode a {element-label-or-id: matrix} map covering the whole group."""
    mapping = _require_mapping(obj, where)
    out: list[np.ndarray | None] = [None] * group.order
    for key, literal in mapping.items():
        g = _resolve_element(group, key, section)
        if out[g] is not None:
            raise ScenarioSyntaxError(f"{where}: element '{key}' listed twice")
        m = decode_matrix(literal, f"{where}['{key}']")
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"{where}['{key}']: matrix must be square")
        if dim is not None and m.shape[0] != dim:
            raise DimensionMismatch(
                f"{where}['{key}']: matrix of dimension {m.shape[0]}, declared dim is {dim}"
            )
        out[g] = m
    missing = [group.label(g) for g in group.elements() if out[g] is None]
    if missing:
        raise ScenarioSyntaxError(f"{where}: no matrix for element(s) {', '.join(missing)}")
    canon = {group.label(g): encode_matrix(out[g]) for g in group.elements()}
    return [m for m in out], canon  # type: ignore[list-item]


def _parse_representations(group: FiniteGroup, stanza: Any, tol: float):
    reps: dict[str, UnitaryRep] = {}
    canon: dict[str, Any] = {}
    for name, entry in _require_mapping(stanza, "representations").items():
        where = f"representations['{name}']"
        e = _require_mapping(entry, where)
        _require_keys(e, where, ("dim", "matrices"))
        dim = e["dim"]
        if not isinstance(dim, int) or dim < 1:
            raise ScenarioSyntaxError(f"{where}: 'dim' must be a positive integer")
        mats, canon_mats = _parse_element_keyed_matrices(
            group, e["matrices"], f"{where}.matrices", "representations", dim
        )
        with _wrap_build("representations", name):
            reps[name] = unitary_rep(group, mats, tol)
        canon[name] = {"dim": dim, "matrices": canon_mats}
    return reps, canon


def _parse_basis_field(value: Any, where: str) -> tuple[str | list[np.ndarray], Any]:
    if value == "full":
        return "full", "full"
    if isinstance(value, list):
        mats = [decode_matrix(m, f"{where}[{i}]") for i, m in enumerate(value)]
        for i, m in enumerate(mats):
            if m.shape[0] != m.shape[1]:
                raise DimensionMismatch(f"{where}[{i}]: matrix must be square")
        return mats, [encode_matrix(m) for m in mats]
    raise ScenarioSyntaxError(f"{where}: expected 'full' or a list of matrix literals")


def _parse_systems(reps: dict[str, UnitaryRep], stanza: Any, tol: float):
    systems: dict[str, SemiQuantumSystem] = {}
    canon: dict[str, Any] = {}
    for name, entry in _require_mapping(stanza, "systems").items():
        where = f"systems['{name}']"
        e = _require_mapping(entry, where)
        _require_keys(e, where, ("rep", "basis"))
        rep = _lookup(reps, e["rep"], "representations")
        basis, canon_basis = _parse_basis_field(e["basis"], f"{where}.basis")
        with _wrap_build("systems", name):
            systems[name] = (
                full_system(rep, tol)
                if basis == "full"
                else subspace_system(rep, basis, tol)
            )
        canon[name] = {"rep": e["rep"], "basis": canon_basis}
    return systems, canon


def _parse_frames(
    group: FiniteGroup, reps: dict[str, UnitaryRep], stanza: Any, tol: float
):
    frames: dict[str, FrameObservable] = {}
    canon: dict[str, Any] = {}
    for name, entry in _require_mapping(stanza, "frames").items():
        where = f"frames['{name}']"
        e = _require_mapping(entry, where)
        _require_keys(e, where, ("rep",), ("seed", "effects", "value_space"))
        rep = _lookup(reps, e["rep"], "representations")
        if ("seed" in e) == ("effects" in e):
            raise ScenarioSyntaxError(f"{where}: give exactly one of 'seed' or 'effects'")
        value_system = None
        canon_entry: dict[str, Any] = {"rep": e["rep"]}
        if "value_space" in e and e["value_space"] != "full":
            gens, canon_vs = _parse_basis_field(e["value_space"], f"{where}.value_space")
            with _wrap_build("frames", name):
                value_system = subspace_system(rep, gens, tol)
            canon_entry["value_space"] = canon_vs
        elif e.get("value_space") == "full":
            canon_entry["value_space"] = "full"
        if "seed" in e:
            seed = decode_matrix(e["seed"], f"{where}.seed")
            if seed.shape != (rep.dim, rep.dim):
                raise DimensionMismatch(
                    f"{where}.seed: matrix of dimension {seed.shape[0]}, "
                    f"representation has {rep.dim}"
                )
            with _wrap_build("frames", name):
                frames[name] = principal_frame_from_seed(rep, seed, value_system, tol)
            canon_entry["seed"] = encode_matrix(seed)
        else:
            effects, canon_eff = _parse_element_keyed_matrices(
                group, e["effects"], f"{where}.effects", "frames", rep.dim
            )
            with _wrap_build("frames", name):
                frames[name] = frame_from_effects(rep, effects, value_system, tol)
            canon_entry["effects"] = canon_eff
        canon[name] = canon_entry
    return frames, canon


def _parse_channels(
    systems: dict[str, SemiQuantumSystem], stanza: Any, tol: float, samples: int, seed: int
):
    channels: dict[str, ChannelMap] = {}
    canon: dict[str, Any] = {}
    for name, entry in _require_mapping(stanza, "channels").items():
        where = f"channels['{name}']"
        e = _require_mapping(entry, where)
        _require_keys(e, where, ("source", "target", "kind", "data"))
        source = _lookup(systems, e["source"], "systems")
        target = _lookup(systems, e["target"], "systems")
        kind = e["kind"]
        data = e["data"]
        if kind == "matrix_images":
            if not isinstance(data, list):
                raise ScenarioSyntaxError(f"{where}.data: expected a list of matrix literals")
            images = [decode_matrix(m, f"{where}.data[{i}]") for i, m in enumerate(data)]
            if len(images) != source.space.dim:
                raise DimensionMismatch(
                    f"{where}.data: {len(images)} images for a source basis of "
                    f"dimension {source.space.dim}"
                )
            with _wrap_build("channels", name):
                channels[name] = build_channel(source, target, images, tol, samples, seed)
            canon_data = [encode_matrix(m) for m in images]
        elif kind == "kraus":
            if not isinstance(data, list):
                raise ScenarioSyntaxError(f"{where}.data: expected a list of matrix literals")
            ops = [decode_matrix(m, f"{where}.data[{i}]") for i, m in enumerate(data)]
            with _wrap_build("channels", name):
                channels[name] = kraus_channel(source, target, ops, tol)
            canon_data = [encode_matrix(m) for m in ops]
        elif kind == "conjugate_unitary":
            u = decode_matrix(data, f"{where}.data")
            with _wrap_build("channels", name):
                channels[name] = conjugation_channel(source, u, target, tol)
            canon_data = encode_matrix(u)
        else:
            raise ScenarioSyntaxError(
                f"{where}: 'kind' must be matrix_images, kraus or conjugate_unitary"
            )
        canon[name] = {
            "source": e["source"],
            "target": e["target"],
            "kind": kind,
            "data": canon_data,
        }
    return channels, canon


def _parse_frame_morphisms(
    frames: dict[str, FrameObservable],
    channels: dict[str, ChannelMap],
    stanza: Any,
    tol: float,
):
    morphisms: dict[str, FrameMorphism] = {}
    canon: dict[str, Any] = {}
    for name, entry in _require_mapping(stanza, "frame_morphisms").items():
        where = f"frame_morphisms['{name}']"
        e = _require_mapping(entry, where)
        _require_keys(e, where, ("source", "target", "channel"))
        source = _lookup(frames, e["source"], "frames")
        target = _lookup(frames, e["target"], "frames")
        channel = _lookup(channels, e["channel"], "channels")
        with _wrap_build("frame_morphisms", name):
            morphisms[name] = build_frame_morphism(source, target, channel, tol)
        canon[name] = {"source": e["source"], "target": e["target"], "channel": e["channel"]}
    return morphisms, canon


# kind -> (required, optional); reference/matrix handling is bespoke below
_TASK_PARAM_SPECS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "relativize": (("frame", "system", "operator"), ("expect",)),
    "relative_subspace": (("frame", "system"), ("expect_dim", "expect_kernel_dim")),
    "yen_morphism": (("morphism", "channel"), ("expect_matrix",)),
    "external_transform": (("morphism", "system", "frame_state", "system_state"), ()),
}


def _parse_tasks(
    stanza: Any,
    frames: dict,
    systems: dict,
    channels: dict,
    morphisms: dict,
) -> tuple[tuple[ScenarioTask, ...], list]:
    if not isinstance(stanza, list) or not stanza:
        raise ScenarioSyntaxError("tasks: expected a non-empty list")
    tasks: list[ScenarioTask] = []
    canon: list[Any] = []
    seen_ids: set[str] = set()
    for idx, raw in enumerate(stanza):
        where = f"tasks[{idx}]"
        t = _require_mapping(raw, where)
        kinds = [k for k in _TASK_KEYS if k in t]
        if len(kinds) != 1:
            raise ScenarioSyntaxError(
                f"{where}: exactly one of {', '.join(_TASK_KEYS)} is required"
            )
        key = kinds[0]
        task_id = t.get("id", f"task-{idx + 1}")
        if not isinstance(task_id, str) or not task_id:
            raise ScenarioSyntaxError(f"{where}: 'id' must be a non-empty string")
        if task_id in seen_ids:
            raise ScenarioSyntaxError(f"{where}: duplicate task id '{task_id}'")
        seen_ids.add(task_id)

        if key == "check":
            check = t["check"]
            if check not in _CHECK_NAMES:
                raise ScenarioSyntaxError(
                    f"{where}: check must be one of {', '.join(_CHECK_NAMES)}"
                )
            kind = f"check:{check}"
            params, canon_task = _parse_check_params(
                t, where, check, frames, systems, channels, morphisms
            )
            canon_task["id"] = task_id
            canon_task["check"] = check
        else:
            body = _require_mapping(t[key], f"{where}.{key}")
            _require_keys(t, where, (key,), ("id",))
            required, optional = _TASK_PARAM_SPECS[key]
            _require_keys(body, f"{where}.{key}", required, optional)
            kind = key
            params, canon_body = _parse_plain_params(
                key, body, f"{where}.{key}", frames, systems, channels, morphisms
            )
            canon_task = {"id": task_id, key: canon_body}
        tasks.append(ScenarioTask(task_id=task_id, kind=kind, params=params))
        canon.append(canon_task)
    return tuple(tasks), canon


def _parse_plain_params(key, body, where, frames, systems, channels, morphisms):
    params: dict[str, Any] = {}
    canon: dict[str, Any] = {}
    for pk, pv in body.items():
        if pk in ("frame",):
            _lookup(frames, pv, "frames")
            params[pk], canon[pk] = pv, pv
        elif pk in ("system",):
            _lookup(systems, pv, "systems")
            params[pk], canon[pk] = pv, pv
        elif pk in ("channel",):
            _lookup(channels, pv, "channels")
            params[pk], canon[pk] = pv, pv
        elif pk in ("morphism",):
            _lookup(morphisms, pv, "frame_morphisms")
            params[pk], canon[pk] = pv, pv
        elif pk in ("operator", "expect", "expect_matrix", "frame_state", "system_state"):
            m = decode_matrix(pv, f"{where}.{pk}")
            params[pk] = m
            canon[pk] = encode_matrix(m)
        elif pk in ("expect_dim", "expect_kernel_dim"):
            if not isinstance(pv, int) or pv < 0:
                raise ScenarioSyntaxError(f"{where}.{pk}: expected a non-negative integer")
            params[pk], canon[pk] = pv, pv
        else:  # pragma: no cover - guarded by _require_keys
            raise ScenarioSyntaxError(f"{where}: unknown parameter '{pk}'")
    return params, canon


_CHECK_PARAM_SPECS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "channel_axioms": (("frame", "system"), ()),
    "ideal_isomorphism": (("frame", "system"), ("expect_ideal",)),
    "functor_laws": (("links",), ()),
    "naturality": (("frame", "channel"), ()),
    "tensor_form": (("morphism", "channel"), ()),
}


def _parse_check_params(t, where, check, frames, systems, channels, morphisms):
    required, optional = _CHECK_PARAM_SPECS[check]
    _require_keys(t, where, ("check",) + required, ("id",) + optional)
    params: dict[str, Any] = {}
    canon: dict[str, Any] = {}
    for pk in required + optional:
        if pk not in t:
            continue
        pv = t[pk]
        if pk == "frame":
            _lookup(frames, pv, "frames")
        elif pk == "system":
            _lookup(systems, pv, "systems")
        elif pk == "channel":
            _lookup(channels, pv, "channels")
        elif pk == "morphism":
            _lookup(morphisms, pv, "frame_morphisms")
        elif pk == "expect_ideal":
            if not isinstance(pv, bool):
                raise ScenarioSyntaxError(f"{where}.expect_ideal: expected true or false")
        elif pk == "links":
            if not isinstance(pv, list) or not pv:
                raise ScenarioSyntaxError(f"{where}.links: expected a non-empty list")
            for i, link in enumerate(pv):
                lw = f"{where}.links[{i}]"
                link_map = _require_mapping(link, lw)
                _require_keys(link_map, lw, ("morphism", "channel"))
                _lookup(morphisms, link_map["morphism"], "frame_morphisms")
                _lookup(channels, link_map["channel"], "channels")
            pv = [
                {"morphism": link["morphism"], "channel": link["channel"]} for link in pv
            ]
        params[pk] = pv
        canon[pk] = pv
    return params, canon


def parse_scenario(
    text: str,
    *,
    tolerance: float | None = None,
    seed: int | None = None,
    samples: int | None = None,
    fallback_tolerance: float = DEFAULT_TOL,
) -> ScenarioSpec:
    """Parse and eagerly build a scenario document.

    ``tolerance``/``seed``/``samples`` override the document's own
    ``options`` (the CLI passes its flags through here), while
    ``fallback_tolerance`` is what applies when neither an override nor
    a document option is present.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    root = _require_mapping(doc, "scenario")
    _require_keys(
        root,
        "scenario",
        ("group", "tasks"),
        ("options", "representations", "systems", "frames", "channels", "frame_morphisms"),
    )

    options = _require_mapping(root.get("options", {}), "options")
    _require_keys(options, "options", (), ("tolerance", "seed", "samples"))
    if "tolerance" in options and not isinstance(options["tolerance"], (int, float)):
        raise ScenarioSyntaxError("options.tolerance: expected a number")
    for k in ("seed", "samples"):
        if k in options and not isinstance(options[k], int):
            raise ScenarioSyntaxError(f"options.{k}: expected an integer")
    tol = float(
        tolerance
        if tolerance is not None
        else options.get("tolerance", fallback_tolerance)
    )
    if tol <= 0:
        raise ScenarioSyntaxError("tolerance must be positive")
    run_seed = int(seed if seed is not None else options.get("seed", DEFAULT_SEED))
    run_samples = int(samples if samples is not None else options.get("samples", DEFAULT_SAMPLES))
    if run_samples < 0:
        raise ScenarioSyntaxError("options.samples: expected a non-negative integer")

    group, canon_group = _parse_group(root["group"])
    reps, canon_reps = _parse_representations(group, root.get("representations", {}), tol)
    systems, canon_systems = _parse_systems(reps, root.get("systems", {}), tol)
    frames, canon_frames = _parse_frames(group, reps, root.get("frames", {}), tol)
    channels, canon_channels = _parse_channels(
        systems, root.get("channels", {}), tol, run_samples, run_seed
    )
    morphisms, canon_morphisms = _parse_frame_morphisms(
        frames, channels, root.get("frame_morphisms", {}), tol
    )
    tasks, canon_tasks = _parse_tasks(
        root.get("tasks"), frames, systems, channels, morphisms
    )

    document: dict[str, Any] = {"group": canon_group, "tasks": canon_tasks}
    if "options" in root:
        document["options"] = dict(options)
    for section, canon in (
        ("representations", canon_reps),
        ("systems", canon_systems),
        ("frames", canon_frames),
        ("channels", canon_channels),
        ("frame_morphisms", canon_morphisms),
    ):
        if canon:
            document[section] = canon

    return ScenarioSpec(
        group=group,
        representations=reps,
        systems=systems,
        frames=frames,
        channels=channels,
        frame_morphisms=morphisms,
        tasks=tasks,
        tolerance=tol,
        seed=run_seed,
        samples=run_samples,
        document=document,
    )
