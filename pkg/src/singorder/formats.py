"""JSON formats for algebras, modules, maps, certificates, triangles and verdicts.

All output is plain ``int``/``str``/``list``/``dict`` data so that
``json.dumps(..., sort_keys=True)`` is byte-deterministic.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import AlgebraKit, AlgebraError, build_algebra, module_from_generators, regular_module
from .degen import DegenerationCertificate, Verdict, make_certificate
from .modrep import (ModuleError, ModuleMorphism, ModuleRep, cyclic_quotient, direct_sum, syzygy,
                     zero_module)
from .stab import StabObject
from .stablecat import LeftTriangle


class FormatError(ValueError):
    """Malformed or inconsistent JSON input."""


def read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _mat(a: np.ndarray) -> list:
    return np.asarray(a, dtype=np.int64).tolist()


# -- algebras -------------------------------------------------------------------

def algebra_to_json(kit: AlgebraKit) -> dict:
    out = {"p": kit.p, "n": kit.n, "unit": _mat(kit.spec.unit), "sc": kit.spec.sparse()}
    if kit.idempotents:
        out["idempotents"] = [_mat(e) for _, e in kit.idempotents]
    if kit.generators:
        out["generators"] = [{"label": lbl, "coords": _mat(g)} for lbl, g in kit.generators]
    return out


def load_algebra(source: dict | str | Path) -> AlgebraKit:
    obj = read_json(source) if isinstance(source, (str, Path)) else source
    if not isinstance(obj, dict):
        raise FormatError("algebra description must be a JSON object")
    try:
        return build_algebra(obj)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"algebra description is missing or mistypes a field: {exc}") from exc


# -- modules ----------------------------------------------------------------------

def module_to_json(M: ModuleRep) -> dict:
    out = {"d": M.d, "action": [_mat(a) for a in M.action]}
    if M.label:
        out["label"] = M.label
    return out


def named_modules(kit: AlgebraKit) -> dict[str, ModuleRep]:
    names = {"A": regular_module(kit), "0": zero_module(kit)}
    for S in kit.simples:
        names[S.label] = S
    for P in kit.projectives:
        names[P.label] = P
    return names


def module_from_json(kit: AlgebraKit, obj: Any, named: dict[str, ModuleRep] | None = None) -> ModuleRep:
    """A module from one of several descriptions.

    * ``{"d", "action"}``: one matrix per algebra basis element
    * ``{"generators": [...]}``: one matrix per algebra generator
    * ``"A"``, ``"0"``, a simple or projective label, or a family label
    * ``{"cyclic_quotient": coords}``: ``A / A·a``
    * ``{"sum": [...]}`` and ``{"syzygy": expr, "times": t}``
    """
    names = dict(named_modules(kit))
    names.update(named or {})
    label = obj.get("label") if isinstance(obj, dict) else None
    try:
        M = _module_expr(kit, obj, names)
    except (KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"bad module description: {exc}") from exc
    return M.relabel(label) if label else M


def _module_expr(kit, obj, names) -> ModuleRep:
    if isinstance(obj, str):
        if obj not in names:
            raise FormatError(f"unknown module name {obj!r}")
        return names[obj]
    if not isinstance(obj, dict):
        raise FormatError("module description must be a string or object")
    if "action" in obj:
        action = tuple(np.mod(np.array(a, dtype=np.int64).reshape(int(obj["d"]), int(obj["d"])), kit.p)
                       for a in obj["action"])
        if len(action) != kit.n:
            raise FormatError(f"module has {len(action)} action matrices, algebra dimension is {kit.n}")
        return ModuleRep(kit.p, action, obj.get("label"))
    if "generators" in obj:
        mats = [np.array(m, dtype=np.int64) for m in obj["generators"]]
        return module_from_generators(kit, mats, obj.get("label"))
    if "name" in obj:
        return _module_expr(kit, obj["name"], names)
    if "cyclic_quotient" in obj:
        return cyclic_quotient(kit, np.array(obj["cyclic_quotient"], dtype=np.int64), obj.get("label"))
    if "sum" in obj:
        parts = [_module_expr(kit, part, names) for part in obj["sum"]]
        return direct_sum(kit, parts).module
    if "syzygy" in obj:
        return syzygy(kit, _module_expr(kit, obj["syzygy"], names), int(obj.get("times", 1)))
    raise FormatError("unrecognised module description")


def load_module(kit: AlgebraKit, source, named=None) -> ModuleRep:
    obj = read_json(source) if isinstance(source, (str, Path)) else source
    return module_from_json(kit, obj, named)


def morphism_to_json(f: ModuleMorphism) -> dict:
    return {"source": f.source.label, "target": f.target.label, "mat": _mat(f.mat)}


# -- certificates and triangles ------------------------------------------------------

def certificate_to_json(c: DegenerationCertificate) -> dict:
    return {"shape": c.shape, "lower": module_to_json(c.lower), "upper": module_to_json(c.upper),
            "Z": module_to_json(c.Z), "u": _mat(c.u.mat), "v": _mat(c.v.mat),
            "metadata": _plain(c.metadata)}


def certificate_from_json(kit: AlgebraKit, obj: dict) -> DegenerationCertificate:
    try:
        lower = module_from_json(kit, obj["lower"])
        upper = module_from_json(kit, obj["upper"])
        Z = module_from_json(kit, obj["Z"])
        u = np.array(obj["u"], dtype=np.int64)
        v = np.array(obj["v"], dtype=np.int64)
        shape = obj["shape"]
    except KeyError as exc:
        raise FormatError(f"certificate is missing {exc}") from exc
    mid = lower.d + Z.d
    left = upper.d if shape == "riedtmann" else Z.d
    right = Z.d if shape == "riedtmann" else upper.d
    if u.reshape(-1).size != mid * left or v.reshape(-1).size != right * mid:
        raise FormatError("certificate map sizes do not match its modules")
    try:
        return make_certificate(kit, shape, lower, upper, Z, u.reshape(mid, left),
                                v.reshape(right, mid), obj.get("metadata"))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def triangle_to_json(T: LeftTriangle) -> dict:
    return {"Z": module_to_json(T.Z), "B": module_to_json(T.B), "C": module_to_json(T.C),
            "u": _mat(T.u.mat), "v": _mat(T.v.mat), "cover": _mat(T.cover.mat),
            "syzygy": module_to_json(T.syz.module), "syzygy_inclusion": _mat(T.syz.inclusion.mat),
            "rho": _mat(T.rho.mat), "w": _mat(T.w.mat)}


# -- stabilization objects ---------------------------------------------------------------

def stab_object_to_json(o: StabObject) -> dict:
    return {"module": o.X.label if o.X.label else module_to_json(o.X), "shift": o.m}


def stab_object_from_json(kit: AlgebraKit, obj: dict, named=None) -> StabObject:
    if not isinstance(obj, dict) or "module" not in obj:
        raise FormatError('stabilization object must look like {"module": ..., "shift": int}')
    return StabObject(module_from_json(kit, obj["module"], named), int(obj.get("shift", 0)))


# -- verdicts ----------------------------------------------------------------------------

def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _mat(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (ModuleRep,)):
        return x.label
    if isinstance(x, ModuleMorphism):
        return morphism_to_json(x)
    return x


def verdict_to_json(v: Verdict, certificates: bool = True) -> dict:
    out = {"status": v.status, "witness": _plain(v.witness), "log": list(v.log),
           "warnings": list(v.warnings)}
    if certificates:
        out["certificates"] = [certificate_to_json(c) for c in v.certificates]
    return out


__all__ = [
    "FormatError", "read_json", "dumps", "algebra_to_json", "load_algebra", "module_to_json",
    "module_from_json", "load_module", "named_modules", "morphism_to_json", "certificate_to_json",
    "certificate_from_json", "triangle_to_json", "stab_object_to_json", "stab_object_from_json",
    "verdict_to_json", "AlgebraError", "ModuleError",
]
