"""Module families, relation matrices, partial-order checks and DOT export."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Sequence

import numpy as np

from .algebra import word_matrices_batch
from .degen import PROVED, REFUTED, UNKNOWN, Verdict, deg_search, st_compare
from .modrep import ModuleRep, fingerprint, iso_test, zero_module
from .stab import StabObject, qst_compare, stab_iso_at_level, triangle_compare
from .stablecat import stable_iso

if TYPE_CHECKING:
    from .algebra import AlgebraKit

DEDUP_MODES = ("none", "iso", "stable_iso", "stab_iso")
RELATIONS = ("deg", "st", "qst")


@dataclass(frozen=True, eq=False)
class ModuleFamily:
    members: tuple[ModuleRep, ...]
    dedup: str = "iso"
    census: dict = field(default_factory=dict)
    truncated: bool = False

    @property
    def labels(self) -> list[str]:
        return [M.label for M in self.members]


def _valid_mask(kit: "AlgebraKit", acts: np.ndarray) -> np.ndarray:
    """Which of a batch of candidate actions (batch, n, d, d) satisfy every relation."""
    p = kit.p
    prods = np.mod(np.einsum("biac,bjcd->bijad", acts, acts), p)
    combos = np.mod(np.einsum("ijl,blad->bijad", kit.spec.sc, acts), p)
    ok = np.all(prods == combos, axis=(1, 2, 3, 4))
    d = acts.shape[-1]
    unit = np.mod(np.einsum("l,blad->bad", kit.spec.unit, acts), p)
    return ok & np.all(unit == np.eye(d, dtype=np.int64), axis=(1, 2))


def _points(kit: "AlgebraKit", d: int, budget: int, batch: int = 4096):
    """Yield valid actions on F_p^d; returns the number of points scanned."""
    p = kit.p
    g = len(kit.generators) if kit.generators else kit.n
    slots = g * d * d
    total = p ** slots
    limit = min(total, budget)
    powers = p ** np.arange(slots - 1, -1, -1, dtype=np.int64)
    for start in range(0, limit, batch):
        idx = np.arange(start, min(start + batch, limit), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % p
        gens = digits.reshape(-1, g, d, d)
        acts = word_matrices_batch(kit, gens) if kit.generators else gens
        for a in acts[_valid_mask(kit, acts)]:
            yield a
    return total > budget


def _equivalent(kit: "AlgebraKit", mode: str, M: ModuleRep, N: ModuleRep, k_max: int = 6) -> bool:
    if mode == "iso":
        return iso_test(kit, M, N).status == "YES"
    if mode == "stable_iso":
        return stable_iso(kit, M, N).status == "YES"
    if mode == "stab_iso":
        return stab_iso_at_level(kit, StabObject(M), StabObject(N), k_max).status == "YES"
    return False


def dedup_modules(kit: "AlgebraKit", modules: Sequence[ModuleRep], mode: str = "iso") -> list[ModuleRep]:
    """Keep the first member of each class; classes are merged only on a YES verdict."""
    if mode not in DEDUP_MODES:
        raise ValueError(f"unknown dedup mode {mode!r}")
    kept: list[ModuleRep] = []
    by_fp: dict = {}
    for M in modules:
        if mode == "none":
            kept.append(M)
            continue
        if mode == "iso":
            bucket = by_fp.setdefault(fingerprint(kit, M), [])
            if any(_equivalent(kit, mode, R, M) for R in bucket):
                continue
            bucket.append(M)
            kept.append(M)
        elif not any(_equivalent(kit, mode, R, M) for R in kept):
            kept.append(M)
    return kept


def enumerate_modules(kit: "AlgebraKit", d: int, dedup: str = "iso", budget: int = 1_000_000,
                      prefix: str = "M") -> ModuleFamily:
    """All points of the module variety in dimension d, up to the chosen equivalence."""
    if d == 0:
        Z = zero_module(kit).relabel("0")
        return ModuleFamily((Z,), dedup, {"dim": 0, "scanned": 1, "raw_points": 1, "classes": 1})
    gen = _points(kit, d, budget)
    raw = []
    while True:
        try:
            raw.append(next(gen))
        except StopIteration as stop:
            truncated = bool(stop.value)
            break
    mods = [ModuleRep(kit.p, tuple(a[i].copy() for i in range(kit.n)), None) for a in raw]
    kept = dedup_modules(kit, mods, dedup)
    members = tuple(M.relabel(f"{prefix}{d}.{i}") for i, M in enumerate(kept))
    g = len(kit.generators) if kit.generators else kit.n
    census = {"dim": d, "scanned": min(kit.p ** (g * d * d), budget), "raw_points": len(raw),
              "classes": len(members)}
    return ModuleFamily(members, dedup, census, truncated)


def enumerate_family(kit: "AlgebraKit", dims: Sequence[int], dedup: str = "iso",
                     budget: int = 1_000_000) -> ModuleFamily:
    members, census, truncated = [], [], False
    for d in dims:
        fam = enumerate_modules(kit, d, dedup, budget)
        members.extend(fam.members)
        census.append(fam.census)
        truncated |= fam.truncated
    if dedup != "none" and dedup != "iso":
        members = dedup_modules(kit, members, dedup)
    return ModuleFamily(tuple(members), dedup, {"per_dim": census}, truncated)


# -- relation matrices ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RelationMatrix:
    relation: str
    labels: tuple[str, ...]
    objects: tuple
    cells: tuple[tuple[Verdict, ...], ...]
    params: dict = field(default_factory=dict)

    def status(self, i: int, j: int) -> str:
        return self.cells[i][j].status

    def status_grid(self) -> list[list[str]]:
        return [[c.status for c in row] for row in self.cells]

    @property
    def size(self) -> int:
        return len(self.labels)


DEFAULT_PARAMS = {"depth": 3, "budget": 20_000, "seed": 0, "padding_bound": 3, "k_max": 6}


def object_label(o) -> str:
    if isinstance(o, StabObject):
        return f"({o.X.label},{o.m})"
    return o.label


def build_relation(kit: "AlgebraKit", objects: Sequence, relation: str,
                   params: dict | None = None) -> RelationMatrix:
    """Square verdict grid; ``objects`` are modules, or StabObjects for ``qst``."""
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    prm = {**DEFAULT_PARAMS, **(params or {})}
    st_prm = {k: prm[k] for k in ("padding_bound", "depth", "budget", "seed")}
    objs = list(objects)
    if relation == "qst":
        objs = [o if isinstance(o, StabObject) else StabObject(o, 0) for o in objs]
    rows = []
    for a in objs:
        row = []
        for b in objs:
            if relation == "deg":
                v = deg_search(kit, a, b, prm["depth"], prm["budget"], prm["seed"])
            elif relation == "st":
                v = st_compare(kit, a, b, **st_prm)
            else:
                v = qst_compare(kit, a, b, prm["k_max"], st_prm)
            row.append(v)
        rows.append(tuple(row))
    return RelationMatrix(relation, tuple(object_label(o) for o in objs), tuple(objs), tuple(rows), prm)


def equivalence_function(kit: "AlgebraKit", matrix: RelationMatrix) -> Callable[[int, int], str]:
    """The equivalence whose classes the relation is antisymmetric on."""
    objs = matrix.objects
    k_max = matrix.params.get("k_max", 6)

    def eq(i: int, j: int) -> str:
        a, b = objs[i], objs[j]
        if matrix.relation == "deg":
            return iso_test(kit, a, b).status
        if matrix.relation == "st":
            return stable_iso(kit, a, b).status
        return stab_iso_at_level(kit, a, b, k_max).status
    return eq


# -- axioms ----------------------------------------------------------------------

@dataclass(frozen=True)
class PosetReport:
    size: int
    reflexive: bool
    non_reflexive: tuple[int, ...]
    antisymmetry_violations: tuple[dict, ...]
    transitivity_violations: tuple[dict, ...]
    gaps: tuple[tuple[int, int, int], ...]
    mutual_pairs: int

    @property
    def hard_failures(self) -> int:
        return len(self.antisymmetry_violations) + len(self.transitivity_violations) + len(self.non_reflexive)

    @property
    def ok(self) -> bool:
        return self.hard_failures == 0

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        name = (lambda i: labels[i]) if labels else (lambda i: i)
        return {"size": self.size, "reflexive": self.reflexive, "ok": self.ok,
                "hard_failures": self.hard_failures, "mutual_pairs": self.mutual_pairs,
                "antisymmetry_violations": list(self.antisymmetry_violations),
                "transitivity_violations": list(self.transitivity_violations),
                "gaps": [[name(i), name(j), name(k)] for i, j, k in self.gaps]}


def check_poset_axioms(matrix: RelationMatrix,
                       equivalence: Callable[[int, int], str] | None = None) -> PosetReport:
    """Reflexivity, antisymmetry up to the equivalence, and transitivity.

    Mutual PROVED cells whose equivalence verdict is not YES, and REFUTED
    transitive corners, are hard failures; UNKNOWN corners are gaps.
    """
    n = matrix.size
    s = matrix.status_grid()
    non_refl = tuple(i for i in range(n) if s[i][i] != PROVED)
    anti, trans, gaps = [], [], []
    mutual = 0
    for i in range(n):
        for j in range(i + 1, n):
            if s[i][j] == PROVED and s[j][i] == PROVED:
                mutual += 1
                verdict = equivalence(i, j) if equivalence else UNKNOWN
                if verdict != "YES":
                    anti.append({"pair": [matrix.labels[i], matrix.labels[j]], "equivalence": verdict})
    for i, j, k in itertools.product(range(n), repeat=3):
        if len({i, j, k}) < 3 or s[i][j] != PROVED or s[j][k] != PROVED:
            continue
        if s[i][k] == REFUTED:
            trans.append({"corner": [matrix.labels[i], matrix.labels[j], matrix.labels[k]],
                          "witness": matrix.cells[i][k].witness})
        elif s[i][k] == UNKNOWN:
            gaps.append((i, j, k))
    return PosetReport(n, not non_refl, non_refl, tuple(anti), tuple(trans), tuple(gaps), mutual)


# -- DOT -------------------------------------------------------------------------

def _classes(s: list[list[str]]) -> list[list[int]]:
    n = len(s)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for i in range(n):
        for j in range(i + 1, n):
            if s[i][j] == PROVED and s[j][i] == PROVED:
                parent[max(find(i), find(j))] = min(find(i), find(j))
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[r] for r in sorted(groups)]


def hasse_edges(matrix: RelationMatrix) -> tuple[list[list[int]], list[tuple[int, int]], list[tuple[int, int]]]:
    """Classes of mutually related objects, Hasse edges between classes
    (transitively implied edges removed), and dashed UNKNOWN edges."""
    s = matrix.status_grid()
    cls = _classes(s)
    m = len(cls)
    rel = [[a != b and any(s[i][j] == PROVED for i in cls[a] for j in cls[b]) for b in range(m)]
           for a in range(m)]
    reach = [row[:] for row in rel]
    for k in range(m):
        for a in range(m):
            if reach[a][k]:
                for b in range(m):
                    if reach[k][b]:
                        reach[a][b] = True
    solid = [(a, b) for a in range(m) for b in range(m)
             if rel[a][b] and not any(c not in (a, b) and reach[a][c] and reach[c][b] for c in range(m))]
    dashed = [(a, b) for a in range(m) for b in range(m)
              if a != b and not reach[a][b]
              and any(s[i][j] == UNKNOWN for i in cls[a] for j in cls[b])]
    return cls, solid, dashed


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(matrix: RelationMatrix) -> str:
    cls, solid, dashed = hasse_edges(matrix)
    lines = [f"digraph {matrix.relation} {{", "  rankdir=BT;"]
    for a, members in enumerate(cls):
        label = " ~ ".join(matrix.labels[i] for i in members)
        lines.append(f"  n{a} [label={_quote(label)}];")
    for a, b in solid:
        lines.append(f"  n{a} -> n{b};")
    for a, b in dashed:
        lines.append(f'  n{a} -> n{b} [style=dashed, label="?"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def matrix_to_json(matrix: RelationMatrix, certificates: bool = False) -> dict:
    from .formats import verdict_to_json
    return {"relation": matrix.relation, "labels": list(matrix.labels),
            "params": {k: matrix.params[k] for k in sorted(matrix.params)},
            "cells": [[verdict_to_json(c, certificates) for c in row] for row in matrix.cells]}


def triangle_consistency(kit: "AlgebraKit", matrix: RelationMatrix) -> list[list[bool]]:
    """Run the triangle route on every cell of a qst matrix."""
    if matrix.relation != "qst":
        raise ValueError("triangle consistency applies to qst matrices")
    st_prm = {k: matrix.params[k] for k in ("padding_bound", "depth", "budget", "seed")}
    out = []
    for i, a in enumerate(matrix.objects):
        row = []
        for j, b in enumerate(matrix.objects):
            tv = triangle_compare(kit, a, b, matrix.params["k_max"], st_prm)
            row.append(tv.consistent and tv.status == matrix.status(i, j))
        out.append(row)
    return out
