"""Stabilization of the stable category: objects ``(X, m)`` with the syzygy
formally inverted.

Homs from ``(X, m)`` to ``(Y, n)`` are the colimit over ``k >= m, n`` of the
stable homs ``Ω^{k-m} X -> Ω^{k-n} Y``.  Level tables report these dimensions
together with the ranks of the transition maps; they never claim a colimit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

import numpy as np

from . import exactfield as ef
from .degen import PROVED, UNKNOWN, Verdict, st_compare, verify_certificate
from .modrep import ModuleMorphism, ModuleRep, syzygy
from .stablecat import (LeftTriangle, certificate_from_triangle, check_triangle, factoring_space,
                        omega_certificate, omega_map, stable_hom, stable_iso, triangle_from_certificate)

if TYPE_CHECKING:
    from .algebra import AlgebraKit


class ConsistencyError(RuntimeError):
    """Two routes to the same relation disagree."""


@dataclass(frozen=True, eq=False)
class StabObject:
    X: ModuleRep
    m: int = 0

    def __repr__(self):
        return f"({self.X.label or '?'}, {self.m})"


def embed(X: ModuleRep) -> StabObject:
    return StabObject(X, 0)


def shift(o: StabObject, t: int) -> StabObject:
    return StabObject(o.X, o.m - t)


def base_level(a: StabObject, b: StabObject) -> int:
    return max(a.m, b.m, 0)


def at_level(kit: "AlgebraKit", o: StabObject, k: int) -> ModuleRep:
    """The module ``Ω^{k-m} X`` representing ``o`` at level ``k``."""
    if k < o.m:
        raise ValueError(f"level {k} is below the shift {o.m}")
    return syzygy(kit, o.X, k - o.m)


def hom_at_level(kit: "AlgebraKit", a: StabObject, b: StabObject, k: int) -> int:
    if k < max(a.m, b.m):
        raise ValueError(f"level {k} must be at least max(m, n) = {max(a.m, b.m)}")
    return stable_hom(kit, at_level(kit, a, k), at_level(kit, b, k)).stable


def _transit_rank(kit: "AlgebraKit", a: StabObject, b: StabObject, k: int, window: int) -> int:
    """Rank of the transition map from stable homs at level k to level k + window."""
    F = kit.field
    X, Y = at_level(kit, a, k), at_level(kit, b, k)
    comp = stable_hom(kit, X, Y).complement
    if comp.shape[1] == 0:
        return 0
    images = []
    for j in range(comp.shape[1]):
        f = ModuleMorphism(X, Y, comp[:, j].reshape(Y.d, X.d), check=False)
        for _ in range(window):
            f = omega_map(kit, f)
        images.append(f.mat.reshape(-1))
    Xt, Yt = at_level(kit, a, k + window), at_level(kit, b, k + window)
    P = factoring_space(kit, Xt, Yt)
    return ef.rank(F, np.hstack([P, np.stack(images, axis=1)])) - P.shape[1]


@dataclass(frozen=True)
class LevelHomTable:
    levels: tuple[int, ...]
    dims: tuple[int, ...]
    transit_ranks: tuple[int | None, ...]
    window: int
    plateau: bool
    estimate: int | None

    def rows(self) -> list[dict]:
        last = len(self.levels) - 1
        return [{"k": k, "dim": d, "transit_rank": t, "plateau": self.plateau and i == last}
                for i, (k, d, t) in enumerate(zip(self.levels, self.dims, self.transit_ranks))]


def colimit_hom_estimate(kit: "AlgebraKit", a: StabObject, b: StabObject, k_max: int,
                         window: int = 1) -> LevelHomTable:
    k0 = max(a.m, b.m)
    if k_max < k0 + window:
        raise ValueError(f"k_max must be at least max(m, n) + window = {k0 + window}")
    levels = tuple(range(k0, k_max + 1))
    dims = tuple(hom_at_level(kit, a, b, k) for k in levels)
    transit = tuple(_transit_rank(kit, a, b, k, window) if k + window <= k_max else None for k in levels)
    known = [t for t in transit if t is not None]
    tail = known[-window:]
    plateau = len(tail) == window and len(set(tail)) == 1
    return LevelHomTable(levels, dims, transit, window, plateau, tail[-1] if plateau else None)


# -- isomorphism ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StabIsoVerdict:
    status: str
    level: int | None = None
    forward: ModuleMorphism | None = None
    backward: ModuleMorphism | None = None
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.status == "YES"


def _tower_period(kit, X: ModuleRep, start: int, limit: int, budget: int) -> int | None:
    base = syzygy(kit, X, start)
    for q in range(1, limit + 1):
        if stable_iso(kit, syzygy(kit, X, start + q), base, budget).status == "YES":
            return q
    return None


def stab_iso_at_level(kit: "AlgebraKit", a: StabObject, b: StabObject, k_max: int,
                      budget: int = 100_000) -> StabIsoVerdict:
    """YES at the first level with a stable isomorphism.

    NO needs a proof: both syzygy towers are shown periodic from the base
    level, and a full common period of levels is separated by stable-hom
    fingerprints, so no later level can be isomorphic either (and an
    isomorphism at an earlier level would persist).
    """
    k0 = base_level(a, b)
    statuses = {}
    for k in range(k0, k_max + 1):
        v = stable_iso(kit, at_level(kit, a, k), at_level(kit, b, k), budget)
        if v.status == "YES":
            return StabIsoVerdict("YES", k, v.forward, v.backward, {"level": k})
        statuses[k] = v
    span = k_max - k0
    qa = _tower_period(kit, a.X, k0 - a.m, span, budget)
    qb = _tower_period(kit, b.X, k0 - b.m, span, budget)
    if qa is None or qb is None:
        return StabIsoVerdict(UNKNOWN, witness={"reason": "no periodicity proof within k_max"})
    period = math.lcm(qa, qb)
    window = range(k0, k0 + period)
    if k0 + period - 1 <= k_max and all(statuses[k].status == "NO" for k in window):
        return StabIsoVerdict("NO", witness={"periods": [qa, qb], "levels": [k0, k0 + period - 1],
                                             "separations": [statuses[k].witness for k in window]})
    return StabIsoVerdict(UNKNOWN, witness={"periods": [qa, qb]})


# -- quasi-stable degeneration --------------------------------------------------

DEFAULT_ST = {"padding_bound": 3, "depth": 3, "budget": 20_000, "seed": 0}


def _st_params(st_params: dict | None) -> dict:
    return {**DEFAULT_ST, **(st_params or {})}


def qst_compare(kit: "AlgebraKit", a: StabObject, b: StabObject, k_max: int = 6,
                st_params: dict | None = None) -> Verdict:
    """``(X, m) <=qst (Y, n)``: some level k has ``Ω^{k-m} X <=st Ω^{k-n} Y``.

    Never REFUTED: failure at every searched level proves nothing.
    """
    prm = _st_params(st_params)
    log = []
    for k in range(base_level(a, b), k_max + 1):
        v = st_compare(kit, at_level(kit, a, k), at_level(kit, b, k), **prm)
        log.append(f"k={k}: {v.status}")
        if v.status == PROVED:
            return Verdict(PROVED, v.certificates, witness={"level": k, **v.witness},
                           log=tuple(log), warnings=v.warnings)
    return Verdict(UNKNOWN, witness={"k_max": k_max}, log=tuple(log))


@dataclass(frozen=True, eq=False)
class TriangleVerdict:
    verdict: Verdict
    consistent: bool
    level: int | None = None
    triangles: tuple[LeftTriangle, ...] = ()
    round_trips: tuple = ()
    rotated: bool = False

    @property
    def status(self) -> str:
        return self.verdict.status


def _materialize(kit, chain, X, Y, budget):
    """Triangles of a certificate chain, their round trips, and endpoint checks."""
    triangles, trips = [], []
    for c in chain:
        T = triangle_from_certificate(kit, c)
        if not check_triangle(kit, T):
            raise ConsistencyError("materialized triangle fails its invariants")
        back = certificate_from_triangle(kit, T, c.lower, c.Z, metadata=c.metadata)
        if not verify_certificate(kit, back):
            raise ConsistencyError("round-trip certificate fails verification")
        triangles.append(T)
        trips.append(back)
    ok_x = stable_iso(kit, chain[0].lower, X, budget).status == "YES"
    ok_y = stable_iso(kit, chain[-1].upper, Y, budget).status == "YES"
    return tuple(triangles), tuple(trips), ok_x and ok_y


def triangle_compare(kit: "AlgebraKit", a: StabObject, b: StabObject, k_max: int = 6,
                     st_params: dict | None = None, budget: int = 100_000) -> TriangleVerdict:
    """The same relation through triangles at even levels.

    Even levels are searched directly; when the quasi-stable route only
    succeeds at an odd level k, its certificates are pushed to level k + 1
    through the syzygy construction.  The two routes must agree.
    """
    prm = _st_params(st_params)
    q = qst_compare(kit, a, b, k_max, prm)
    k0 = base_level(a, b)
    found = None
    for k in range(k0 + (k0 % 2), k_max + 1, 2):
        v = st_compare(kit, at_level(kit, a, k), at_level(kit, b, k), **prm)
        if v.status == PROVED:
            found = (k, v.certificates, False)
            break
    if found is None and q.status == PROVED:
        k = q.witness["level"]
        chain = tuple(omega_certificate(kit, c) for c in q.certificates)
        found = (k + 1, chain, True)
    if found is None:
        if q.status == PROVED:
            raise ConsistencyError("quasi-stable route proved the relation but no triangle exists")
        return TriangleVerdict(Verdict(UNKNOWN, witness={"k_max": k_max}), True)
    k, chain, rotated = found
    if q.status != PROVED:
        raise ConsistencyError(f"triangle at level {k} but the quasi-stable route is {q.status}")
    X, Y = at_level(kit, a, k), at_level(kit, b, k)
    triangles, trips, endpoints = _materialize(kit, chain, X, Y, budget)
    if not endpoints:
        raise ConsistencyError("triangle endpoints are not stably isomorphic to the compared objects")
    verdict = Verdict(PROVED, tuple(chain), witness={"level": k, "rotated": rotated, "links": len(chain)})
    return TriangleVerdict(verdict, True, k, triangles, trips, rotated)
