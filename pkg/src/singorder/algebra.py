"""Finite-dimensional associative algebras over F_p given by structure constants.

Basis elements are indexed ``0..n-1``; ``sc[i, j, l]`` is the coefficient of
basis element ``l`` in the product ``b_i * b_j``.  Builders produce an
:class:`AlgebraKit`, which bundles the validated structure with whatever
extra data is known (generators, idempotents, simples, projectives) and the
Jacobson radical.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import exactfield as ef
from .exactfield import PrimeField
from .modrep import ModuleRep


class AlgebraError(ValueError):
    """Raised when an algebra description is malformed or inadmissible."""


class RadicalCheckError(RuntimeError):
    """The computed radical failed its own self-check (an algorithm bug)."""


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = "PASS"
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    field: PrimeField
    n: int
    sc: np.ndarray
    unit: np.ndarray

    @property
    def p(self) -> int:
        return self.field.p

    @classmethod
    def from_sparse(cls, p: int, n: int, entries: Sequence[Sequence[int]], unit: Sequence[int]):
        F = PrimeField(p)
        if n < 1:
            raise AlgebraError("algebra dimension must be positive")
        sc = np.zeros((n, n, n), dtype=np.int64)
        for entry in entries:
            i, j, l, c = (int(x) for x in entry)
            if not all(0 <= t < n for t in (i, j, l)):
                raise AlgebraError(f"structure constant index out of range: {entry}")
            sc[i, j, l] = (sc[i, j, l] + c) % p
        u = np.array(unit, dtype=np.int64)
        if u.shape != (n,):
            raise AlgebraError(f"unit must have {n} coordinates")
        return cls(F, n, sc, np.mod(u, p))

    def sparse(self) -> list[list[int]]:
        return [[int(i), int(j), int(l), int(self.sc[i, j, l])]
                for i, j, l in zip(*np.nonzero(self.sc))]

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.mod(np.einsum("i,j,ijl->l", a, b, self.sc, dtype=object), self.p).astype(np.int64)

    def left_mult(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``x -> a x`` in the basis (column j is ``a * b_j``)."""
        return np.mod(np.einsum("i,ijl->lj", a, self.sc, dtype=object), self.p).astype(np.int64)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=np.int64)
        v[i] = 1
        return v


def validate_algebra(spec: AlgebraSpec) -> ValidationReport:
    """Check associativity on all basis triples and the two unit laws."""
    p, n, sc = spec.p, spec.n, spec.sc.astype(object)
    left = np.mod(np.einsum("ijl,lkr->ijkr", sc, sc), p)
    right = np.mod(np.einsum("jkl,ilr->ijkr", sc, sc), p)
    bad = np.argwhere(left != right)
    if bad.size:
        i, j, k, _ = (int(x) for x in bad[0])
        return ValidationReport(False, f"associativity fails for basis triple ({i}, {j}, {k})",
                                ("assoc", i, j, k))
    u = spec.unit.astype(object)
    eye = np.eye(n, dtype=np.int64)
    lu = np.mod(np.einsum("i,ijl->jl", u, sc), p).astype(np.int64)
    bad = np.argwhere(lu != eye)
    if bad.size:
        j = int(bad[0][0])
        return ValidationReport(False, f"unit is not a left identity on basis element {j}",
                                ("left-unit", j))
    ru = np.mod(np.einsum("i,jil->jl", u, sc), p).astype(np.int64)
    bad = np.argwhere(ru != eye)
    if bad.size:
        j = int(bad[0][0])
        return ValidationReport(False, f"unit is not a right identity on basis element {j}",
                                ("right-unit", j))
    return ValidationReport(True)


@dataclass(frozen=True, eq=False)
class AlgebraKit:
    spec: AlgebraSpec
    generators: tuple[tuple[str, np.ndarray], ...] = ()
    idempotents: tuple[tuple[str, np.ndarray], ...] = ()
    simples: tuple[ModuleRep, ...] = ()
    projectives: tuple[ModuleRep, ...] = ()
    radical_basis: np.ndarray | None = None
    provenance: str = "structure-constants"
    meta: dict = field(default_factory=dict)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def field(self) -> PrimeField:
        return self.spec.field

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def is_local(self) -> bool:
        # dim A/J = 1 means A/J = F_p, so every projective module is free
        return self.radical_basis is not None and self.radical_basis.shape[1] == self.n - 1

    @property
    def projectives_complete(self) -> bool:
        """Whether the projective list exhausts the indecomposable projectives."""
        return self.is_local or self.provenance == "bound_quiver"

    def action_elements(self) -> list[np.ndarray]:
        """Algebra elements whose action determines a module map.

        Generators if known, otherwise the whole basis.
        """
        if self.generators:
            return [g for _, g in self.generators]
        return [self.spec.basis_vector(i) for i in range(self.n)]

    def padding_modules(self) -> list[ModuleRep]:
        if self.projectives:
            return list(self.projectives)
        return [regular_module(self)]


# -- builders -----------------------------------------------------------------

def make_kit(spec: AlgebraSpec, *, generators=(), idempotents=(), simples=(), projectives=(),
             provenance="structure-constants", meta=None) -> AlgebraKit:
    report = validate_algebra(spec)
    if not report:
        raise AlgebraError(report.message)
    gens = tuple((str(lbl), np.mod(np.array(c, dtype=np.int64), spec.p)) for lbl, c in generators)
    idems = tuple((str(lbl), np.mod(np.array(c, dtype=np.int64), spec.p)) for lbl, c in idempotents)
    _check_idempotents(spec, idems)
    if idems and not projectives:
        from .modrep import sub_quotient
        reg = _regular_from_spec(spec)
        proj = []
        for lbl, e in idems:
            U = np.stack([spec.mul(spec.basis_vector(i), e) for i in range(spec.n)], axis=1)
            proj.append(sub_quotient(None, reg, U).sub.relabel(f"A{lbl}"))
        projectives = proj
    kit = AlgebraKit(spec, gens, idems, tuple(simples), tuple(projectives), None, provenance,
                     dict(meta or {}))
    J = radical(kit)
    kit = AlgebraKit(spec, gens, idems, tuple(simples), tuple(projectives), J, provenance,
                     dict(meta or {}))
    if gens:
        kit.cache["words"] = _word_basis(kit)
    if not kit.simples and kit.is_local:
        from .modrep import radical_top_socle
        top = radical_top_socle(kit, regular_module(kit))[1]
        object.__setattr__(kit, "simples", (top.relabel("S"),))
    for S in kit.simples:
        from .modrep import radical_top_socle, validate_module
        if not validate_module(kit, S):
            raise AlgebraError(f"listed simple {S.label} is not a valid module")
        if radical_top_socle(kit, S)[0].d:
            raise AlgebraError(f"listed simple {S.label} has nonzero radical")
    return kit


def _check_idempotents(spec: AlgebraSpec, idems) -> None:
    if not idems:
        return
    total = np.zeros(spec.n, dtype=np.int64)
    for a, (la, ea) in enumerate(idems):
        if np.any(spec.mul(ea, ea) != ea):
            raise AlgebraError(f"idempotent {la} does not square to itself")
        for b, (lb, eb) in enumerate(idems):
            if a != b and np.any(spec.mul(ea, eb)):
                raise AlgebraError(f"idempotents {la} and {lb} are not orthogonal")
        total = np.mod(total + ea, spec.p)
    if np.any(total != spec.unit):
        raise AlgebraError("idempotents do not sum to the unit")


def build_univariate(p: int, coeffs: Sequence[int]) -> AlgebraKit:
    """F_p[x]/(f) for a monic ``f`` given lowest coefficient first."""
    F = PrimeField(p)
    f = [int(c) % p for c in coeffs]
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    deg = len(f) - 1
    if deg < 1 or f[-1] != 1:
        raise AlgebraError("univariate builder needs a monic polynomial of degree >= 1")
    n = deg
    # x^k for k < 2n-1 reduced mod f
    powers = []
    for k in range(2 * n - 1):
        if k < n:
            v = [0] * n
            v[k] = 1
        else:
            prev = powers[k - 1]
            top = prev[n - 1]
            v = [0] + prev[: n - 1]
            v = [(v[i] - top * f[i]) % p for i in range(n)]
        powers.append(v)
    sc = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            sc[i, j] = powers[i + j]
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    spec = AlgebraSpec(F, n, sc, unit)
    x = np.zeros(n, dtype=np.int64)
    if n > 1:
        x[1] = 1
    else:
        x[0] = (-f[0]) % p
    return make_kit(spec, generators=[("x", x)], provenance="univariate",
                    meta={"poly": f})


def build_group(p: int, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> AlgebraKit:
    """Group algebra F_p[G] from a multiplication table ``table[g][h] = gh``."""
    F = PrimeField(p)
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise AlgebraError("group table must be a non-empty square")
    for row in table:
        if sorted(row) != list(range(n)):
            raise AlgebraError("group table is not a Latin square")
    for c in range(n):
        if sorted(table[r][c] for r in range(n)) != list(range(n)):
            raise AlgebraError("group table is not a Latin square")
    ident = [e for e in range(n) if list(table[e]) == list(range(n))
             and [table[r][e] for r in range(n)] == list(range(n))]
    if not ident:
        raise AlgebraError("group table has no identity element")
    sc = np.zeros((n, n, n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            sc[g, h, table[g][h]] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[ident[0]] = 1
    spec = AlgebraSpec(F, n, sc, unit)
    report = validate_algebra(spec)
    if not report:
        raise AlgebraError(f"group table is not associative: {report.message}")
    labels = list(labels) if labels else [f"g{g}" for g in range(n)]
    gens = [(labels[g], spec.basis_vector(g)) for g in range(n) if g != ident[0]]
    return make_kit(spec, generators=gens, provenance="group", meta={"table": [list(r) for r in table]})


def build_bound_quiver(p: int, vertices: int, arrows: Sequence[Sequence[int]],
                       relations: Sequence[Sequence[int]] = (), nilpotency: int = 2,
                       arrow_labels: Sequence[str] | None = None) -> AlgebraKit:
    """Path algebra of a quiver modulo monomial relations and paths of length >= N.

    Paths are tuples of arrow indices in traversal order.  The product
    ``a * b`` is "first b, then a": nonzero when b ends where a starts.
    Hence ``A e_v`` is spanned by the paths starting at ``v``.
    """
    F = PrimeField(p)
    if vertices < 1 or nilpotency < 1:
        raise AlgebraError("bound quiver needs >= 1 vertex and nilpotency cutoff N >= 1")
    arrows = [tuple(int(x) for x in a) for a in arrows]
    for a in arrows:
        if len(a) != 2 or not all(0 <= v < vertices for v in a):
            raise AlgebraError(f"arrow {a} does not join two vertices")
    forbidden = [tuple(int(x) for x in r) for r in relations]
    for r in forbidden:
        if not r or any(not 0 <= x < len(arrows) for x in r):
            raise AlgebraError(f"relation {r} is not a nonempty list of arrow indices")
        for a, b in zip(r, r[1:]):
            if arrows[a][1] != arrows[b][0]:
                raise AlgebraError(f"relation {r} is not a path")

    def alive(path):
        for r in forbidden:
            k = len(r)
            for s in range(len(path) - k + 1):
                if path[s:s + k] == r:
                    return False
        return True

    basis: list[tuple] = [("e", v) for v in range(vertices)]
    layer = [(a,) for a in range(len(arrows))]
    length = 1
    while layer and length < nilpotency:
        layer = [q for q in layer if alive(q)]
        basis.extend(("p", q) for q in layer)
        length += 1
        layer = [q + (a,) for q in layer for a in range(len(arrows))
                 if arrows[q[-1]][1] == arrows[a][0]]
    index = {b: i for i, b in enumerate(basis)}
    n = len(basis)

    def src(b):
        return b[1] if b[0] == "e" else arrows[b[1][0]][0]

    def tgt(b):
        return b[1] if b[0] == "e" else arrows[b[1][-1]][1]

    sc = np.zeros((n, n, n), dtype=np.int64)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            if tgt(b) != src(a):
                continue
            if a[0] == "e":
                sc[i, j, j] = 1
            elif b[0] == "e":
                sc[i, j, i] = 1
            else:
                q = b[1] + a[1]
                if len(q) < nilpotency and alive(q):
                    sc[i, j, index[("p", q)]] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[:vertices] = 1
    spec = AlgebraSpec(F, n, sc, unit)
    labels = list(arrow_labels) if arrow_labels else [f"a{k}" for k in range(len(arrows))]
    idems = [(f"e{v}", spec.basis_vector(v)) for v in range(vertices)]
    gens = idems + [(labels[k], spec.basis_vector(index[("p", (k,))]))
                    for k in range(len(arrows)) if ("p", (k,)) in index]

    simples = []
    for v in range(vertices):
        action = tuple(np.array([[1 if (b[0] == "e" and b[1] == v) else 0]], dtype=np.int64)
                       for b in basis)
        simples.append(ModuleRep(p, action, f"S{v}"))
    reg = _regular_from_spec(spec)
    from .modrep import sub_quotient
    proj = []
    for v in range(vertices):
        cols = [i for i, b in enumerate(basis) if src(b) == v]
        U = np.zeros((n, len(cols)), dtype=np.int64)
        for k, i in enumerate(cols):
            U[i, k] = 1
        proj.append(sub_quotient(None, reg, U).sub.relabel(f"P{v}"))
    path_labels = ["e%d" % b[1] if b[0] == "e" else "*".join(labels[a] for a in b[1]) for b in basis]
    return make_kit(spec, generators=gens, idempotents=idems, simples=simples, projectives=proj,
                    provenance="bound_quiver",
                    meta={"vertices": vertices, "arrows": [list(a) for a in arrows],
                          "relations": [list(r) for r in forbidden], "nilpotency": nilpotency,
                          "basis_labels": path_labels})


def build_algebra(source: dict[str, Any]) -> AlgebraKit:
    """Dispatch on a builder stanza or a raw structure-constant description."""
    if "univariate" in source:
        s = source["univariate"]
        return build_univariate(int(s["p"]), s["coeffs"])
    if "group" in source:
        s = source["group"]
        return build_group(int(s["p"]), s["table"], s.get("labels"))
    if "bound_quiver" in source:
        s = source["bound_quiver"]
        return build_bound_quiver(int(s["p"]), int(s["vertices"]), s["arrows"],
                                  s.get("relations", []), int(s.get("nilpotency", 2)),
                                  s.get("arrow_labels"))
    if "sc" in source:
        spec = AlgebraSpec.from_sparse(int(source["p"]), int(source["n"]), source["sc"], source["unit"])
        idems = [(f"e{k}", c) for k, c in enumerate(source.get("idempotents") or [])]
        gens = [(g["label"], g["coords"]) for g in source.get("generators") or []]
        return make_kit(spec, generators=gens, idempotents=idems)
    raise AlgebraError("unrecognised algebra description")


# -- radical ------------------------------------------------------------------

def _left_mult_all(spec: AlgebraSpec) -> np.ndarray:
    return np.ascontiguousarray(np.transpose(spec.sc, (0, 2, 1)))


def _trace_lift_power(L: np.ndarray, e: int, modulus: int) -> int:
    """Trace of ``L^e`` computed over Z/modulus with ``L`` read as an integer matrix."""
    M = np.array(L, dtype=object) % modulus
    result = np.eye(L.shape[0], dtype=object)
    while e:
        if e & 1:
            result = (result @ M) % modulus
        M = (M @ M) % modulus
        e >>= 1
    return int(np.trace(result)) % modulus


def _radical_basis(spec: AlgebraSpec, force_chain: bool = False) -> np.ndarray:
    F, p, n = spec.field, spec.p, spec.n
    L = _left_mult_all(spec)
    if p > n and not force_chain:
        # trace form kernel: a in J iff Tr(L_{a b_j}) = 0 for all j
        traces = np.array([int(np.trace(L[l])) % p for l in range(n)], dtype=np.int64)
        T = np.mod(np.einsum("ijl,l->ij", spec.sc.astype(object), traces), p).astype(np.int64)
        return ef.column_basis(F, ef.kernel(F, T.T))
    # iterated p-power trace functionals on the regular representation
    current = np.eye(n, dtype=np.int64)
    steps = int(math.floor(math.log(n, p) + 1e-12)) if n > 1 else 0
    for i in range(steps + 1):
        if current.shape[1] == 0:
            break
        modulus = p ** (i + 1)
        G = np.zeros((n, current.shape[1]), dtype=np.int64)
        for k in range(current.shape[1]):
            a = current[:, k]
            for j in range(n):
                c = spec.mul(a, spec.basis_vector(j))
                Lc = np.mod(np.einsum("i,ilj->lj", c, L), p)
                t = _trace_lift_power(Lc, p ** i, modulus)
                if t % (p ** i):
                    raise RadicalCheckError("p-power trace is not divisible as expected")
                G[j, k] = (t // p ** i) % p
        coeffs = ef.kernel(F, G)
        current = ef.column_basis(F, F.matmul(current, coeffs))
    return current


def quotient_spec(spec: AlgebraSpec, ideal: np.ndarray) -> AlgebraSpec:
    """Structure constants of ``A / I`` for a two-sided ideal with canonical basis."""
    F = spec.field
    comp = ef.complement_units(ideal) if ideal.shape[1] else list(range(spec.n))
    piv = ef.pivot_rows(ideal) if ideal.shape[1] else []
    m = len(comp)

    def project(v):
        w = np.mod(v - (F.matmul(ideal, v[piv]) if piv else 0), spec.p)
        return w[comp]

    sc = np.zeros((m, m, m), dtype=np.int64)
    for a, i in enumerate(comp):
        for b, j in enumerate(comp):
            sc[a, b] = project(spec.sc[i, j])
    return AlgebraSpec(F, m, sc, project(spec.unit))


def _subspace_product(spec: AlgebraSpec, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    if U.shape[1] == 0 or V.shape[1] == 0:
        return np.zeros((spec.n, 0), dtype=np.int64)
    cols = [spec.mul(U[:, a], V[:, b]) for a in range(U.shape[1]) for b in range(V.shape[1])]
    return ef.column_basis(spec.field, np.array(cols, dtype=np.int64).T)


def is_two_sided_ideal(spec: AlgebraSpec, U: np.ndarray) -> bool:
    if U.shape[1] == 0:
        return True
    F = spec.field
    for k in range(U.shape[1]):
        for j in range(spec.n):
            b = spec.basis_vector(j)
            if not ef.in_span(F, U, spec.mul(U[:, k], b)):
                return False
            if not ef.in_span(F, U, spec.mul(b, U[:, k])):
                return False
    return True


def nilpotency_index(spec: AlgebraSpec, U: np.ndarray) -> int | None:
    """Least k with U^k = 0 (as subspace products), or None if none up to n + 1."""
    if U.shape[1] == 0:
        return 0
    power = U
    for k in range(1, spec.n + 2):
        if power.shape[1] == 0:
            return k
        power = _subspace_product(spec, power, U)
        if power.shape[1] == 0:
            return k + 1
    return None


def radical(kit: AlgebraKit | AlgebraSpec, *, check: bool = True, force_chain: bool = False) -> np.ndarray:
    """Canonical basis (columns) of the Jacobson radical J(A).

    Uses the trace-form kernel when p > n and the chain of p-power trace
    functionals otherwise.  With ``check`` the result is verified to be a
    nilpotent two-sided ideal whose quotient has zero radical.
    """
    spec = kit.spec if isinstance(kit, AlgebraKit) else kit
    J = _radical_basis(spec, force_chain)
    if check:
        if not is_two_sided_ideal(spec, J):
            raise RadicalCheckError("computed radical is not a two-sided ideal")
        if J.shape[1] and nilpotency_index(spec, J) is None:
            raise RadicalCheckError("computed radical is not nilpotent")
        if J.shape[1] and J.shape[1] < spec.n:
            Q = quotient_spec(spec, J)
            if _radical_basis(Q, force_chain).shape[1]:
                raise RadicalCheckError("quotient by computed radical is not semisimple")
        if J.shape[1] == spec.n:
            raise RadicalCheckError("radical cannot be the whole unital algebra")
    return J


# -- regular module and generator words ---------------------------------------

def _regular_from_spec(spec: AlgebraSpec) -> ModuleRep:
    L = _left_mult_all(spec)
    return ModuleRep(spec.p, tuple(np.array(L[i]) for i in range(spec.n)), "A")


def regular_module(kit: AlgebraKit) -> ModuleRep:
    """The left regular module: basis element i acts by left multiplication."""
    cached = kit.cache.get("regular")
    if cached is None:
        cached = _regular_from_spec(kit.spec)
        kit.cache["regular"] = cached
    return cached


def _word_basis(kit: AlgebraKit):
    """Words in the generators whose values span A, and each basis element's
    expression as a combination of those words."""
    spec, F = kit.spec, kit.field
    words: list[tuple[int, ...]] = [()]
    values = [spec.unit.copy()]
    span = ef.column_basis(F, values[0].reshape(-1, 1))
    frontier = [()]
    while frontier and span.shape[1] < spec.n:
        nxt = []
        for w in frontier:
            base = values[words.index(w)]
            for g, (_, gv) in enumerate(kit.generators):
                val = spec.mul(gv, base)
                if not ef.in_span(F, span, val):
                    words.append((g,) + w)
                    values.append(val)
                    span = ef.column_basis(F, np.array(values).T)
                    nxt.append((g,) + w)
        frontier = nxt
    if span.shape[1] < spec.n:
        raise AlgebraError("listed generators do not generate the algebra")
    W = np.array(values, dtype=np.int64).T
    expr = ef.solve(F, W, np.eye(spec.n, dtype=np.int64))
    return words, expr


def module_from_generators(kit: AlgebraKit, mats: Sequence[np.ndarray], label=None) -> ModuleRep:
    """Assemble the full action from matrices assigned to the generators.

    The result is not validated; callers check the relation set.
    """
    G = np.stack([np.asarray(m, dtype=np.int64) for m in mats])[None]
    acts = word_matrices_batch(kit, G)[0]
    return ModuleRep(kit.p, tuple(acts[i].copy() for i in range(kit.n)), label)


def word_matrices_batch(kit: AlgebraKit, gens: np.ndarray) -> np.ndarray:
    """Vectorised action: ``gens`` has shape (batch, g, d, d); returns (batch, n, d, d)."""
    words, expr = kit.cache["words"]
    p = kit.p
    batch, _, d, _ = gens.shape
    eye = np.broadcast_to(np.eye(d, dtype=np.int64), (batch, d, d))
    vals = []
    for w in words:
        M = eye
        for g in reversed(w):
            M = np.mod(gens[:, g] @ M, p)
        vals.append(M)
    V = np.stack(vals, axis=1)  # batch, words, d, d
    return np.mod(np.einsum("bwij,wn->bnij", V, expr), p)


def brute_force_radical(spec: AlgebraSpec) -> np.ndarray:
    """Largest nilpotent two-sided ideal found by enumerating every subspace.

    Exponential; meant as an independent oracle for n <= 4 over tiny fields.
    """
    F, n, p = spec.field, spec.n, spec.p
    best = np.zeros((n, 0), dtype=np.int64)
    for U in enumerate_subspaces(p, n):
        if U.shape[1] <= best.shape[1]:
            continue
        if is_two_sided_ideal(spec, U) and nilpotency_index(spec, U) is not None:
            best = U
    return best


def enumerate_subspaces(p: int, n: int):
    """Every subspace of F_p^n, as canonical column bases (via all RREF shapes)."""
    yield np.zeros((n, 0), dtype=np.int64)
    for k in range(1, n + 1):
        for pivots in itertools.combinations(range(n), k):
            free_slots = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n)
                          if c not in pivots]
            for vals in itertools.product(range(p), repeat=len(free_slots)):
                R = np.zeros((k, n), dtype=np.int64)
                for r, c in enumerate(pivots):
                    R[r, c] = 1
                for (r, c), v in zip(free_slots, vals):
                    R[r, c] = v
                yield R.T.copy()
