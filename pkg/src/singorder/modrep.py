"""Modules as tuples of action matrices, and the constructions built on them.

A module of dimension d over an n-dimensional algebra is a tuple of n
``d x d`` matrices, one per basis element, satisfying the structure-constant
relations.  Functions take the :class:`~singorder.algebra.AlgebraKit` as their
first argument; the module values themselves only carry the characteristic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np

from . import exactfield as ef
from .exactfield import PrimeField

if TYPE_CHECKING:
    from .algebra import AlgebraKit


class ModuleError(ValueError):
    """Invalid module data or an invalid construction request."""


@dataclass(frozen=True, eq=False)
class ModuleRep:
    p: int
    action: tuple[np.ndarray, ...]
    label: str | None = None

    def __post_init__(self):
        acts = tuple(np.ascontiguousarray(np.mod(np.asarray(a, dtype=np.int64), self.p))
                     for a in self.action)
        d = acts[0].shape[0] if acts else 0
        for a in acts:
            if a.shape != (d, d):
                raise ModuleError("action matrices must be square and of equal size")
        object.__setattr__(self, "action", acts)

    @property
    def d(self) -> int:
        return self.action[0].shape[0] if self.action else 0

    @property
    def n(self) -> int:
        return len(self.action)

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def key(self) -> tuple:
        return (self.p, self.d, b"".join(a.tobytes() for a in self.action))

    def __eq__(self, other):
        return isinstance(other, ModuleRep) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def relabel(self, label: str | None) -> "ModuleRep":
        return ModuleRep(self.p, self.action, label)

    def act(self, a: np.ndarray) -> np.ndarray:
        """Matrix of the algebra element with coordinates ``a``."""
        out = np.zeros((self.d, self.d), dtype=np.int64)
        for c, m in zip(a, self.action):
            if c:
                out = np.mod(out + int(c) * m, self.p)
        return out

    def __repr__(self):
        return f"ModuleRep(label={self.label!r}, d={self.d}, p={self.p})"


def zero_module(kit: "AlgebraKit") -> ModuleRep:
    return ModuleRep(kit.p, tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(kit.n)), "0")


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    source: ModuleRep
    target: ModuleRep
    mat: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        mat = np.mod(np.asarray(self.mat, dtype=np.int64).reshape(self.target.d, self.source.d),
                     self.source.p)
        object.__setattr__(self, "mat", mat)
        if self.check and not is_intertwining(self.source, self.target, mat):
            raise ModuleError("matrix does not intertwine the two actions")

    @property
    def field(self) -> PrimeField:
        return self.source.field

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """``g @ f`` is the composite "first f, then g"."""
        if other.target != self.source:
            raise ModuleError("composition of non-composable morphisms")
        return ModuleMorphism(other.source, self.target,
                              self.field.matmul(self.mat, other.mat), check=False)

    def rank(self) -> int:
        return ef.rank(self.field, self.mat)

    def is_injective(self) -> bool:
        return self.rank() == self.source.d

    def is_surjective(self) -> bool:
        return self.rank() == self.target.d

    def is_iso(self) -> bool:
        return self.source.d == self.target.d and self.rank() == self.source.d


def is_intertwining(M: ModuleRep, N: ModuleRep, mat: np.ndarray) -> bool:
    F = M.field
    for a, b in zip(M.action, N.action):
        if np.any(F.matmul(mat, a) != F.matmul(b, mat)):
            return False
    return True


def identity(M: ModuleRep) -> ModuleMorphism:
    return ModuleMorphism(M, M, np.eye(M.d, dtype=np.int64), check=False)


def zero_map(M: ModuleRep, N: ModuleRep) -> ModuleMorphism:
    return ModuleMorphism(M, N, np.zeros((N.d, M.d), dtype=np.int64), check=False)


def inverse_iso(f: ModuleMorphism) -> ModuleMorphism:
    return ModuleMorphism(f.target, f.source, ef.inverse(f.field, f.mat), check=False)


@dataclass(frozen=True)
class ModuleReport:
    ok: bool
    message: str = "PASS"

    def __bool__(self):
        return self.ok


def validate_module(kit: "AlgebraKit", M: ModuleRep) -> ModuleReport:
    """Check the n^2 product relations and that the unit acts as the identity."""
    if M.n != kit.n:
        return ModuleReport(False, f"expected {kit.n} action matrices, got {M.n}")
    if M.p != kit.p:
        return ModuleReport(False, "characteristic mismatch")
    d, p = M.d, kit.p
    if d == 0:
        return ModuleReport(True)
    A = np.stack(M.action)
    prods = np.mod(np.einsum("iab,jbc->ijac", A, A), p)
    combos = np.mod(np.einsum("ijl,lac->ijac", kit.spec.sc, A), p)
    bad = np.argwhere(np.any(prods != combos, axis=(2, 3)))
    if bad.size:
        i, j = (int(x) for x in bad[0])
        return ModuleReport(False, f"relation for basis pair ({i}, {j}) fails")
    if np.any(M.act(kit.spec.unit) != np.eye(d, dtype=np.int64)):
        return ModuleReport(False, "unit does not act as the identity")
    return ModuleReport(True)


# -- hom spaces ---------------------------------------------------------------

def _gen_actions(kit: "AlgebraKit", M: ModuleRep) -> list[np.ndarray]:
    return [M.act(g) for g in kit.action_elements()]


def hom_space(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep) -> np.ndarray:
    """Basis of Hom_A(M, N) as columns of row-major flattened ``dN x dM`` matrices."""
    cache = kit.cache.setdefault("hom", {})
    key = (M.key, N.key)
    hit = cache.get(key)
    if hit is not None:
        return hit
    F = kit.field
    dm, dn = M.d, N.d
    if dm == 0 or dn == 0:
        out = np.zeros((dm * dn, 0), dtype=np.int64)
    else:
        rows = []
        Im, In = np.eye(dm, dtype=np.int64), np.eye(dn, dtype=np.int64)
        for a, b in zip(_gen_actions(kit, M), _gen_actions(kit, N)):
            # vec(f a - b f) with f flattened row-major
            rows.append(np.mod(np.kron(In, a.T) - np.kron(b, Im), F.p))
        system = np.vstack(rows)
        out = ef.kernel(F, system)
    cache[key] = out
    return out


def hom_basis(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep) -> list[ModuleMorphism]:
    """Basis of Hom_A(M, N) from one linear system in the entries of the map."""
    H = hom_space(kit, M, N)
    return [ModuleMorphism(M, N, H[:, k].reshape(N.d, M.d), check=False) for k in range(H.shape[1])]


def hom_dim(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep) -> int:
    return hom_space(kit, M, N).shape[1]


# -- direct sums --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DirectSum:
    module: ModuleRep
    injections: tuple[ModuleMorphism, ...]
    projections: tuple[ModuleMorphism, ...]


def direct_sum(kit: "AlgebraKit", parts: Sequence[ModuleRep], label: str | None = None) -> DirectSum:
    if not parts:
        Z = zero_module(kit)
        return DirectSum(Z, (), ())
    acts = tuple(ef.block_diag(*(P.action[i] for P in parts)) for i in range(kit.n))
    if label is None and all(P.label for P in parts):
        label = "+".join(P.label for P in parts)
    S = ModuleRep(kit.p, acts, label)
    inj, proj = [], []
    offset = 0
    for P in parts:
        E = np.zeros((S.d, P.d), dtype=np.int64)
        E[offset:offset + P.d] = np.eye(P.d, dtype=np.int64)
        inj.append(ModuleMorphism(P, S, E, check=False))
        proj.append(ModuleMorphism(S, P, E.T.copy(), check=False))
        offset += P.d
    return DirectSum(S, tuple(inj), tuple(proj))


def dsum(kit: "AlgebraKit", *parts: ModuleRep) -> ModuleRep:
    return direct_sum(kit, parts).module


def power(kit: "AlgebraKit", M: ModuleRep, k: int) -> ModuleRep:
    return direct_sum(kit, [M] * k, label=f"{M.label}^{k}" if k != 1 else M.label).module


def sum_of_maps(f: ModuleMorphism, g: ModuleMorphism, source=None, target=None) -> ModuleMorphism:
    """Block-diagonal ``f + g : A + B -> C + D`` on the literal direct sums."""
    mat = ef.block_diag(f.mat, g.mat)
    return ModuleMorphism(source, target, mat, check=False)


# -- submodules ---------------------------------------------------------------

def spin(kit: "AlgebraKit", M: ModuleRep, vectors: np.ndarray) -> np.ndarray:
    """Canonical basis of the smallest submodule containing the given columns."""
    F = kit.field
    V = np.asarray(vectors, dtype=np.int64)
    if V.size == 0 or M.d == 0:
        return np.zeros((M.d, 0), dtype=np.int64)
    V = V.reshape(M.d, -1)
    gens = _gen_actions(kit, M)
    B = ef.column_basis(F, V)
    while True:
        images = np.hstack([B] + [F.matmul(g, B) for g in gens])
        nb = ef.column_basis(F, images)
        if nb.shape[1] == B.shape[1]:
            return nb
        B = nb


def is_invariant(kit: "AlgebraKit", M: ModuleRep, U: np.ndarray) -> bool:
    F = kit.field
    if U.shape[1] == 0:
        return True
    base = ef.rank(F, U)
    for g in _gen_actions(kit, M):
        if ef.rank(F, np.hstack([U, F.matmul(g, U)])) != base:
            return False
    return True


@dataclass(frozen=True, eq=False)
class SubQuotient:
    sub: ModuleRep
    inclusion: ModuleMorphism
    quotient: ModuleRep
    projection: ModuleMorphism
    basis: np.ndarray


def sub_quotient(kit: "AlgebraKit | None", M: ModuleRep, U: np.ndarray, check: bool = True) -> SubQuotient:
    """Realise an invariant subspace ``U`` as a submodule and form ``M / U``."""
    F = M.field
    U = np.asarray(U, dtype=np.int64)
    U = U.reshape(M.d, -1) if U.size else np.zeros((M.d, 0), dtype=np.int64)
    U = ef.column_basis(F, U)
    if check and kit is not None and not is_invariant(kit, M, U):
        raise ModuleError("subspace is not invariant under the action")
    piv = ef.pivot_rows(U)
    comp = ef.complement_units(U) if U.shape[1] else list(range(M.d))
    u = U.shape[1]
    sub_act = []
    quo_act = []
    proj = np.eye(M.d, dtype=np.int64)
    if u:
        E = np.zeros((u, M.d), dtype=np.int64)
        E[np.arange(u), piv] = 1
        proj = np.mod(proj - F.matmul(U, E), F.p)
    proj = proj[comp]
    for a in M.action:
        aU = F.matmul(a, U)
        sub_act.append(aU[piv] if u else np.zeros((0, 0), dtype=np.int64))
        quo_act.append(F.matmul(proj, a[:, comp]))
    sub = ModuleRep(M.p, tuple(sub_act), None)
    quo = ModuleRep(M.p, tuple(quo_act), None)
    return SubQuotient(sub, ModuleMorphism(sub, M, U, check=False), quo,
                       ModuleMorphism(M, quo, proj, check=False), U)


@dataclass(frozen=True, eq=False)
class KernelImage:
    kernel: ModuleRep
    kernel_inclusion: ModuleMorphism
    image: ModuleRep
    image_inclusion: ModuleMorphism
    corestriction: ModuleMorphism


def morphism_kernel_image(kit: "AlgebraKit", f: ModuleMorphism) -> KernelImage:
    F = f.field
    K = ef.column_basis(F, ef.kernel(F, f.mat)) if f.source.d else np.zeros((0, 0), dtype=np.int64)
    ker = sub_quotient(kit, f.source, K, check=False)
    I = ef.column_basis(F, f.mat) if f.source.d else np.zeros((f.target.d, 0), dtype=np.int64)
    im = sub_quotient(kit, f.target, I, check=False)
    piv = ef.pivot_rows(I)
    co = f.mat[piv] if I.shape[1] else np.zeros((0, f.source.d), dtype=np.int64)
    return KernelImage(ker.sub, ker.inclusion, im.sub, im.inclusion,
                       ModuleMorphism(f.source, im.sub, co, check=False))


def radical_top_socle(kit: "AlgebraKit", M: ModuleRep):
    """``(rad M, top M, soc M)`` as modules; structure maps via ``radical_layers``."""
    layers = radical_layers(kit, M)
    return layers["rad"].sub, layers["rad"].quotient, layers["soc"].sub


def radical_layers(kit: "AlgebraKit", M: ModuleRep) -> dict[str, SubQuotient]:
    cache = kit.cache.setdefault("radlayers", {})
    hit = cache.get(M.key)
    if hit is not None:
        return hit
    F = kit.field
    J = kit.radical_basis
    mats = [M.act(J[:, k]) for k in range(J.shape[1])] if M.d else []
    if mats:
        rad = ef.column_basis(F, np.hstack(mats))
        soc = ef.column_basis(F, ef.kernel(F, np.vstack(mats)))
    else:
        rad = np.zeros((M.d, 0), dtype=np.int64)
        soc = np.eye(M.d, dtype=np.int64)
    out = {"rad": sub_quotient(kit, M, rad, check=False),
           "soc": sub_quotient(kit, M, soc, check=False)}
    cache[M.key] = out
    return out


# -- free modules, covers, syzygies -------------------------------------------

def free_module(kit: "AlgebraKit", r: int) -> ModuleRep:
    from .algebra import regular_module
    cache = kit.cache.setdefault("free", {})
    if r not in cache:
        cache[r] = power(kit, regular_module(kit), r).relabel(f"A^{r}" if r != 1 else "A")
    return cache[r]


def free_map(kit: "AlgebraKit", r: int, target: ModuleRep, images: np.ndarray) -> ModuleMorphism:
    """The module map ``A^r -> target`` sending generator t to ``images[:, t]``."""
    F = kit.field
    n = kit.n
    images = np.asarray(images, dtype=np.int64).reshape(target.d, r)
    mat = np.zeros((target.d, r * n), dtype=np.int64)
    for t in range(r):
        for i in range(n):
            mat[:, t * n + i] = F.matmul(target.action[i], images[:, t])
    return ModuleMorphism(free_module(kit, r), target, mat, check=False)


def free_generators(kit: "AlgebraKit", r: int) -> np.ndarray:
    """Columns: the free generators (unit in each copy) of ``A^r``."""
    n = kit.n
    G = np.zeros((r * n, r), dtype=np.int64)
    for t in range(r):
        G[t * n:(t + 1) * n, t] = kit.spec.unit
    return G


def free_cover(kit: "AlgebraKit", M: ModuleRep, seed: int | None = None) -> ModuleMorphism:
    """Surjection ``A^r -> M`` with ``r = dim top M`` on lifts of a top basis.

    With ``seed`` the top basis is mixed by a random invertible matrix and the
    lifts are perturbed by random radical vectors, giving another cover.
    """
    if seed is None:
        cache = kit.cache.setdefault("cover", {})
        hit = cache.get(M.key)
        if hit is not None:
            return hit
    F = kit.field
    rad = radical_layers(kit, M)["rad"].basis
    comp = ef.complement_units(rad) if rad.shape[1] else list(range(M.d))
    r = len(comp)
    G = np.zeros((M.d, r), dtype=np.int64)
    for t, i in enumerate(comp):
        G[i, t] = 1
    if seed is not None and r:
        rng = np.random.default_rng(seed)
        while True:
            T = rng.integers(0, kit.p, (r, r))
            if ef.rank(F, T) == r:
                break
        G = F.matmul(G, T)
        if rad.shape[1]:
            G = np.mod(G + F.matmul(rad, rng.integers(0, kit.p, (rad.shape[1], r))), kit.p)
    pi = free_map(kit, r, M, G)
    if seed is None:
        cache[M.key] = pi
    return pi


@dataclass(frozen=True, eq=False)
class Syzygy:
    module: ModuleRep
    inclusion: ModuleMorphism
    cover: ModuleMorphism


def syzygy_step(kit: "AlgebraKit", M: ModuleRep, seed: int | None = None) -> Syzygy:
    cache = kit.cache.setdefault("syz", {})
    if seed is None and M.key in cache:
        return cache[M.key]
    pi = free_cover(kit, M, seed)
    ki = morphism_kernel_image(kit, pi)
    label = f"Ω({M.label})" if M.label else None
    K = ki.kernel.relabel(label)
    out = Syzygy(K, ModuleMorphism(K, pi.source, ki.kernel_inclusion.mat, check=False), pi)
    if seed is None:
        cache[M.key] = out
    return out


def syzygy(kit: "AlgebraKit", M: ModuleRep, t: int = 1) -> ModuleRep:
    """``Ω^t(M)`` by iterated kernels of free covers (correct up to projective summands)."""
    if t < 0:
        raise ModuleError("syzygy order must be non-negative")
    X = M
    for _ in range(t):
        X = syzygy_step(kit, X).module
    return X


# -- isomorphism --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IsoVerdict:
    status: str  # YES / NO / UNKNOWN
    forward: ModuleMorphism | None = None
    backward: ModuleMorphism | None = None
    reason: str = ""

    def __bool__(self):
        return self.status == "YES"


def fingerprint(kit: "AlgebraKit", M: ModuleRep) -> tuple:
    """Isomorphism invariants: ranks of basis actions, layer dims, hom dims."""
    F = kit.field
    cache = kit.cache.setdefault("fp", {})
    hit = cache.get(M.key)
    if hit is not None:
        return hit
    ranks = tuple(ef.rank(F, a) for a in M.action)
    rad, top, soc = radical_top_socle(kit, M)
    homs = tuple(hom_dim(kit, S, M) for S in kit.simples) + tuple(hom_dim(kit, M, S) for S in kit.simples)
    fp = (M.d, ranks, rad.d, soc.d, hom_dim(kit, M, M), homs)
    cache[M.key] = fp
    return fp


def _combos(F: PrimeField, H: np.ndarray, rng, budget: int, sweep=True):
    """Candidate elements of a space with basis columns H: basis sweep, seeded
    random combinations, then exhaustion if ``p^dim <= budget``."""
    h = H.shape[1]
    if sweep:
        for k in range(h):
            yield H[:, k]
    for _ in range(min(32, budget)):
        c = rng.integers(0, F.p, h)
        yield F.matmul(H, c)
    if F.p ** h <= budget:
        for c in itertools.product(range(F.p), repeat=h):
            yield F.matmul(H, np.array(c, dtype=np.int64))
        yield None  # marks completed exhaustion


def iso_test(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep, budget: int = 100_000,
             seed: int = 0) -> IsoVerdict:
    """Decide ``M ≅ N`` with a verified witness pair, ``NO``, or ``UNKNOWN``."""
    if M.d != N.d:
        return IsoVerdict("NO", reason=f"dimension {M.d} != {N.d}")
    if M == N:
        return IsoVerdict("YES", identity(M), identity(N), "identical")
    if M.d == 0:
        return IsoVerdict("YES", zero_map(M, N), zero_map(N, M), "zero")
    fm, fn = fingerprint(kit, M), fingerprint(kit, N)
    if fm != fn:
        return IsoVerdict("NO", reason=f"fingerprints differ: {fm} vs {fn}")
    H = hom_space(kit, M, N)
    if H.shape[1] != fm[4]:
        return IsoVerdict("NO", reason="dim Hom(M,N) differs from dim End(M)")
    F = kit.field
    rng = np.random.default_rng(seed)
    for v in _combos(F, H, rng, budget):
        if v is None:
            return IsoVerdict("NO", reason="exhaustive search of Hom(M,N) found no isomorphism")
        mat = v.reshape(N.d, M.d)
        if ef.rank(F, mat) == M.d:
            f = ModuleMorphism(M, N, mat, check=False)
            g = inverse_iso(f)
            assert not np.any(F.matmul(g.mat, f.mat) != np.eye(M.d, dtype=np.int64))
            return IsoVerdict("YES", f, g, "witness found")
    return IsoVerdict("UNKNOWN", reason="search budget exhausted")


# -- composition factors ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Factorization:
    status: str  # OK / UNKNOWN
    factors: tuple[tuple[ModuleRep, int], ...]
    note: str = ""

    def dims(self) -> list[int]:
        return sorted(S.d for S, k in self.factors for _ in range(k))


def _dual_action(M: ModuleRep) -> ModuleRep:
    return ModuleRep(M.p, tuple(a.T.copy() for a in M.action))


def _split(kit: "AlgebraKit", M: ModuleRep, rng, tries: int):
    """Proper nonzero invariant subspace, ``"irreducible"``, or ``None`` when undecided."""
    F = kit.field
    if M.d <= 1:
        return "irreducible"
    rad = radical_layers(kit, M)["rad"].basis
    if rad.shape[1]:
        return rad
    dual = _dual_action(M)
    for _ in range(tries):
        a = rng.integers(0, kit.p, kit.n)
        A = M.act(a)
        for f, _mult in ef.factor_poly(F, ef.charpoly(F, A)):
            theta = ef.polyval_matrix(F, f, A)
            null = ef.kernel(F, theta)
            if null.shape[1] == 0:
                continue
            v = null[:, :1]
            S = spin(kit, M, v)
            if S.shape[1] < M.d:
                return S
            if null.shape[1] == len(f) - 1:
                w = ef.kernel(F, theta.T)[:, :1]
                W = spin(kit, dual, w)
                if W.shape[1] < M.d:
                    return ef.column_basis(F, ef.kernel(F, W.T))
                return "irreducible"
    return None


def chop(kit: "AlgebraKit", M: ModuleRep, seed: int = 0, tries: int = 64) -> Factorization:
    """Composition factors with multiplicities, grouped up to isomorphism."""
    rng = np.random.default_rng(seed)
    pending = [M]
    found: list[ModuleRep] = []
    while pending:
        X = pending.pop()
        if X.d == 0:
            continue
        res = _split(kit, X, rng, tries)
        if res is None:
            return Factorization("UNKNOWN", (), f"no split decision for a {X.d}-dim subquotient")
        if isinstance(res, str):
            found.append(X)
        else:
            sq = sub_quotient(kit, X, res, check=False)
            pending.extend([sq.quotient, sq.sub])
    groups: list[list] = []
    for S in found:
        for g in groups:
            verdict = iso_test(kit, g[0], S)
            if verdict.status == "YES":
                g[1] += 1
                break
        else:
            groups.append([S, 1])
    groups.sort(key=lambda g: (g[0].d, fingerprint(kit, g[0])))
    return Factorization("OK", tuple((S.relabel(f"F{i}"), k) for i, (S, k) in enumerate(groups)))


# -- convenience ----------------------------------------------------------------

def cyclic_quotient(kit: "AlgebraKit", element: np.ndarray, label: str | None = None) -> ModuleRep:
    """``A / A·element`` as a left module."""
    from .algebra import regular_module
    A = regular_module(kit)
    U = spin(kit, A, np.asarray(element, dtype=np.int64).reshape(-1, 1))
    return sub_quotient(kit, A, U).quotient.relabel(label)
