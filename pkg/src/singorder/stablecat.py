"""The stable module category: stable homs and isomorphism, and standard
left triangles built from short exact sequences.

A map ``M -> N`` is stably zero when it factors through a projective module;
since every map from a projective to ``N`` lifts through the free cover of
``N``, the factoring maps are exactly ``pi_N ∘ g`` with ``g: M -> A^r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import exactfield as ef
from .degen import DegenerationCertificate, make_certificate, verify_certificate
from .modrep import (ModuleMorphism, ModuleRep, Syzygy, _combos, dsum, free_cover, free_map,
                     free_generators, hom_space, identity, inverse_iso, is_intertwining,
                     morphism_kernel_image, syzygy_step, zero_map, zero_module)

if TYPE_CHECKING:
    from .algebra import AlgebraKit


def _vec(mat: np.ndarray) -> np.ndarray:
    return np.asarray(mat, dtype=np.int64).reshape(-1)


# -- stable homs ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StableHom:
    full: int
    factoring: int
    stable: int
    factoring_basis: np.ndarray   # columns: vec of maps factoring through projectives
    complement: np.ndarray        # columns: maps whose classes form a stable basis

    def as_tuple(self) -> tuple[int, int, int]:
        return self.full, self.factoring, self.stable


def factoring_space(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep) -> np.ndarray:
    """Canonical basis of the maps ``M -> N`` factoring through a projective."""
    cache = kit.cache.setdefault("pfactor", {})
    key = (M.key, N.key)
    if key in cache:
        return cache[key]
    F = kit.field
    if M.d == 0 or N.d == 0:
        out = np.zeros((M.d * N.d, 0), dtype=np.int64)
    else:
        pi = free_cover(kit, N)
        H = hom_space(kit, M, pi.source)
        cols = [_vec(F.matmul(pi.mat, H[:, k].reshape(pi.source.d, M.d))) for k in range(H.shape[1])]
        out = ef.column_basis(F, np.stack(cols, axis=1)) if cols else np.zeros((M.d * N.d, 0), dtype=np.int64)
    cache[key] = out
    return out


def stable_hom(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep) -> StableHom:
    cache = kit.cache.setdefault("stablehom", {})
    key = (M.key, N.key)
    if key in cache:
        return cache[key]
    F = kit.field
    H = hom_space(kit, M, N)
    P = factoring_space(kit, M, N)
    if H.shape[1] > P.shape[1]:
        red = ef.reduce(F, np.hstack([P, H]))
        picks = [c - P.shape[1] for c in red.pivots if c >= P.shape[1]]
        comp = H[:, picks]
    else:
        comp = np.zeros((H.shape[0], 0), dtype=np.int64)
    out = StableHom(H.shape[1], P.shape[1], H.shape[1] - P.shape[1], P, comp)
    cache[key] = out
    return out


def is_stably_zero(kit: "AlgebraKit", M: ModuleRep, budget: int | None = None) -> bool:
    """Whether ``id_M`` factors through a projective (M is projective)."""
    if M.d == 0:
        return True
    return ef.in_span(kit.field, factoring_space(kit, M, M), _vec(np.eye(M.d, dtype=np.int64)))


def stably_equal(kit: "AlgebraKit", f: ModuleMorphism, g: ModuleMorphism) -> bool:
    diff = np.mod(f.mat - g.mat, kit.p)
    return ef.in_span(kit.field, factoring_space(kit, f.source, f.target), _vec(diff))


# -- stable isomorphism ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StableIsoVerdict:
    status: str  # YES / NO / UNKNOWN
    forward: ModuleMorphism | None = None
    backward: ModuleMorphism | None = None
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.status == "YES"


def stable_fingerprint(kit: "AlgebraKit", M: ModuleRep, tests) -> tuple:
    return tuple((stable_hom(kit, T, M).stable, stable_hom(kit, M, T).stable) for T in tests)


def _fingerprint_tests(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep):
    out = [(S.label or f"S{i}", S) for i, S in enumerate(kit.simples)]
    return out + [("M", M), ("N", N)]


def _inverse_modulo(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep, f: np.ndarray):
    """Some ``g: N -> M`` with ``g f ≡ id_M`` and ``f g ≡ id_N`` modulo
    projectively factoring maps, or ``None``.  The conditions are linear in g."""
    F = kit.field
    G = hom_space(kit, N, M)
    PM, PN = factoring_space(kit, M, M), factoring_space(kit, N, N)
    h = G.shape[1]
    if h == 0:
        return None
    top = [_vec(F.matmul(G[:, j].reshape(M.d, N.d), f)) for j in range(h)]
    bot = [_vec(F.matmul(f, G[:, j].reshape(M.d, N.d))) for j in range(h)]
    A = np.zeros((M.d * M.d + N.d * N.d, h + PM.shape[1] + PN.shape[1]), dtype=np.int64)
    A[:M.d * M.d, :h] = np.stack(top, axis=1)
    A[M.d * M.d:, :h] = np.stack(bot, axis=1)
    A[:M.d * M.d, h:h + PM.shape[1]] = F.neg(PM)
    A[M.d * M.d:, h + PM.shape[1]:] = F.neg(PN)
    rhs = np.concatenate([_vec(np.eye(M.d, dtype=np.int64)), _vec(np.eye(N.d, dtype=np.int64))])
    x = ef.solve(F, A, rhs)
    if x is None:
        return None
    return F.matmul(G[:, :h], x[:h]).reshape(M.d, N.d)


def stable_iso(kit: "AlgebraKit", M: ModuleRep, N: ModuleRep, budget: int = 100_000,
               seed: int = 0) -> StableIsoVerdict:
    """Decide whether M and N are isomorphic in the stable category.

    NO is only reported when stable-hom dimensions against a test module
    differ; a search that finds no stable unit yields UNKNOWN.
    """
    cache = kit.cache.setdefault("stableiso", {})
    key = (M.key, N.key, budget, seed)
    if key in cache:
        return cache[key]
    out = _stable_iso(kit, M, N, budget, seed)
    cache[key] = out
    return out


def _stable_iso(kit, M, N, budget, seed):
    F = kit.field
    if M == N:
        return StableIsoVerdict("YES", identity(M), identity(N), {"reason": "identical"})
    zm, zn = is_stably_zero(kit, M), is_stably_zero(kit, N)
    if zm and zn:
        return StableIsoVerdict("YES", zero_map(M, N), zero_map(N, M), {"reason": "both stably zero"})
    for name, T in _fingerprint_tests(kit, M, N):
        a, b = stable_hom(kit, T, M).stable, stable_hom(kit, T, N).stable
        if a != b:
            return StableIsoVerdict("NO", witness={"test": name, "direction": "Hom(T,-)", "dims": [a, b]})
        a, b = stable_hom(kit, M, T).stable, stable_hom(kit, N, T).stable
        if a != b:
            return StableIsoVerdict("NO", witness={"test": name, "direction": "Hom(-,T)", "dims": [a, b]})
    C = stable_hom(kit, M, N).complement
    rng = np.random.default_rng(seed)
    for v in _combos(F, C, rng, budget):
        if v is None:
            return StableIsoVerdict("UNKNOWN", witness={"reason": "no stable unit among all stable classes",
                                                        "exhausted": True})
        f = v.reshape(N.d, M.d)
        g = _inverse_modulo(kit, M, N, f)
        if g is not None:
            return StableIsoVerdict("YES", ModuleMorphism(M, N, f, check=False),
                                    ModuleMorphism(N, M, g, check=False), {"reason": "witness found"})
    return StableIsoVerdict("UNKNOWN", witness={"reason": "search budget exhausted", "exhausted": False})


# -- lifting helpers --------------------------------------------------------------

def lift_free(kit: "AlgebraKit", surj: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """A map ``h: F -> surj.source`` with ``surj ∘ h = f`` for ``f`` out of a free module."""
    F = kit.field
    r = f.source.d // kit.n if kit.n else 0
    gens = free_generators(kit, r)
    targets = F.matmul(f.mat, gens)
    pre = ef.solve(F, surj.mat, targets) if r else np.zeros((surj.source.d, 0), dtype=np.int64)
    if pre is None:
        raise ValueError("map does not lift: target not surjected onto")
    h = free_map(kit, r, surj.source, pre)
    return ModuleMorphism(f.source, surj.source, h.mat, check=False)


def restrict(kit: "AlgebraKit", f: np.ndarray, source_incl: ModuleMorphism,
             target_incl: ModuleMorphism) -> np.ndarray:
    """Matrix of ``f`` restricted to submodules given by their inclusions."""
    F = kit.field
    img = F.matmul(f, source_incl.mat)
    if target_incl.source.d == 0:
        if np.any(img):
            raise ValueError("restriction does not land in the target submodule")
        return np.zeros((0, source_incl.source.d), dtype=np.int64)
    x = ef.solve(F, target_incl.mat, img)
    if x is None:
        raise ValueError("restriction does not land in the target submodule")
    return x


def omega_map(kit: "AlgebraKit", f: ModuleMorphism) -> ModuleMorphism:
    """The induced map ``Ω'M -> Ω'N`` between the kernels of the chosen free covers."""
    F = kit.field
    sm, sn = syzygy_step(kit, f.source), syzygy_step(kit, f.target)
    comp = ModuleMorphism(sm.cover.source, f.target, F.matmul(f.mat, sm.cover.mat), check=False)
    lift = lift_free(kit, sn.cover, comp)
    mat = restrict(kit, lift.mat, sm.inclusion, sn.inclusion)
    return ModuleMorphism(sm.module, sn.module, mat, check=False)


# -- triangles ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LeftTriangle:
    """``Ω'Z -w-> B -u-> C -v-> Z`` from an exact ``0 -> B -> C -> Z -> 0``."""
    Z: ModuleRep
    B: ModuleRep
    C: ModuleRep
    u: ModuleMorphism
    v: ModuleMorphism
    syz: Syzygy            # Ω'Z with its inclusion and the cover of Z
    rho: ModuleMorphism    # lift of the cover: v ∘ rho = cover
    w: ModuleMorphism      # u ∘ w = rho ∘ inclusion
    meta: dict = field(default_factory=dict)

    @property
    def cover(self) -> ModuleMorphism:
        return self.syz.cover


@dataclass(frozen=True)
class TriangleCheck:
    ok: bool
    diagnostics: str

    def __bool__(self):
        return self.ok


def _sequence_exact(F, u: ModuleMorphism, v: ModuleMorphism) -> str | None:
    if u.target != v.source:
        return "maps are not composable"
    if not is_intertwining(u.source, u.target, u.mat) or not is_intertwining(v.source, v.target, v.mat):
        return "a sequence map is not a module map"
    ru, rv = u.rank(), v.rank()
    if ru != u.source.d:
        return "first map not injective"
    if rv != v.target.d:
        return "second map not surjective"
    if np.any(F.matmul(v.mat, u.mat)):
        return "composition nonzero"
    if ru + rv != u.target.d:
        return "not exact in the middle"
    return None


def check_triangle(kit: "AlgebraKit", T: LeftTriangle) -> TriangleCheck:
    F = kit.field
    err = _sequence_exact(F, T.u, T.v)
    if err:
        return TriangleCheck(False, err)
    if T.cover.target != T.Z or T.syz.inclusion.target != T.cover.source:
        return TriangleCheck(False, "cover data does not match Z")
    if np.any(F.matmul(T.cover.mat, T.syz.inclusion.mat)) or T.cover.rank() != T.Z.d:
        return TriangleCheck(False, "cover is not a surjection with the given kernel")
    if T.syz.inclusion.rank() != T.syz.module.d or T.syz.module.d + T.Z.d != T.cover.source.d:
        return TriangleCheck(False, "syzygy is not the kernel of the cover")
    if not is_intertwining(T.cover.source, T.C, T.rho.mat) or not is_intertwining(T.syz.module, T.B, T.w.mat):
        return TriangleCheck(False, "lift or connecting map is not a module map")
    if np.any(F.sub(F.matmul(T.v.mat, T.rho.mat), T.cover.mat)):
        return TriangleCheck(False, "lift square does not commute")
    if np.any(F.sub(F.matmul(T.u.mat, T.w.mat), F.matmul(T.rho.mat, T.syz.inclusion.mat))):
        return TriangleCheck(False, "connecting map is not the restricted lift")
    return TriangleCheck(True, "ok")


def triangle_from_sequence(kit: "AlgebraKit", u: ModuleMorphism, v: ModuleMorphism,
                           meta: dict | None = None) -> LeftTriangle:
    F = kit.field
    err = _sequence_exact(F, u, v)
    if err:
        raise ValueError(f"not a short exact sequence: {err}")
    Z = v.target
    syz = syzygy_step(kit, Z)
    rho = lift_free(kit, v, syz.cover)
    w = restrict(kit, rho.mat, syz.inclusion, u)
    T = LeftTriangle(Z, u.source, u.target, u, v, syz, rho,
                     ModuleMorphism(syz.module, u.source, w, check=False), dict(meta or {}))
    chk = check_triangle(kit, T)
    if not chk:
        raise RuntimeError(f"constructed triangle fails its invariants: {chk.diagnostics}")
    return T


def standard_triangle(kit: "AlgebraKit", Z: ModuleRep) -> LeftTriangle:
    """``Ω'Z -> Ω'Z -> F -> Z`` from the free cover of Z."""
    syz = syzygy_step(kit, Z)
    return triangle_from_sequence(kit, syz.inclusion, syz.cover, {"kind": "cover"})


def triangle_from_certificate(kit: "AlgebraKit", cert: DegenerationCertificate) -> LeftTriangle:
    chk = verify_certificate(kit, cert)
    if not chk:
        raise ValueError(f"certificate does not verify: {chk.diagnostics}")
    return triangle_from_sequence(kit, cert.u, cert.v, {"certificate": cert.shape,
                                                        "lower": cert.lower.label, "upper": cert.upper.label})


def certificate_from_triangle(kit: "AlgebraKit", T: LeftTriangle, lower: ModuleRep, Z: ModuleRep,
                              phi: ModuleMorphism | None = None, R: ModuleRep | None = None,
                              psi: ModuleMorphism | None = None,
                              metadata: dict | None = None) -> DegenerationCertificate:
    """Riedtmann certificate ``0 -> B + R -> lower + Z -> Z -> 0`` from a triangle.

    ``phi: C -> lower + Z`` and ``psi: T.Z -> Z + R`` identify the triangle's
    terms (identities when they already agree literally); ``R`` must be
    projective.  The new middle map is ``alpha = pr_Z psi v phi^-1`` and the
    kernel of alpha is split as ``B + R`` by an exactly solved section.
    """
    F = kit.field
    R = R if R is not None else zero_module(kit)
    middle = dsum(kit, lower, Z)
    if phi is None:
        if T.C != middle:
            raise ValueError("triangle middle term is not literally lower + Z; pass phi")
        phi = identity(middle)
    ZR = dsum(kit, Z, R)
    if psi is None:
        if T.Z != ZR:
            raise ValueError("triangle third term is not literally Z + R; pass psi")
        psi = identity(ZR)
    if phi.target != middle or psi.target != ZR:
        raise ValueError("identifications have the wrong targets")
    core = F.matmul(psi.mat, F.matmul(T.v.mat, inverse_iso(phi).mat))
    alpha = core[:Z.d]
    beta = core[Z.d:]
    ki = morphism_kernel_image(kit, ModuleMorphism(middle, Z, alpha, check=False))
    K, iK = ki.kernel, ki.kernel_inclusion
    to_R = ModuleMorphism(K, R, F.matmul(beta, iK.mat), check=False)
    B_in = _coords(F, iK.mat, F.matmul(phi.mat, T.u.mat))
    if R.d:
        H = hom_space(kit, R, K)
        eqs = [_vec(F.matmul(to_R.mat, H[:, j].reshape(K.d, R.d))) for j in range(H.shape[1])]
        c = ef.solve(F, np.stack(eqs, axis=1), _vec(np.eye(R.d, dtype=np.int64))) if eqs else None
        if c is None:
            raise RuntimeError("no section of the kernel onto R: R is not projective or the data is inconsistent")
        s = F.matmul(H, c).reshape(K.d, R.d)
        iso = np.hstack([B_in, s])
        upper = dsum(kit, T.B, R)
    else:
        iso = B_in
        upper = T.B
    u = F.matmul(iK.mat, iso)
    meta = {"move": "from-triangle", "R": R.label if R.d else None, **(metadata or {})}
    cert = make_certificate(kit, "riedtmann", lower, upper, Z, u, alpha, meta)
    chk = verify_certificate(kit, cert)
    if not chk:
        raise RuntimeError(f"certificate from triangle fails verification: {chk.diagnostics}")
    return cert


def _coords(F, basis: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    if basis.shape[1] == 0:
        return np.zeros((0, vecs.shape[1]), dtype=np.int64)
    x = ef.solve(F, basis, vecs)
    if x is None:
        raise ValueError("vectors do not lie in the given subspace")
    return x


def rotate(kit: "AlgebraKit", T: LeftTriangle) -> LeftTriangle:
    """Triangle on ``(Ω'Z, Ω'B, K)`` from the horseshoe cover ``F_B + F_Z -> C``.

    ``K`` is the kernel of ``[u pi_B, rho]``; it agrees with ``Ω'C`` up to a
    free summand.
    """
    F = kit.field
    sB = syzygy_step(kit, T.B)
    sZ = T.syz
    FB, FZ = sB.cover.source, sZ.cover.source
    F1 = dsum(kit, FB, FZ)
    gamma = np.hstack([F.matmul(T.u.mat, sB.cover.mat), T.rho.mat])
    g1 = ModuleMorphism(F1, T.C, gamma, check=False)
    ki = morphism_kernel_image(kit, g1)
    K, iK = ki.kernel, ki.kernel_inclusion
    emb_B = np.vstack([sB.inclusion.mat, np.zeros((FZ.d, sB.module.d), dtype=np.int64)])
    u = _coords(F, iK.mat, emb_B)
    z_part = iK.mat[FB.d:]
    v = _coords(F, sZ.inclusion.mat, z_part)
    u_m = ModuleMorphism(sB.module, K, u, check=False)
    v_m = ModuleMorphism(K, sZ.module, v, check=False)
    return triangle_from_sequence(kit, u_m, v_m, {"kind": "rotation", "gamma": g1, "kernel_inclusion": iK})


def omega_certificate(kit: "AlgebraKit", cert: DegenerationCertificate) -> DegenerationCertificate:
    """From ``L <=deg B`` (riedtmann, third term Z) build a verifying certificate
    ``Ω'L + F1 <=deg Ω'B + F2`` with third term ``Ω'Z``; F1, F2 free.

    The rotated triangle's middle K is identified with ``Ω'L + Ω'Z`` up to free
    summands by an explicit Schanuel isomorphism ``K + F2 ≅ (Ω'L + Ω'Z) + F1``.
    """
    F = kit.field
    if cert.shape != "riedtmann":
        raise ValueError("omega_certificate expects a riedtmann certificate")
    T = triangle_from_certificate(kit, cert)
    Rt = rotate(kit, T)
    g1: ModuleMorphism = Rt.meta["gamma"]
    i1: ModuleMorphism = Rt.meta["kernel_inclusion"]
    F1 = g1.source
    L, Z = cert.lower, cert.Z
    sL, sZ = syzygy_step(kit, L), syzygy_step(kit, Z)
    F2 = dsum(kit, sL.cover.source, sZ.cover.source)
    g2 = ModuleMorphism(F2, T.C, ef.block_diag(sL.cover.mat, sZ.cover.mat), check=False)
    i2 = ef.block_diag(sL.inclusion.mat, sZ.inclusion.mat)
    lam = lift_free(kit, g2, g1).mat            # F1 -> F2, g2 lam = g1
    mu = lift_free(kit, g1, g2).mat             # F2 -> F1, g1 mu = g2
    k1, f1, f2 = i1.source.d, F1.d, F2.d
    x = np.hstack([i1.mat, mu])                 # (k, b) -> k + mu b  in F1
    first = F.sub(np.hstack([np.zeros((f2, k1), dtype=np.int64), np.eye(f2, dtype=np.int64)]),
                  F.matmul(lam, x))
    c = _coords(F, i2, first)                   # coordinates in Ω'L + Ω'Z
    phi = np.vstack([c, x])                     # K + F2 -> (Ω'L + Ω'Z) + F1
    l, z = sL.module.d, sZ.module.d
    # reorder (Ω'L, Ω'Z, F1) -> (Ω'L, F1, Ω'Z)
    order = list(range(l)) + list(range(l + z, l + z + f1)) + list(range(l, l + z))
    perm = np.eye(l + z + f1, dtype=np.int64)[order]
    iso = F.matmul(perm, phi)
    lower = dsum(kit, sL.module, F1)
    upper = dsum(kit, Rt.B, F2)
    u = F.matmul(iso, ef.block_diag(Rt.u.mat, np.eye(f2, dtype=np.int64)))
    iso_inv = ef.inverse(F, iso)
    v = F.matmul(Rt.v.mat, iso_inv[:k1])
    meta = {"move": "syzygy", "P": f"A^{f1 // kit.n}", "Q": f"A^{f2 // kit.n}"}
    out = make_certificate(kit, "riedtmann", lower, upper, sZ.module, u, v, meta)
    chk = verify_certificate(kit, out)
    if not chk:
        raise RuntimeError(f"syzygy certificate fails verification: {chk.diagnostics}")
    return out
