import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from singorder import exactfield as ef
from singorder.algebra import build_bound_quiver, build_group, build_univariate, regular_module
from singorder.modrep import (ModuleError, ModuleMorphism, ModuleRep, chop, cyclic_quotient, direct_sum,
                              dsum, free_cover, hom_basis, hom_dim, is_intertwining, iso_test,
                              morphism_kernel_image, power, radical_top_socle, syzygy, syzygy_step,
                              validate_module, zero_module)

F2X2 = build_univariate(2, [0, 0, 1])
F3X3 = build_univariate(3, [0, 0, 0, 1])
A2 = build_bound_quiver(2, 2, [[0, 1]])

# every module of dim <= 2 over the two local algebras, as x-actions
POINTS = {
    "F2": [x for d in (1, 2) for x in oracles.nilpotent_points(2, d, 2)],
    "F3": [x for d in (1, 2) for x in oracles.nilpotent_points(3, d, 3)],
}
KITS = {"F2": F2X2, "F3": F3X3}


def _module(kit, x):
    d = x.shape[0]
    acts = [np.eye(d, dtype=np.int64)]
    power_ = np.eye(d, dtype=np.int64)
    for _ in range(1, kit.n):
        power_ = (power_ @ x) % kit.p
        acts.append(power_)
    return ModuleRep(kit.p, tuple(acts))


def _pairs():
    for name in KITS:
        pts = POINTS[name]
        for i in range(0, len(pts), 3):
            for j in range(0, len(pts), 4):
                yield name, i, j


@pytest.mark.parametrize("name, i, j", list(_pairs()))
def test_hom_dim_matches_brute_force(name, i, j):
    kit = KITS[name]
    M, N = _module(kit, POINTS[name][i]), _module(kit, POINTS[name][j])
    assert validate_module(kit, M) and validate_module(kit, N)
    count = oracles.count_intertwiners(kit.p, [M.action[1]], [N.action[1]])
    assert hom_dim(kit, M, N) == oracles.log_p(kit.p, count)
    for f in hom_basis(kit, M, N):
        assert is_intertwining(M, N, f.mat)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(KITS)), st.data())
def test_conjugate_modules_are_isomorphic(name, data):
    kit = KITS[name]
    x = data.draw(st.sampled_from(POINTS[name]))
    d = x.shape[0]
    F = kit.field
    entries = data.draw(st.lists(st.integers(0, kit.p - 1), min_size=d * d, max_size=d * d))
    g = np.array(entries, dtype=np.int64).reshape(d, d)
    if ef.rank(F, g) < d:
        g = np.eye(d, dtype=np.int64)
    M = _module(kit, x)
    N = _module(kit, F.matmul(F.matmul(g, x), ef.inverse(F, g)))
    v = iso_test(kit, M, N)
    assert v.status == "YES"
    assert v.forward.is_iso() and is_intertwining(M, N, v.forward.mat)


def test_iso_classes_match_orbit_count():
    for name, kit in KITS.items():
        for d in (1, 2):
            pts = [x for x in POINTS[name] if x.shape[0] == d]
            reps = []
            for x in pts:
                M = _module(kit, x)
                if not any(iso_test(kit, M, R).status == "YES" for R in reps):
                    reps.append(M)
            assert len(reps) == oracles.conjugation_orbits(pts, kit.p)


def test_validate_module_rejects_bad_action():
    bad = ModuleRep(2, (np.eye(1, dtype=np.int64), np.array([[1]])))  # x = 1 but x^2 = 0
    assert not validate_module(F2X2, bad)
    with pytest.raises(ModuleError):
        ModuleRep(2, (np.eye(2, dtype=np.int64), np.eye(1, dtype=np.int64)))


def test_morphism_type_check():
    M = regular_module(F2X2)
    with pytest.raises(ModuleError):
        ModuleMorphism(M, M, np.array([[0, 1], [0, 0]]))  # does not commute with x


def test_direct_sum_structure():
    A = regular_module(F3X3)
    S = F3X3.simples[0]
    ds = direct_sum(F3X3, [A, S])
    assert ds.module.d == 4
    for inj, proj in zip(ds.injections, ds.projections):
        assert np.array_equal((proj @ inj).mat, np.eye(inj.source.d, dtype=np.int64))
    assert hom_dim(F3X3, ds.module, S) == hom_dim(F3X3, A, S) + hom_dim(F3X3, S, S)


def test_radical_top_socle_of_regular():
    rad, top, soc = radical_top_socle(F3X3, regular_module(F3X3))
    assert (rad.d, top.d, soc.d) == (2, 1, 1)
    rad, top, soc = radical_top_socle(A2, regular_module(A2))
    assert (rad.d, top.d, soc.d) == (1, 2, 2)


@pytest.mark.parametrize("seed", [None, 1, 2, 3])
def test_free_cover_is_surjective(seed):
    for kit in (F3X3, A2):
        for M in (regular_module(kit), *kit.simples, dsum(kit, *kit.simples)):
            pi = free_cover(kit, M, seed)
            assert pi.is_surjective()
            assert pi.source.d == kit.n * radical_top_socle(kit, M)[1].d


def test_syzygy_dimensions():
    M1 = cyclic_quotient(F3X3, np.array([0, 1, 0]))
    M2 = cyclic_quotient(F3X3, np.array([0, 0, 1]))
    assert syzygy(F3X3, M1).d == 2 and syzygy(F3X3, M2).d == 1
    assert syzygy(F3X3, regular_module(F3X3)).d == 0
    assert syzygy(F3X3, M1, 0) is M1
    step = syzygy_step(F3X3, M1)
    assert not np.any((step.cover @ step.inclusion).mat)
    with pytest.raises(ModuleError):
        syzygy(F3X3, M1, -1)


def test_kernel_image_ranks():
    A = regular_module(F3X3)
    x = hom_basis(F3X3, A, A)
    for f in x:
        ki = morphism_kernel_image(F3X3, f)
        assert ki.kernel.d + ki.image.d == A.d


@pytest.mark.parametrize("kit, M, dims", [
    (F3X3, regular_module(F3X3), [1, 1, 1]),
    (build_group(2, [[0, 1, 2], [1, 2, 0], [2, 0, 1]]), None, [1, 2]),
    (A2, regular_module(A2), [1, 1, 1]),
])
def test_chop_factors_are_irreducible(kit, M, dims):
    M = M or regular_module(kit)
    fac = chop(kit, M)
    assert fac.status == "OK"
    assert fac.dims() == dims
    for S, _ in fac.factors:
        # brute force: no proper nonzero invariant subspace
        for U in oracles.all_subspaces(kit.p, S.d):
            if 1 < len(U) < kit.p ** S.d:
                assert any(tuple(int(t) for t in (a @ np.array(u)) % kit.p) not in U
                           for a in S.action for u in U)


def test_zero_module_and_power():
    Z = zero_module(F2X2)
    assert Z.d == 0 and validate_module(F2X2, Z)
    S = F2X2.simples[0]
    assert power(F2X2, S, 3).d == 3
    assert iso_test(F2X2, Z, Z).status == "YES"
