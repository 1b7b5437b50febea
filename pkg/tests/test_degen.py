import numpy as np
import pytest

import oracles
from singorder import exactfield as ef
from singorder.algebra import build_bound_quiver, build_univariate, regular_module
from singorder.degen import (PROVED, REFUTED, canonical, deg_search, grothendieck_filter, hom_filters,
                             make_certificate, one_step_degenerations, split_move_certificate,
                             st_compare, submodules, transport_lower, transport_upper, trivial_certificate,
                             verify_certificate, verify_chain)
from singorder.modrep import (ModuleMorphism, ModuleRep, cyclic_quotient, dsum, is_invariant, iso_test,
                              power, zero_module)
from singorder.poset import enumerate_modules

F2X2 = build_univariate(2, [0, 0, 1])
F3X3 = build_univariate(3, [0, 0, 0, 1])
A2 = build_bound_quiver(2, 2, [[0, 1]])
A = regular_module(F2X2)
S = F2X2.simples[0]
M1 = cyclic_quotient(F3X3, np.array([0, 1, 0]), "M1")
M2 = cyclic_quotient(F3X3, np.array([0, 0, 1]), "M2")
M3 = regular_module(F3X3)
DIM3 = enumerate_modules(F3X3, 3).members


def _hand_certificate(v_mat):
    # 0 -> S+S -> A+S -> S -> 0 ; u sends the summands to the socle of A and to the S summand
    u = np.array([[0, 0], [1, 0], [0, 1]])
    return make_certificate(F2X2, "riedtmann", A, power(F2X2, S, 2), S, u, np.array(v_mat))


def test_hand_built_riedtmann_certificate():
    check = verify_certificate(F2X2, _hand_certificate([[1, 0, 0]]))
    assert check and "2 + 1 = 3" in check.diagnostics


def test_corrupted_certificate_reports_composition():
    check = verify_certificate(F2X2, _hand_certificate([[1, 0, 1]]))
    assert not check and check.diagnostics == "composition nonzero"


def test_non_module_map_rejected():
    c = make_certificate(F2X2, "riedtmann", A, power(F2X2, S, 2), S,
                         np.array([[1, 0], [0, 0], [0, 1]]), np.array([[1, 0, 0]]))
    assert not verify_certificate(F2X2, c)


@pytest.mark.parametrize("shape", ["riedtmann", "zwara"])
@pytest.mark.parametrize("idx", range(len(DIM3)))
def test_split_moves_verify_for_every_submodule(shape, idx):
    M = DIM3[idx]
    subs = submodules(F3X3, M)
    assert not subs.truncated
    for U in subs.bases:
        assert is_invariant(F3X3, M, U)
        c = split_move_certificate(F3X3, M, U, shape)
        assert verify_certificate(F3X3, c)


@pytest.mark.parametrize("idx", range(len(DIM3)))
def test_submodule_count_matches_brute_force(idx):
    M = DIM3[idx]
    brute = sum(1 for U in oracles.all_subspaces(3, 3)
                if all(tuple(int(t) for t in (M.action[1] @ np.array(u)) % 3) in U for u in U))
    assert len(submodules(F3X3, M).bases) == brute


def test_hom_filter_examples():
    S2 = power(F2X2, S, 2)
    assert hom_filters(F2X2, A, S2)
    bad = hom_filters(F2X2, S2, A)
    assert not bad and bad.witness == "S" and bad.dims == (2, 1)
    assert hom_filters(F2X2, A, A)


def test_grothendieck_filter_examples():
    assert grothendieck_filter(F2X2, A, power(F2X2, S, 2))
    assert grothendieck_filter(F3X3, M3, power(F3X3, M1, 3))
    S0, S1 = A2.simples
    res = grothendieck_filter(A2, dsum(A2, S0, S0), dsum(A2, S0, S1))
    assert res.status == "FAIL"


def test_one_step_examples():
    moves = one_step_degenerations(F2X2, A).moves
    assert len(moves) == 1
    assert iso_test(F2X2, moves[0].upper, power(F2X2, S, 2)).status == "YES"
    assert not one_step_degenerations(F2X2, S).moves
    moves = one_step_degenerations(F3X3, M3).moves
    assert len(moves) == 1
    assert iso_test(F3X3, moves[0].upper, dsum(F3X3, M2, M1)).status == "YES"
    for mv in moves:
        assert verify_certificate(F3X3, mv.certificate)


def test_deg_search_examples():
    bottom = power(F3X3, M1, 3)
    v = deg_search(F3X3, M3, bottom, depth=2)
    assert v.status == PROVED and len(v.certificates) == 2
    assert verify_chain(F3X3, v.certificates)
    assert v.certificates[0].lower == M3 and v.certificates[-1].upper == bottom
    r = deg_search(F3X3, bottom, M3)
    assert r.status == REFUTED
    assert r.witness["test"] == "S" and r.witness["dims"] == [3, 1]
    refl = deg_search(F3X3, M2, M2)
    assert refl.status == PROVED and refl.witness["chain_length"] == 0


def test_deg_search_depth_limit_is_not_a_refutation():
    v = deg_search(F3X3, M3, power(F3X3, M1, 3), depth=1)
    assert v.status != REFUTED


def test_st_compare_examples():
    v = st_compare(F2X2, A, zero_module(F2X2))
    assert v.status == PROVED and verify_chain(F2X2, v.certificates)
    v = st_compare(F3X3, M3, power(F3X3, M1, 3))
    assert v.status == PROVED and v.witness["padding"]["P"] == {"A": 0}
    assert st_compare(F3X3, M2, M2).status == PROVED


def _conjugate(M, g):
    F = M.field
    gi = ef.inverse(F, g)
    return ModuleRep(M.p, tuple(F.matmul(F.matmul(gi, a), g) for a in M.action))


@pytest.mark.parametrize("sub", [1, 2])
def test_transport_along_isomorphisms(sub):
    c = split_move_certificate(F3X3, M3, submodules(F3X3, M3).bases[sub])
    g = np.array([[1, 0, 0], [1, 1, 0], [2, 1, 1]])
    low = _conjugate(M3, g)  # g: low -> M3 intertwines
    moved = transport_lower(F3X3, c, ModuleMorphism(low, M3, g))
    assert moved.lower == low and verify_certificate(F3X3, moved)
    up = _conjugate(c.upper, g)
    moved = transport_upper(F3X3, c, ModuleMorphism(up, c.upper, g))
    assert moved.upper == up and verify_certificate(F3X3, moved)


def test_trivial_certificate_and_canonical():
    for M in DIM3:
        rep, f = canonical(F3X3, M)
        assert f.is_iso()
        c = trivial_certificate(F3X3, rep, M, ModuleMorphism(M, rep, f.mat))
        assert verify_certificate(F3X3, c)
