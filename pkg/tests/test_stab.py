import itertools

import numpy as np
import pytest

from singorder.algebra import build_univariate, regular_module
from singorder.degen import PROVED, REFUTED, verify_certificate
from singorder.modrep import cyclic_quotient, power, zero_module
from singorder.stab import (StabObject, at_level, colimit_hom_estimate, embed, hom_at_level, qst_compare,
                            shift, stab_iso_at_level, triangle_compare)
from singorder.stablecat import check_triangle

F2X2 = build_univariate(2, [0, 0, 1])
F3X3 = build_univariate(3, [0, 0, 0, 1])
A = regular_module(F2X2)
S = F2X2.simples[0]
Z2 = zero_module(F2X2)
M1 = cyclic_quotient(F3X3, np.array([0, 1, 0]), "M1")
M2 = cyclic_quotient(F3X3, np.array([0, 0, 1]), "M2")
M3 = regular_module(F3X3)


def test_embed_and_shift():
    o = embed(S)
    assert (o.X, o.m) == (S, 0)
    assert shift(StabObject(S, 0), 1).m == -1
    assert shift(StabObject(S, 2), -2).m == 4


@pytest.mark.parametrize("k", range(5))
def test_hom_at_level_periodic_simple(k):
    assert hom_at_level(F2X2, embed(S), embed(S), k) == 1


def test_hom_at_level_examples():
    assert hom_at_level(F2X2, embed(A), embed(S), 0) == 0
    assert hom_at_level(F3X3, embed(M1), embed(M2), 0) == 1
    with pytest.raises(ValueError):
        hom_at_level(F2X2, StabObject(S, 2), embed(S), 1)


@pytest.mark.parametrize("m, n, k", [(0, 0, 0), (1, -1, 2), (-2, 0, 1), (2, 2, 3)])
def test_hom_at_level_reindexing(m, n, k):
    a, b = StabObject(M1, m), StabObject(M2, n)
    lo = max(m, n, k)
    assert hom_at_level(F3X3, a, b, lo) == hom_at_level(F3X3, shift(a, -1), shift(b, -1), lo + 1)


def test_colimit_tables():
    t = colimit_hom_estimate(F2X2, embed(S), embed(S), 4)
    assert set(t.dims) == {1} and t.plateau and t.estimate == 1
    t = colimit_hom_estimate(F2X2, embed(A), embed(S), 3)
    assert set(t.dims) == {0} and t.estimate == 0
    t = colimit_hom_estimate(F3X3, embed(M2), embed(M1), 5, window=2)
    assert t.dims[0::2] == t.dims[0::2][:1] * len(t.dims[0::2])
    assert t.dims[1::2] == t.dims[1::2][:1] * len(t.dims[1::2])
    assert t.plateau
    rows = t.rows()
    assert rows[-1]["plateau"] and rows[-1]["transit_rank"] is None


def test_colimit_needs_room():
    with pytest.raises(ValueError):
        colimit_hom_estimate(F2X2, StabObject(S, 3), embed(S), 3)


def test_stab_iso_examples():
    a = StabObject(S, 1)
    v = stab_iso_at_level(F2X2, a, a, 3)
    assert v.status == "YES" and v.level == 1
    assert stab_iso_at_level(F2X2, StabObject(A, 5), embed(Z2), 6).status == "YES"
    v = stab_iso_at_level(F2X2, embed(S), embed(Z2), 3)
    assert v.status == "NO" and v.witness["periods"]


def test_qst_examples():
    v = qst_compare(F3X3, embed(M3), embed(power(F3X3, M1, 3)))
    assert v.status == PROVED and v.witness["level"] == 0
    a = StabObject(M2, 2)
    v = qst_compare(F3X3, a, a)
    assert v.status == PROVED and v.witness["level"] == 2
    v = qst_compare(F2X2, embed(S), StabObject(S, -2))
    assert v.status == PROVED


def test_qst_never_refuted():
    objs = [StabObject(X, m) for X in (M1, M2, M3) for m in (-1, 0, 1)]
    for a, b in itertools.product(objs, repeat=2):
        assert qst_compare(F3X3, a, b, k_max=3).status != REFUTED


@pytest.mark.parametrize("k_max", [2, 3, 4])
def test_qst_monotone_in_k_max(k_max):
    objs = [StabObject(X, m) for X in (S, A, Z2) for m in (-1, 0, 2)]
    for a, b in itertools.product(objs, repeat=2):
        if max(a.m, b.m, 0) > k_max:
            continue
        if qst_compare(F2X2, a, b, k_max).status == PROVED:
            assert qst_compare(F2X2, a, b, k_max + 1).status == PROVED


def test_triangle_compare_reflexive():
    tv = triangle_compare(F3X3, embed(M2), embed(M2))
    assert tv.status == PROVED and tv.consistent


def test_triangle_compare_cubic_chain():
    tv = triangle_compare(F3X3, embed(M3), embed(power(F3X3, M1, 3)))
    assert tv.status == PROVED and tv.consistent and tv.level % 2 == 0
    for T in tv.triangles:
        assert check_triangle(F3X3, T)
    for c in tv.round_trips:
        assert verify_certificate(F3X3, c)


def test_triangle_compare_odd_level_uses_rotation():
    # base level 1 is odd and k_max = 1 leaves no even level to search directly
    a, b = StabObject(M3, 1), StabObject(power(F3X3, M1, 3), 1)
    tv = triangle_compare(F3X3, a, b, k_max=1)
    assert tv.status == PROVED and tv.rotated and tv.level == 2
    for c in tv.verdict.certificates:
        assert verify_certificate(F3X3, c)


def test_at_level_rejects_low_level():
    with pytest.raises(ValueError):
        at_level(F2X2, StabObject(S, 3), 2)
