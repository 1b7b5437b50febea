import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from singorder import exactfield as ef

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return ef.PrimeField(p), np.array(entries, dtype=np.int64).reshape(r, c)


def test_is_prime():
    assert [n for n in range(20) if ef.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        ef.PrimeField(4)


@given(matrices())
def test_rank_nullity(fm):
    F, M = fm
    red = ef.reduce(F, M)
    assert red.rank + red.kernel.shape[1] == M.shape[1]
    assert not np.any(F.matmul(M, red.kernel))
    assert ef.rank(F, red.kernel) == red.kernel.shape[1]


@given(matrices())
def test_rank_matches_sympy_over_gf(fm):
    F, M = fm
    sm = sympy.Matrix(M.tolist())
    # rank over F_p through sympy's finite-field domain
    from sympy.polys.matrices import DomainMatrix
    dm = DomainMatrix.from_Matrix(sm).convert_to(sympy.GF(F.p))
    assert ef.rank(F, M) == dm.rank()


@given(matrices(), st.data())
def test_solve_consistent_systems(fm, data):
    F, A = fm
    x = np.array(data.draw(st.lists(st.integers(0, F.p - 1), min_size=A.shape[1], max_size=A.shape[1])))
    b = F.matmul(A, x.reshape(-1, 1))[:, 0]
    sol = ef.solve(F, A, b)
    assert sol is not None
    assert np.array_equal(F.matmul(A, sol.reshape(-1, 1))[:, 0], b)


def test_solve_inconsistent():
    F = ef.PrimeField(3)
    assert ef.solve(F, np.array([[1, 0], [1, 0]]), np.array([1, 2])) is None


@given(matrices(4, 4))
def test_column_basis_is_canonical(fm):
    F, V = fm
    B = ef.column_basis(F, V)
    assert ef.rank(F, B) == B.shape[1] == ef.rank(F, V)
    # any invertible column operation leaves the basis unchanged
    G = np.eye(V.shape[1], dtype=np.int64)
    G[0] = np.arange(1, V.shape[1] + 1) % F.p
    G[0, 0] = 1
    assert np.array_equal(ef.column_basis(F, F.matmul(V, G)), B)
    for j, r in enumerate(ef.pivot_rows(B)):
        assert B[r, j] == 1 and not np.any(np.delete(B[r], j))


@given(matrices(4, 4))
def test_inverse_roundtrip(fm):
    F, M = fm
    if M.shape[0] != M.shape[1] or ef.rank(F, M) < M.shape[0]:
        return
    assert np.array_equal(F.matmul(M, ef.inverse(F, M)), F.eye(M.shape[0]))


def test_inverse_singular():
    F = ef.PrimeField(2)
    with pytest.raises(ValueError):
        ef.inverse(F, np.array([[1, 1], [1, 1]]))


@settings(max_examples=60)
@given(matrices(5, 5))
def test_charpoly_against_sympy(fm):
    F, M = fm
    n = min(M.shape)
    A = M[:n, :n]
    x = sympy.symbols("x")
    ref = sympy.Poly(sympy.Matrix(A.tolist()).charpoly(x).as_expr(), x, modulus=F.p)
    got = ef.charpoly(F, A)
    want = [int(c) % F.p for c in reversed(ref.all_coeffs())]
    want += [0] * (len(got) - len(want))
    assert got == want
    assert not np.any(ef.polyval_matrix(F, got, A))  # Cayley-Hamilton


@pytest.mark.parametrize("p, coeffs", [(2, [1, 1, 1]), (3, [0, 0, 0, 1]), (5, [4, 0, 1]), (2, [1, 0, 0, 1])])
def test_factor_poly_reconstructs(p, coeffs):
    F = ef.PrimeField(p)
    x = sympy.symbols("x")
    prod = sympy.Poly(1, x, modulus=p)
    for f, k in ef.factor_poly(F, coeffs):
        assert f[-1] == 1
        prod *= sympy.Poly(list(reversed(f)), x, modulus=p) ** k
    assert prod == sympy.Poly(list(reversed(coeffs)), x, modulus=p)


def test_block_diag_and_complement():
    F = ef.PrimeField(3)
    D = ef.block_diag(np.ones((1, 2), dtype=np.int64), np.full((2, 1), 2))
    assert D.tolist() == [[1, 1, 0], [0, 0, 2], [0, 0, 2]]
    B = ef.column_basis(F, np.array([[0], [1], [2]]))
    assert ef.complement_units(B) == [0, 2]
    assert ef.in_span(F, B, np.array([0, 2, 1]))
    assert not ef.in_span(F, B, np.array([1, 0, 0]))
