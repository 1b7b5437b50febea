"""Dense exact linear algebra over a prime field F_p.

Matrices are plain 2-D numpy integer arrays whose entries are residues in
``[0, p)``.  Every routine here is exact; nothing ever touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_PRIME = 2**31 - 1
_INT64_LIMIT = 2**63 - 1


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not (2 <= self.p <= MAX_PRIME):
            raise ValueError(f"field characteristic must be in [2, 2^31-1], got {self.p!r}")
        if not is_prime(int(self.p)):
            raise ValueError(f"{self.p} is not prime")

    def array(self, data, shape=None) -> np.ndarray:
        a = np.mod(np.array(data, dtype=object), self.p).astype(np.int64)
        if shape is not None:
            a = a.reshape(shape)
        return a

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def inv(self, a: int) -> int:
        return pow(int(a) % self.p, -1, self.p)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return np.mod(-a, self.p)

    def add(self, *terms: np.ndarray) -> np.ndarray:
        out = terms[0].astype(np.int64)
        for t in terms[1:]:
            out = np.mod(out + t, self.p)
        return np.mod(out, self.p)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.mod(a - b, self.p)

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        return np.mod(a * (int(c) % self.p), self.p)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        inner = a.shape[-1]
        if (self.p - 1) ** 2 * max(inner, 1) <= _INT64_LIMIT:
            return np.mod(a @ b, self.p)
        big = np.mod(a.astype(object) @ b.astype(object), self.p)
        return big.astype(np.int64)

    def matpow(self, a: np.ndarray, e: int) -> np.ndarray:
        result = self.eye(a.shape[0])
        base = a
        while e:
            if e & 1:
                result = self.matmul(result, base)
            base = self.matmul(base, base)
            e >>= 1
        return result


@dataclass(frozen=True)
class Reduction:
    rank: int
    rref: np.ndarray
    pivots: tuple[int, ...]
    kernel: np.ndarray
    """Columns span ``{v : M v = 0}``; shape ``(cols, cols - rank)``."""


def _row_reduce(F: PrimeField, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    p = F.p
    A = np.mod(np.array(M, dtype=np.int64), p)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r] = np.mod(A[r] * pow(lead, -1, p), p)
        col = A[:, c].copy()
        col[r] = 0
        targets = np.flatnonzero(col)
        if targets.size:
            A[targets] = np.mod(A[targets] - np.outer(col[targets], A[r]), p)
        pivots.append(c)
        r += 1
    return A, pivots


def reduce(F: PrimeField, M: np.ndarray) -> Reduction:
    """Reduced row echelon form, rank, pivot columns and a kernel basis."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError("reduce expects a 2-D matrix")
    rows, cols = M.shape
    A, pivots = _row_reduce(F, M)
    rank = len(pivots)
    free = [c for c in range(cols) if c not in set(pivots)]
    K = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, pc in enumerate(pivots):
            K[pc, j] = (-A[i, f]) % F.p
    return Reduction(rank, A[:rank] if rank else np.zeros((0, cols), dtype=np.int64),
                     tuple(pivots), K)


def rank(F: PrimeField, M: np.ndarray) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(_row_reduce(F, M)[1])


def kernel(F: PrimeField, M: np.ndarray) -> np.ndarray:
    return reduce(F, M).kernel


def solve(F: PrimeField, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Some ``x`` with ``A x = b``, or ``None`` when the system is inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (all must be
    consistent).  The particular solution puts free variables to zero.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"dimension mismatch: A has {A.shape[0]} rows, b has {B.shape[0]}")
    cols = A.shape[1]
    R, pivots = _row_reduce(F, np.hstack([A, B]))
    if any(pc >= cols for pc in pivots):
        return None
    X = np.zeros((cols, B.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        X[pc] = R[i, cols:]
    return X[:, 0] if vector else X


def inverse(F: PrimeField, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    X = solve(F, A, F.eye(n))
    if X is None or rank(F, A) < n:
        raise ValueError("matrix is singular")
    return X


def column_basis(F: PrimeField, V: np.ndarray) -> np.ndarray:
    """Canonical basis of the column span of ``V``.

    The result is the transpose of the RREF of ``V^T``: it depends only on
    the subspace, and has the identity at its pivot rows.
    """
    V = np.asarray(V, dtype=np.int64)
    if V.shape[1] == 0:
        return np.zeros((V.shape[0], 0), dtype=np.int64)
    R, pivots = _row_reduce(F, V.T)
    return np.ascontiguousarray(R[: len(pivots)].T)


def pivot_rows(B: np.ndarray) -> list[int]:
    """Pivot rows of a canonical column basis produced by ``column_basis``."""
    rows = []
    for j in range(B.shape[1]):
        rows.append(int(np.flatnonzero(B[:, j])[0]))
    return rows


def coordinates(F: PrimeField, B: np.ndarray, v: np.ndarray) -> np.ndarray | None:
    """Coordinates of ``v`` (vector or matrix of columns) in the basis ``B``."""
    return solve(F, B, v)


def in_span(F: PrimeField, B: np.ndarray, v: np.ndarray) -> bool:
    if B.shape[1] == 0:
        return not np.any(np.mod(v, F.p))
    return solve(F, B, v) is not None


def complement_units(B: np.ndarray) -> list[int]:
    """Indices of standard basis vectors completing a canonical basis ``B``."""
    piv = set(pivot_rows(B))
    return [i for i in range(B.shape[0]) if i not in piv]


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


# -- polynomials (coefficient lists, lowest degree first) --------------------

def charpoly(F: PrimeField, A: np.ndarray) -> list[int]:
    """Characteristic polynomial ``det(xI - A)`` via Hessenberg reduction."""
    p = F.p
    n = A.shape[0]
    H = np.mod(np.array(A, dtype=object), p)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i, m - 1] % p), None)
        if piv is None:
            continue
        if piv != m:
            H[[m, piv]] = H[[piv, m]]
            H[:, [m, piv]] = H[:, [piv, m]]
        inv = pow(int(H[m, m - 1]), -1, p)
        for i in range(m + 1, n):
            t = (H[i, m - 1] * inv) % p
            if t:
                H[i] = (H[i] - t * H[m]) % p
                H[:, m] = (H[:, m] + t * H[:, i]) % p
    polys: list[list[int]] = [[1]]
    for m in range(1, n + 1):
        h = H[m - 1, m - 1]
        prev = polys[m - 1]
        cur = [0] + prev[:]
        for i, c in enumerate(prev):
            cur[i] = (cur[i] - h * c) % p
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = (prod * H[i, i - 1]) % p
            coeff = (H[i - 1, m - 1] * prod) % p
            if coeff:
                for j, c in enumerate(polys[i - 1]):
                    cur[j] = (cur[j] - coeff * c) % p
        polys.append([int(c) for c in cur])
    return polys[n]


def polyval_matrix(F: PrimeField, coeffs: list[int], A: np.ndarray) -> np.ndarray:
    out = F.zeros(*A.shape)
    I = F.eye(A.shape[0])
    for c in reversed(coeffs):
        out = np.mod(F.matmul(out, A) + c * I, F.p)
    return out


def factor_poly(F: PrimeField, coeffs: list[int]) -> list[tuple[list[int], int]]:
    """Monic irreducible factors over F_p with multiplicities, degree-sorted."""
    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_factor

    high_first = [ZZ(int(c) % F.p) for c in reversed(coeffs)]
    _, factors = gf_factor(high_first, F.p, ZZ)
    out = [([int(c) % F.p for c in reversed(f)], int(k)) for f, k in factors]
    out.sort(key=lambda fk: (len(fk[0]), fk[0]))
    return out
