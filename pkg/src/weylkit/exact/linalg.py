"""Dense exact linear algebra over Q or Q(zeta_m).

Matrices are lists of rows.  Everything is plain Gaussian elimination; the
sizes met in this package are small enough that nothing cleverer pays off.
"""

from __future__ import annotations

from typing import Sequence

from .scalars import ONE, ZERO, Cyclotomic, qq


def _s(c):
    return c if isinstance(c, Cyclotomic) else qq(c)


def matrix(rows) -> list:
    return [[_s(c) for c in r] for r in rows]


def identity(n: int) -> list:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> list:
    return [[ZERO] * c for _ in range(r)]


def matmul(A, B) -> list:
    if not A:
        return []
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [ZERO] * n
        for k, a in enumerate(row):
            if a == 0:
                continue
            for j, b in enumerate(B[k]):
                if b != 0:
                    acc[j] = acc[j] + a * b
        out.append(acc)
    return out


def matvec(A, v) -> list:
    out = []
    for row in A:
        s = ZERO
        for a, b in zip(row, v):
            if a != 0 and b != 0:
                s = s + a * b
        out.append(s)
    return out


def transpose(A) -> list:
    return [list(r) for r in zip(*A)] if A else []


def mat_eq(A, B) -> bool:
    return len(A) == len(B) and all(
        len(r) == len(s) and all(a == b for a, b in zip(r, s)) for r, s in zip(A, B))


def trace(A):
    s = ZERO
    for i in range(len(A)):
        s = s + A[i][i]
    return s


def rref(A, ncols: int | None = None):
    """Row reduce a copy of A; return (R, pivot_columns)."""
    M = [list(r) for r in A]
    if not M:
        return M, []
    cols = ncols if ncols is not None else len(M[0])
    pivots = []
    r = 0
    for c in range(cols):
        p = None
        for i in range(r, len(M)):
            if M[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = ONE / M[r][c]
        M[r] = [v * inv if v != 0 else v for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [a - f * b if b != 0 else a for a, b in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def nullspace(A, ncols: int | None = None) -> list:
    """Basis of {v : A v = 0} as a list of vectors."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    R, piv = rref(A, n)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve(A, b):
    """One solution x of A x = b, or None if inconsistent."""
    n = len(A[0]) if A else 0
    aug = [list(r) + [_s(bi)] for r, bi in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [ZERO] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


def solve_many(A, B):
    """Solve A X = B column by column; B is a list of right-hand sides."""
    n = len(A[0]) if A else 0
    k = len(B)
    aug = [list(r) + [B[j][i] for j in range(k)] for i, r in enumerate(A)]
    R, piv = rref(aug, n)
    sols = []
    for j in range(k):
        col = n + j
        for i in range(len(piv), len(R)):
            if R[i][col] != 0:
                sols.append(None)
                break
        else:
            x = [ZERO] * n
            for i, p in enumerate(piv):
                x[p] = R[i][col]
            sols.append(x)
    return sols


def inverse(A) -> list:
    n = len(A)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def det(A):
    M = [list(r) for r in A]
    n = len(M)
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d = d * M[c][c]
        inv = ONE / M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def row_space_basis(vectors: Sequence) -> list:
    """Echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    R, piv = rref(vectors)
    return R[:len(piv)]


def in_span(basis_rref, v) -> bool:
    """Whether v lies in the row span (basis given by ``row_space_basis``)."""
    return rank(list(basis_rref) + [list(v)]) == len(basis_rref)


def char_poly_trace_powers(A, k: int) -> list:
    """[tr(A^0), ..., tr(A^k)]."""
    out = []
    P = identity(len(A))
    for _ in range(k + 1):
        out.append(trace(P))
        P = matmul(P, A)
    return out


def kernel_of_maps(maps: Sequence, dim: int) -> list:
    """Common kernel of several matrices acting on a space of dimension ``dim``."""
    rows = [r for M in maps for r in M]
    return nullspace(rows, dim) if rows else nullspace([], dim)
