"""Dense linear algebra over mpq (exact) or mpc (tolerance driven).

Matrices are lists of rows. Elimination is Gauss-Jordan with partial
pivoting; for exact input the first nonzero entry is the pivot, for complex
input the largest one, and entries below ``zero_threshold * max|A|`` count as
zero.
"""
from __future__ import annotations

from .errors import Inconsistent
from .scalar import DEFAULT_POLICY, ONE, ZERO, as_scalar, is_exact


def _all_exact(rows):
    return all(is_exact(x) for row in rows for x in row)


def rref(A, policy=DEFAULT_POLICY):
    """Reduced row echelon form and pivot columns."""
    R = [[as_scalar(x) for x in row] for row in A]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    exact = _all_exact(R)
    if exact:
        tol = None
    else:
        scale = max((abs(x) for row in R for x in row), default=0)
        tol = policy.zero_threshold * scale
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        if exact:
            p = next((i for i in range(r, m) if R[i][c] != 0), None)
        else:
            p = max(range(r, m), key=lambda i: abs(R[i][c]))
            if abs(R[p][c]) <= tol:
                p = None
        if p is None:
            if not exact:
                for i in range(r, m):
                    R[i][c] = ZERO
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        R[r][c] = ONE
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                R[i] = [a - f * b for a, b in zip(Ri, Rr)]
                R[i][c] = ZERO
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, policy=DEFAULT_POLICY):
    return len(rref(A, policy)[1])


def kernel(A, ncols=None, policy=DEFAULT_POLICY):
    """Basis of the right kernel ``{v : A v = 0}``."""
    if not A:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    n = len(A[0])
    R, pivots = rref(A, policy)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][f]
        basis.append(v)
    return basis


def mat_vec(A, v):
    return [sum((a * b for a, b in zip(row, v)), ZERO) for row in A]


def solve(A, b, policy=DEFAULT_POLICY):
    """One solution of ``A x = b`` (free variables set to zero).

    Raises `Inconsistent` if the system has no solution, judged exactly for
    rational data and by the residual for complex data.
    """
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug, policy)
    if n in pivots:
        raise Inconsistent("linear system has no solution")
    x = [ZERO] * n
    for r, pc in enumerate(pivots):
        x[pc] = R[r][n]
    if not (_all_exact(A) and all(is_exact(v) for v in b)):
        res = max((abs(a - c) for a, c in zip(mat_vec(A, x), b)), default=0)
        scale = max([abs(v) for v in b] + [abs(a) for row in A for a in row] + [1])
        xs = max([abs(v) for v in x] + [1])
        if res > policy.zero_threshold * scale * xs:
            raise Inconsistent(f"residual {float(res):.3e} above tolerance")
    return x


def cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def det3(M):
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
