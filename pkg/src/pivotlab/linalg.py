"""Dense Gaussian elimination over a :class:`~pivotlab.gf.GF`.

Arrays hold element indices (``int64``); all arithmetic goes through the
field's lookup tables, so one code path serves prime and extension fields.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularPivotBlock
from .gf import GF


def asarray(A, shape=None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if shape is not None:
        A = A.reshape(shape)
    return A


def rref(F: GF, A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    mul, sub, inv = F.mul_table, F.sub_table, F.inv_table
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        if R[r, c] != 1:
            R[r] = mul[inv[R[r, c]], R[r]]
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            R[rows] = sub[R[rows], mul[col[rows][:, None], R[r][None, :]]]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(F: GF, A) -> int:
    A = asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def det(F: GF, A) -> int:
    """Determinant; the empty matrix has determinant 1."""
    R = np.array(A, dtype=np.int64, copy=True)
    n = R.shape[0]
    if R.shape != (n, n):
        raise ValueError("det needs a square matrix")
    mul, sub, inv = F.mul_table, F.sub_table, F.inv_table
    d = 1
    for c in range(n):
        nz = np.flatnonzero(R[c:, c])
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            R[[c, i]] = R[[i, c]]
            d = int(F.neg_table[d])
        piv = int(R[c, c])
        d = int(mul[d, piv])
        below = R[c + 1:, c]
        rows = np.flatnonzero(below)
        if rows.size:
            factors = mul[below[rows], inv[piv]]
            R[c + 1 + rows] = sub[R[c + 1 + rows], mul[factors[:, None], R[c][None, :]]]
    return d


def inverse(F: GF, A) -> np.ndarray:
    A = asarray(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.concatenate([A, identity(n)], axis=1)
    R, piv = rref(F, aug)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise SingularPivotBlock("matrix is singular")
    return R[:, n:]


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(F: GF, A, B) -> np.ndarray:
    A, B = asarray(A), asarray(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if F.k == 1:
        return (A @ B) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for t in range(A.shape[1]):
        out = F.add_table[out, F.mul_table[A[:, t][:, None], B[t][None, :]]]
    return out


def add(F: GF, A, B) -> np.ndarray:
    return F.add_table[asarray(A), asarray(B)]


def sub(F: GF, A, B) -> np.ndarray:
    return F.sub_table[asarray(A), asarray(B)]


def scale(F: GF, c: int, A) -> np.ndarray:
    return F.mul_table[c, asarray(A)]


def neg(F: GF, A) -> np.ndarray:
    return F.neg_table[asarray(A)]


def nullspace(F: GF, A, ncols: int | None = None) -> np.ndarray:
    """Rows spanning ``{x : A @ x == 0}``, in canonical (RREF) form."""
    A = asarray(A)
    if ncols is None:
        ncols = A.shape[1]
    if A.shape[0] == 0:
        return identity(ncols)
    R, piv = rref(F, A)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for r, c in enumerate(piv):
            out[k, c] = F.neg_table[R[r, f]]
    if out.shape[0]:
        out = rref(F, out)[0]
    return out


def left_nullspace(F: GF, A) -> np.ndarray:
    """Rows spanning ``{y : y @ A == 0}``."""
    A = asarray(A)
    return nullspace(F, A.T, ncols=A.shape[0])


def solve(F: GF, A, b) -> np.ndarray | None:
    """One solution of ``A @ x == b`` (free variables zero) or None."""
    A, b = asarray(A), asarray(b)
    m, n = A.shape
    if m == 0:
        return np.zeros(n, dtype=np.int64)
    R, piv = rref(F, np.concatenate([A, b.reshape(m, 1)], axis=1))
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, n]
    return x


def solve_left(F: GF, A, b) -> np.ndarray | None:
    """One solution of ``x @ A == b`` or None."""
    A = asarray(A)
    return solve(F, A.T, b)


def row_space_contains(F: GF, basis, v) -> bool:
    basis, v = asarray(basis), asarray(v)
    if basis.shape[0] == 0:
        return not v.any()
    return solve_left(F, basis, v) is not None


def reduce_mod(F: GF, R: np.ndarray, piv: list[int], v) -> np.ndarray:
    """Reduce ``v`` against an RREF basis so its pivot entries vanish.

    The result is the unique canonical representative of ``v + rowspace(R)``.
    """
    v = np.array(v, dtype=np.int64, copy=True)
    for r, c in enumerate(piv):
        if v[c]:
            v = F.sub_table[v, F.mul_table[v[c], R[r]]]
    return v
