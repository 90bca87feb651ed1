"""Boundaried chain-groups, their corank-preserving minors, sums and connection types.

A boundary of an isotropic N is an ordered basis of the quotient N^perp / N.
Representatives are stored reduced modulo N, so equal cosets give equal
arrays and boundaried chain-groups compare by array equality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .chaingroup import (Chain, ChainGroup, _cols, gram, is_isotropic, minor,
                         orthogonal, times)
from .errors import (BadBoundary, CorankDrop, GroundMismatch,
                     InconsistentConnectionType, InternalConsistencyFailure,
                     NotIsotropic)
from .fmatrix import label_list


def _reduce_rows(N: ChainGroup, rows: np.ndarray) -> np.ndarray:
    if N.dim == 0:
        return np.array(rows, dtype=np.int64)
    piv = [int(np.flatnonzero(r)[0]) for r in N.basis]
    return np.array([linalg.reduce_mod(N.field, N.basis, piv, r) for r in rows],
                    dtype=np.int64).reshape(len(rows), 2 * N.n)


@dataclass(frozen=True, eq=False)
class BoundariedChainGroup:
    N: ChainGroup
    reps: np.ndarray

    def __post_init__(self):
        N = self.N
        if not is_isotropic(N):
            raise NotIsotropic("a boundaried chain-group needs an isotropic chain-group")
        R = np.array(self.reps, dtype=np.int64).reshape(-1, 2 * N.n) if N.n else \
            np.zeros((len(self.reps), 0), dtype=np.int64)
        want = 2 * (N.n - N.dim)
        if R.shape[0] != want:
            raise BadBoundary(f"boundary needs {want} representatives, got {R.shape[0]}")
        if R.shape[0]:
            F = N.field
            vals = linalg.matmul(F, linalg.matmul(F, R, gram(F, N.form, N.n)), N.basis.T) \
                if N.dim else np.zeros(0)
            if np.any(vals):
                raise BadBoundary("boundary representatives must be orthogonal to N")
            if linalg.rank(F, np.concatenate([N.basis, R])) != N.dim + R.shape[0]:
                raise BadBoundary("boundary representatives are dependent modulo N")
        R = _reduce_rows(N, R)
        R.flags.writeable = False
        object.__setattr__(self, "reps", R)

    @property
    def ground(self) -> tuple:
        return self.N.ground

    @property
    def size(self) -> int:
        return self.reps.shape[0]

    def chains(self) -> list[Chain]:
        return [Chain(self.N.ground, self.N.field, r) for r in self.reps]

    def key(self):
        return (self.N.key(), self.reps.shape, self.reps.tobytes())

    def __eq__(self, other):
        if not isinstance(other, BoundariedChainGroup):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"BoundariedChainGroup({self.N!r}, |B|={self.size})"


def canonical_boundary(N: ChainGroup) -> np.ndarray:
    """Echelon basis of N^perp reduced modulo N, in reduced row echelon form."""
    perp = orthogonal(N)
    R = _reduce_rows(N, perp.basis)
    if R.shape[0] == 0 or R.shape[1] == 0:
        return np.zeros((0, 2 * N.n), dtype=np.int64)
    return linalg.rref(N.field, R)[0]


def make_boundaried(N: ChainGroup, reps=None) -> BoundariedChainGroup:
    if not is_isotropic(N):
        raise NotIsotropic("a boundaried chain-group needs an isotropic chain-group")
    if reps is None:
        return BoundariedChainGroup(N, canonical_boundary(N))
    rows = [r.vec if isinstance(r, Chain) else np.asarray(r, dtype=np.int64) for r in reps]
    if rows and isinstance(reps[0], Chain) and reps[0].ground != N.ground:
        raise GroundMismatch("representatives must live on the ground of N")
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), 2 * N.n)
    return BoundariedChainGroup(N, arr)


def _normalize(N: ChainGroup, f: np.ndarray, slots: list[int]) -> np.ndarray:
    """Subtract elements of N from f until every coordinate in ``slots`` is zero.

    Coordinates are handled in order; at each one the first echelon row of the
    still-admissible part of N with a nonzero entry there is used, and the
    admissible part then shrinks to the chains vanishing at that coordinate.
    """
    F = N.field
    f = f.copy()
    cur = N.basis
    for c in slots:
        if f[c]:
            nz = np.flatnonzero(cur[:, c]) if cur.shape[0] else np.array([], dtype=int)
            if nz.size == 0:
                raise CorankDrop("representative cannot be normalized on the removed set")
            h = cur[nz[0]]
            f = F.sub_table[f, F.mul_table[F.div(int(f[c]), int(h[c])), h]]
        if cur.shape[0]:
            K = linalg.left_nullspace(F, cur[:, [c]])
            cur = linalg.rref(F, linalg.matmul(F, K, cur))[0] if K.shape[0] else cur[:0]
    return f


def boundaried_minor(P: BoundariedChainGroup, X=(), Y=()) -> BoundariedChainGroup:
    """Delete X and contract Y, keeping the corank and carrying the boundary along."""
    N = P.N
    Xl, Yl = set(label_list(X)), set(label_list(Y))
    N.indices(Xl | Yl)
    if Xl & Yl:
        raise ValueError("deleted and contracted sets must be disjoint")
    Nm = minor(N, Yl, Xl)
    if Nm.n - Nm.dim != N.n - N.dim:
        raise CorankDrop(f"corank changes from {N.n - N.dim} to {Nm.n - Nm.dim}")
    slots = []
    for i, v in enumerate(N.ground):
        if v in Xl:
            slots.append(2 * i + 1)
        elif v in Yl:
            slots.append(2 * i)
    keep = [i for i, v in enumerate(N.ground) if v not in Xl | Yl]
    reps = [_normalize(N, r, slots)[_cols(keep)] for r in P.reps]
    return BoundariedChainGroup(Nm, np.array(reps, dtype=np.int64).reshape(len(reps), 2 * len(keep)))


def boundary_delete(P: BoundariedChainGroup, X) -> BoundariedChainGroup:
    return boundaried_minor(P, X, ())


def boundary_contract(P: BoundariedChainGroup, X) -> BoundariedChainGroup:
    return boundaried_minor(P, (), X)


# --- sums -----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConnectionType:
    """C_0 as an echelon basis in F^{k1} x F^{k2}; C_s as offsets reduced mod C_0.

    An offset of None records an empty C_s.
    """

    k1: int
    k2: int
    C0: np.ndarray
    offsets: tuple

    def key(self):
        offs = tuple(None if o is None else o.tobytes() for o in self.offsets)
        return (self.k1, self.k2, self.C0.shape, self.C0.tobytes(), offs)

    def __eq__(self, other):
        if not isinstance(other, ConnectionType):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def coset(self, s: int):
        """(offset, C0 basis) of C_s for s >= 1, or None if it is empty."""
        off = self.offsets[s - 1]
        return None if off is None else (off, self.C0)

    def to_dict(self) -> dict:
        return {"k1": self.k1, "k2": self.k2, "C0": self.C0.tolist(),
                "offsets": [None if o is None else o.tolist() for o in self.offsets]}


def _embed(rows: np.ndarray, src_ground, dst_ground) -> np.ndarray:
    pos = {v: i for i, v in enumerate(dst_ground)}
    out = np.zeros((rows.shape[0], 2 * len(dst_ground)), dtype=np.int64)
    for i, v in enumerate(src_ground):
        out[:, 2 * pos[v]:2 * pos[v] + 2] = rows[:, 2 * i:2 * i + 2]
    return out


def sum_decompose(P: BoundariedChainGroup, V1):
    """Split P along V1: parts N x V1 and N x V2 with canonical boundaries, plus the connection type."""
    N, F = P.N, P.N.field
    idx = N.indices(V1)
    V1l = [N.ground[i] for i in idx]
    V2l = [v for v in N.ground if v not in set(V1l)]
    P1 = make_boundaried(times(N, V1l))
    P2 = make_boundaried(times(N, V2l))
    E1 = _embed(P1.reps, V1l, N.ground)
    E2 = _embed(P2.reps, V2l, N.ground)
    k1, k2 = P1.size, P2.size
    A = np.concatenate([E1, E2, N.basis]).reshape(k1 + k2 + N.dim, 2 * N.n)
    hom = linalg.left_nullspace(F, A) if A.shape[0] else np.zeros((0, 0), dtype=np.int64)
    proj = hom[:, :k1 + k2] if hom.size else np.zeros((0, k1 + k2), dtype=np.int64)
    C0 = linalg.rref(F, proj)[0] if proj.shape[0] and proj.shape[1] else \
        np.zeros((0, k1 + k2), dtype=np.int64)
    C0 = C0[np.any(C0, axis=1)] if C0.shape[0] else C0
    piv = [int(np.flatnonzero(r)[0]) for r in C0]
    offsets = []
    for b in P.reps:
        if A.shape[0] == 0:
            sol = np.zeros(0, dtype=np.int64) if not b.any() else None
        else:
            sol = linalg.solve_left(F, A, b)
        if sol is None:
            offsets.append(None)
            continue
        off = sol[:k1 + k2]
        off = linalg.reduce_mod(F, C0, piv, off) if C0.shape[0] else off
        off.flags.writeable = False
        offsets.append(off)
    C0.flags.writeable = False
    return P1, P2, ConnectionType(k1, k2, C0, tuple(offsets))


def sum_reconstruct(P1: BoundariedChainGroup, P2: BoundariedChainGroup,
                    ct: ConnectionType, ground=None) -> BoundariedChainGroup:
    """The unique sum of P1 and P2 with connection type ``ct``."""
    if set(P1.ground) & set(P2.ground):
        raise GroundMismatch("parts of a sum must have disjoint ground sets")
    if P1.N.field != P2.N.field or P1.N.form != P2.N.form:
        raise GroundMismatch("parts of a sum must share field and form")
    if (ct.k1, ct.k2) != (P1.size, P2.size):
        raise InconsistentConnectionType("connection type does not match the boundary sizes")
    ground = tuple(ground) if ground is not None else P1.ground + P2.ground
    if sorted(ground) != sorted(P1.ground + P2.ground):
        raise GroundMismatch("ground order must list exactly the elements of both parts")
    F = P1.N.field
    E1 = _embed(P1.reps, P1.ground, ground)
    E2 = _embed(P2.reps, P2.ground, ground)
    E = np.concatenate([E1, E2]).reshape(ct.k1 + ct.k2, 2 * len(ground))

    def lift(x):
        if E.shape[0] == 0:
            return np.zeros(2 * len(ground), dtype=np.int64)
        return linalg.matmul(F, np.asarray(x, dtype=np.int64).reshape(1, -1), E)[0]

    rows = [_embed(P1.N.basis, P1.ground, ground), _embed(P2.N.basis, P2.ground, ground)]
    rows += [lift(x).reshape(1, -1) for x in ct.C0]
    basis = np.concatenate(rows, axis=0)
    N = ChainGroup(ground, F, P1.N.form, basis)
    reps = []
    for off in ct.offsets:
        if off is None:
            raise InconsistentConnectionType("an empty C_s leaves no boundary representative")
        reps.append(lift(off))
    try:
        P = BoundariedChainGroup(N, np.array(reps, dtype=np.int64).reshape(len(reps), 2 * len(ground)))
    except (BadBoundary, NotIsotropic) as exc:
        raise InconsistentConnectionType(str(exc)) from None
    if times(N, P1.ground) != P1.N.reorder(times(N, P1.ground).ground) or \
            times(N, P2.ground) != P2.N.reorder(times(N, P2.ground).ground):
        raise InconsistentConnectionType("reconstructed sum does not restrict to the given parts")
    return P


def check_cosets(ct: ConnectionType) -> bool:
    """Each nonempty C_s is offset + C_0 with the offset reduced modulo C_0."""
    piv = [int(np.flatnonzero(r)[0]) for r in ct.C0]
    return all(o is None or not any(o[c] for c in piv) for o in ct.offsets)


def roundtrip(P: BoundariedChainGroup, V1) -> bool:
    P1, P2, ct = sum_decompose(P, V1)
    Q = sum_reconstruct(P1, P2, ct, P.ground)
    if Q != P:
        raise InternalConsistencyFailure("reconstruction does not return the original sum")
    return True
