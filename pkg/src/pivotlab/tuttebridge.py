"""Subspaces of F^V, the matroids of their minimal supports, and the lift to K^V.

A :class:`TutteChainGroup` is an ordinary subspace of F^V (standard dot
product).  Its matroid has rank function r(X) = |X| - dim(N x X), and its lift
spans the top-embedded chains of N with the bottom-embedded chains of the
orthogonal complement, giving a Lagrangian chain-group under the symmetric form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import caps, linalg
from .chaingroup import ChainGroup, FormKind
from .errors import GroundMismatch, NotAMatroid, ParseError, UnknownLabel
from .fmatrix import label_list, parse_blocks, parse_entries
from .gf import GF, field as _field
from .widths import CutFunction, WidthReport, optimal_width, trivial_tree


@dataclass(frozen=True, eq=False)
class TutteChainGroup:
    ground: tuple
    field: GF
    basis: np.ndarray

    def __post_init__(self):
        ground = tuple(str(v) for v in self.ground)
        if len(set(ground)) != len(ground):
            raise ValueError("duplicate labels in ground set")
        F = self.field if isinstance(self.field, GF) else _field(int(self.field))
        B = np.array(self.basis, dtype=np.int64)
        if B.ndim != 2:
            B = B.reshape(-1, len(ground)) if ground else np.zeros((0, 0), dtype=np.int64)
        if B.shape[1] != len(ground):
            raise GroundMismatch(f"basis has {B.shape[1]} columns, expected {len(ground)}")
        if B.size and (B.min() < 0 or B.max() >= F.q):
            raise ValueError(f"entries outside GF({F.q})")
        B = linalg.rref(F, B)[0] if B.shape[0] else B
        B.flags.writeable = False
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "field", F)
        object.__setattr__(self, "basis", B)

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def indices(self, X) -> list[int]:
        pos = {v: i for i, v in enumerate(self.ground)}
        out = set()
        for x in label_list(X):
            if x not in pos:
                raise UnknownLabel(f"unknown label {x!r}")
            out.add(pos[x])
        return sorted(out)

    def reorder(self, ground) -> "TutteChainGroup":
        idx = [self.ground.index(str(v)) for v in ground]
        return TutteChainGroup(tuple(str(v) for v in ground), self.field, self.basis[:, idx])

    def relabel(self, mapping) -> "TutteChainGroup":
        return TutteChainGroup(tuple(str(mapping[v]) for v in self.ground), self.field, self.basis)

    def key(self):
        return (self.ground, self.field.q, self.basis.shape, self.basis.tobytes())

    def __eq__(self, other):
        if not isinstance(other, TutteChainGroup):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"TutteChainGroup(GF({self.field.q}), {list(self.ground)}, dim={self.dim})"


def tutte_span(ground, field, vectors) -> TutteChainGroup:
    ground = label_list(ground)
    B = np.array(vectors, dtype=np.int64)
    B = np.zeros((0, len(ground)), dtype=np.int64) if B.size == 0 else B.reshape(-1, len(ground))
    return TutteChainGroup(tuple(ground), field, B)


def tutte_orthogonal(N: TutteChainGroup) -> TutteChainGroup:
    if N.dim == 0:
        return TutteChainGroup(N.ground, N.field, np.eye(N.n, dtype=np.int64))
    return TutteChainGroup(N.ground, N.field, linalg.nullspace(N.field, N.basis, N.n))


def tutte_restrict(N: TutteChainGroup, T) -> TutteChainGroup:
    idx = N.indices(T)
    return TutteChainGroup(tuple(N.ground[i] for i in idx), N.field, N.basis[:, idx])


def tutte_times(N: TutteChainGroup, T) -> TutteChainGroup:
    idx = N.indices(T)
    rest = [i for i in range(N.n) if i not in set(idx)]
    B = N.basis
    if rest and N.dim:
        K = linalg.left_nullspace(N.field, B[:, rest])
        B = linalg.matmul(N.field, K, B) if K.shape[0] else B[:0]
    return TutteChainGroup(tuple(N.ground[i] for i in idx), N.field, B[:, idx])


def tutte_minor(N: TutteChainGroup, S, T) -> TutteChainGroup:
    """(N x S) . T for T <= S."""
    if not set(label_list(T)) <= set(label_list(S)):
        raise ValueError("T must be a subset of S")
    return tutte_restrict(tutte_times(N, S), T)


def lift(N: TutteChainGroup) -> ChainGroup:
    """Chains f-on-top for f in N together with g-on-bottom for g in the complement."""
    perp = tutte_orthogonal(N)
    n = N.n
    rows = []
    for f in N.basis:
        r = np.zeros(2 * n, dtype=np.int64)
        r[0::2] = f
        rows.append(r)
    for g in perp.basis:
        r = np.zeros(2 * n, dtype=np.int64)
        r[1::2] = g
        rows.append(r)
    basis = np.array(rows, dtype=np.int64).reshape(len(rows), 2 * n)
    return ChainGroup(N.ground, N.field, FormKind.PLUS, basis)


# --- matroids ---------------------------------------------------------------------

def _popcounts(n: int) -> np.ndarray:
    m = np.arange(1 << n)
    c = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        c += (m >> i) & 1
    return c


def rank_axioms_hold(rank: np.ndarray, n: int) -> bool:
    """0 <= r(X) <= |X|, and for all X, e, f: r(X) <= r(X+e) and local submodularity."""
    size = _popcounts(n)
    if np.any(rank < 0) or np.any(rank > size):
        return False
    m = np.arange(1 << n)
    for e in range(n):
        be = 1 << e
        no_e = m[(m & be) == 0]
        if np.any(rank[no_e] > rank[no_e | be]) or np.any(rank[no_e | be] > rank[no_e] + 1):
            return False
        for f in range(e + 1, n):
            bf = 1 << f
            X = no_e[(no_e & bf) == 0]
            if np.any(rank[X | be] + rank[X | bf] < rank[X | be | bf] + rank[X]):
                return False
    return True


@dataclass(frozen=True, eq=False)
class Matroid:
    ground: tuple
    rank: np.ndarray

    def __post_init__(self):
        ground = tuple(str(v) for v in self.ground)
        r = np.array(self.rank, dtype=np.int64).reshape(1 << len(ground))
        if not rank_axioms_hold(r, len(ground)):
            raise NotAMatroid("rank table violates the matroid rank axioms")
        r.flags.writeable = False
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "rank", r)

    @property
    def n(self) -> int:
        return len(self.ground)

    def mask(self, labels) -> int:
        pos = {v: i for i, v in enumerate(self.ground)}
        m = 0
        for x in label_list(labels):
            if x not in pos:
                raise UnknownLabel(f"unknown label {x!r}")
            m |= 1 << pos[x]
        return m

    def labels(self, m: int) -> tuple:
        return tuple(v for i, v in enumerate(self.ground) if m >> i & 1)

    def rank_of(self, labels) -> int:
        return int(self.rank[self.mask(labels)])

    @property
    def full_rank(self) -> int:
        return int(self.rank[-1])

    def circuits(self) -> list[tuple]:
        """Minimal dependent sets, ordered by (size, position)."""
        size = _popcounts(self.n)
        dep = self.rank < size
        out = []
        for m in np.flatnonzero(dep).tolist():
            if all(not dep[m ^ (1 << i)] for i in range(self.n) if m >> i & 1):
                out.append(m)
        out.sort(key=lambda m: (bin(m).count("1"), [i for i in range(self.n) if m >> i & 1]))
        return [self.labels(m) for m in out]

    def __eq__(self, other):
        if not isinstance(other, Matroid):
            return NotImplemented
        return self.ground == other.ground and np.array_equal(self.rank, other.rank)

    def __hash__(self):
        return hash((self.ground, self.rank.tobytes()))


def matroid_from(N: TutteChainGroup, max_n: int | None = None) -> Matroid:
    """Rank function r(X) = |X| - dim(N x X)."""
    caps.check(N.n, caps.MATROID, max_n)
    n, F = N.n, N.field
    rank = np.zeros(1 << n, dtype=np.int64)
    for m in range(1 << n):
        inside = [i for i in range(n) if m >> i & 1]
        outside = [i for i in range(n) if not m >> i & 1]
        # dim(N x X) = dim N - rank(N restricted to the complement)
        r_out = linalg.rank(F, N.basis[:, outside]) if outside and N.dim else 0
        rank[m] = len(inside) - (N.dim - r_out)
    return Matroid(N.ground, rank)


def supports(N: TutteChainGroup) -> list[tuple]:
    """Minimal nonempty supports of N by enumerating every vector (small N only)."""
    F = N.field
    sups = set()
    for coeffs in itertools.product(range(F.q), repeat=N.dim):
        if not any(coeffs):
            continue
        v = linalg.matmul(F, np.array([coeffs], dtype=np.int64), N.basis)[0]
        sups.add(sum(1 << i for i in np.flatnonzero(v).tolist()))
    minimal = [s for s in sups if not any(t != s and t & s == t for t in sups)]
    minimal.sort(key=lambda m: (bin(m).count("1"), [i for i in range(N.n) if m >> i & 1]))
    return [tuple(N.ground[i] for i in range(N.n) if m >> i & 1) for m in minimal]


def matroid_connectivity(M: Matroid, X) -> int:
    """r(X) + r(E - X) - r(E) + 1."""
    m = M.mask(X)
    full = (1 << M.n) - 1
    return int(M.rank[m] + M.rank[full ^ m] - M.rank[full] + 1)


def matroid_connectivity_function(M: Matroid) -> CutFunction:
    full = (1 << M.n) - 1
    r = M.rank
    return CutFunction(M.ground, lambda m: int(r[m] + r[full ^ m] - r[full] + 1))


def matroid_branch_width(M: Matroid, max_n: int | None = None) -> WidthReport:
    """Exact branch-width; one element or none gives 1 by convention."""
    caps.check(M.n, caps.WIDTH, max_n)
    if M.n <= 1:
        return WidthReport(1, {}, trivial_tree(M.ground), M.ground)
    return optimal_width(matroid_connectivity_function(M), max_n)


# --- minor search -------------------------------------------------------------------

def tutte_isomorphic(N1: TutteChainGroup, N2: TutteChainGroup) -> dict | None:
    if N1.field != N2.field:
        raise GroundMismatch("chain-groups live over different fields")
    if N1.n != N2.n or N1.dim != N2.dim:
        return None
    for perm in itertools.permutations(range(N2.n)):
        order = [N2.ground[j] for j in perm]
        if N2.reorder(order).relabel(dict(zip(order, N1.ground))) == N1:
            return {N1.ground[i]: order[i] for i in range(N1.n)}
    return None


def tutte_minor_embedding(N1: TutteChainGroup, N2: TutteChainGroup, max_n: int | None = None):
    """(S, T, bijection) with N1 isomorphic to (N2 x S) . T, or None."""
    caps.check(N2.n, caps.MINOR_SEARCH, max_n)
    if N1.n > N2.n:
        return None
    for keep in itertools.combinations(N2.ground, N1.n):
        removed = [v for v in N2.ground if v not in keep]
        for k in range(len(removed) + 1):
            for R in itertools.combinations(removed, k):
                S = [v for v in N2.ground if v not in R]
                Nm = tutte_minor(N2, S, keep)
                if Nm.dim != N1.dim:
                    continue
                mu = tutte_isomorphic(N1, Nm)
                if mu is not None:
                    return tuple(S), tuple(keep), mu
    return None


# --- text format -------------------------------------------------------------------

def parse_tutte(text: str) -> TutteChainGroup:
    """Matrix file layout with ``kind tutte``; each row is a basis vector."""
    from .errors import NotPrimePower, UnsupportedOrder
    q, kind, labels, rows = parse_blocks(text, allowed_kinds=("tutte",))
    try:
        F = _field(q)
    except (NotPrimePower, UnsupportedOrder) as exc:
        raise ParseError(str(exc)) from None
    vecs = [parse_entries(F, vals, len(labels), lineno) for lineno, _, vals in rows]
    return TutteChainGroup(tuple(labels), F,
                           np.array(vecs, dtype=np.int64).reshape(len(vecs), len(labels)))


def format_tutte(N: TutteChainGroup) -> str:
    lines = [f"field {N.field.q}", "kind tutte", "elements " + " ".join(N.ground)]
    for i, row in enumerate(N.basis, start=1):
        lines.append(f"row r{i}: " + " ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"
