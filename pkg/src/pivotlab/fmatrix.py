"""Labeled square matrices over GF(q): pivots, Schur complements, negation.

A :class:`LabeledMatrix` is indexed by an ordered ground set of text labels and
optionally tagged symmetric or skew-symmetric.  Skew-symmetric matrices have a
zero diagonal even in characteristic 2.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import caps, linalg
from .errors import (GroundMismatch, KindMismatch, KindViolation, ParseError,
                     SingularPivotBlock, UnknownLabel)
from .gf import GF, field as _field


class MatrixKind(enum.Enum):
    SYMMETRIC = "symmetric"
    SKEW = "skew"

    @classmethod
    def parse(cls, value) -> "MatrixKind | None":
        if value is None or isinstance(value, cls):
            return value
        v = str(value).lower()
        if v in ("skew", "skew-symmetric", "skewsymmetric"):
            return cls.SKEW
        if v in ("symmetric", "sym"):
            return cls.SYMMETRIC
        raise ValueError(f"unknown matrix kind {value!r}")


def _as_field(f) -> GF:
    return f if isinstance(f, GF) else _field(int(f))


def label_list(X) -> list[str]:
    """Normalise a label collection; a bare string or int is one label."""
    if X is None:
        return []
    if isinstance(X, (str, int, np.integer)):
        return [str(X)]
    return [str(x) for x in X]


def kind_violation(F: GF, E: np.ndarray, kind: MatrixKind | None) -> str | None:
    if kind is None:
        return None
    if kind is MatrixKind.SYMMETRIC:
        if not np.array_equal(E, E.T):
            return "matrix is not symmetric"
    else:
        if np.any(np.diag(E)):
            return "skew-symmetric matrix has a nonzero diagonal entry"
        if not np.array_equal(E, F.neg_table[E.T]):
            return "matrix is not skew-symmetric"
    return None


@dataclass(frozen=True, eq=False)
class LabeledMatrix:
    """A V x V matrix over ``field`` with rows/columns named by ``ground``.

    ``kind`` is None for an untagged grid (e.g. the pivot of a symmetric
    matrix, or a negated matrix).
    """

    ground: tuple
    field: GF
    entries: np.ndarray
    kind: MatrixKind | None = None

    def __post_init__(self):
        F = _as_field(self.field)
        ground = tuple(str(v) for v in self.ground)
        if len(set(ground)) != len(ground):
            raise ValueError("duplicate labels in ground set")
        n = len(ground)
        E = np.array(self.entries, dtype=np.int64).reshape(n, n)
        if E.size and (E.min() < 0 or E.max() >= F.q):
            raise ValueError(f"entries outside GF({F.q})")
        E.flags.writeable = False
        kind = MatrixKind.parse(self.kind)
        msg = kind_violation(F, E, kind)
        if msg:
            raise KindViolation(msg)
        object.__setattr__(self, "field", F)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "entries", E)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_pos", {v: i for i, v in enumerate(ground)})

    @classmethod
    def from_rows(cls, rows, field=2, kind=None, labels=None) -> "LabeledMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        if labels is None:
            labels = [str(i + 1) for i in range(n)]
        return cls(tuple(labels), _as_field(field), np.array(rows, dtype=np.int64).reshape(n, n), kind)

    @property
    def n(self) -> int:
        return len(self.ground)

    def index(self, label) -> int:
        try:
            return self._pos[str(label)]
        except KeyError:
            raise UnknownLabel(f"unknown label {label!r}") from None

    def indices(self, X) -> list[int]:
        """Positions of the labels in X, sorted by ground order."""
        return sorted({self.index(x) for x in label_list(X)})

    def labels(self, idx: Iterable[int]) -> tuple:
        return tuple(self.ground[i] for i in idx)

    def __getitem__(self, key):
        i, j = key
        return int(self.entries[self.index(i), self.index(j)])

    def with_kind(self, kind) -> "LabeledMatrix":
        return LabeledMatrix(self.ground, self.field, self.entries, kind)

    def relabel(self, mapping) -> "LabeledMatrix":
        return LabeledMatrix(tuple(str(mapping[v]) for v in self.ground), self.field,
                             self.entries, self.kind)

    def reorder(self, ground) -> "LabeledMatrix":
        idx = [self.index(v) for v in ground]
        if len(idx) != self.n or len(set(idx)) != self.n:
            raise GroundMismatch("reorder needs a permutation of the ground set")
        return LabeledMatrix(tuple(str(v) for v in ground), self.field,
                             self.entries[np.ix_(idx, idx)], self.kind)

    def key(self):
        return (self.ground, self.field.q, self.kind, self.entries.tobytes())

    def __eq__(self, other):
        if not isinstance(other, LabeledMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        kind = self.kind.value if self.kind else "grid"
        rows = ";".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"LabeledMatrix(GF({self.field.q}), {kind}, {list(self.ground)}, [{rows}])"


def zero_matrix(labels, field=2, kind=MatrixKind.SKEW) -> LabeledMatrix:
    labels = label_list(labels)
    n = len(labels)
    return LabeledMatrix(tuple(labels), _as_field(field), np.zeros((n, n), dtype=np.int64), kind)


def adjacency_matrix(vertices, edges) -> LabeledMatrix:
    """GF(2) skew-symmetric adjacency matrix of a simple graph."""
    vertices = label_list(vertices)
    pos = {v: i for i, v in enumerate(vertices)}
    E = np.zeros((len(vertices), len(vertices)), dtype=np.int64)
    for u, v in edges:
        i, j = pos[str(u)], pos[str(v)]
        if i == j:
            raise ValueError("simple graphs have no loops")
        E[i, j] = E[j, i] = 1
    return LabeledMatrix(tuple(vertices), _field(2), E, MatrixKind.SKEW)


def graph_matrix(G) -> LabeledMatrix:
    """Adjacency matrix of anything exposing ``nodes`` and ``edges`` (e.g. networkx)."""
    return adjacency_matrix(list(G.nodes), list(G.edges))


# --- submatrices, rank, determinant -----------------------------------------

def submatrix(M: LabeledMatrix, X, Y):
    """``M[X, Y]``; a principal request returns a LabeledMatrix keeping the kind."""
    ix, iy = M.indices(X), M.indices(Y)
    if ix == iy:
        return principal(M, X)
    return M.entries[np.ix_(ix, iy)].copy()


def principal(M: LabeledMatrix, X) -> LabeledMatrix:
    ix = M.indices(X)
    return LabeledMatrix(M.labels(ix), M.field, M.entries[np.ix_(ix, ix)], M.kind)


def rank(G, field=None) -> int:
    """Rank of a LabeledMatrix, or of a bare grid over ``field``."""
    if isinstance(G, LabeledMatrix):
        return linalg.rank(G.field, G.entries)
    if field is None:
        raise ValueError("a bare grid needs an explicit field")
    return linalg.rank(_as_field(field), G)


def det(M) -> int:
    if isinstance(M, LabeledMatrix):
        return linalg.det(M.field, M.entries)
    raise TypeError("det expects a LabeledMatrix")


def cut_rank(M: LabeledMatrix, X) -> int:
    ix = M.indices(X)
    rest = [i for i in range(M.n) if i not in set(ix)]
    return linalg.rank(M.field, M.entries[np.ix_(ix, rest)])


# --- pivot, Schur complement, negation --------------------------------------

def _blocks(M: LabeledMatrix, Y):
    iy = M.indices(Y)
    sy = set(iy)
    ir = [i for i in range(M.n) if i not in sy]
    E = M.entries
    A = E[np.ix_(iy, iy)]
    try:
        Ainv = linalg.inverse(M.field, A)
    except SingularPivotBlock:
        raise SingularPivotBlock(f"M[{{{', '.join(M.labels(iy))}}}] is singular") from None
    return iy, ir, Ainv


def pivot(M: LabeledMatrix, Y) -> LabeledMatrix:
    """The principal pivot transform ``M * Y``.

    Skew-symmetric input stays skew-symmetric.  Any other input comes back as
    an untagged grid; see :func:`signed_pivot` for the symmetric companion.
    """
    F, E = M.field, M.entries
    iy, ir, Ainv = _blocks(M, Y)
    B = E[np.ix_(iy, ir)]
    C = E[np.ix_(ir, iy)]
    D = E[np.ix_(ir, ir)]
    AinvB = linalg.matmul(F, Ainv, B)
    CAinv = linalg.matmul(F, C, Ainv)
    out = np.empty_like(E)
    out[np.ix_(iy, iy)] = Ainv
    out[np.ix_(iy, ir)] = AinvB
    out[np.ix_(ir, iy)] = F.neg_table[CAinv]
    out[np.ix_(ir, ir)] = F.sub_table[D, linalg.matmul(F, CAinv, B)]
    kind = MatrixKind.SKEW if M.kind is MatrixKind.SKEW else None
    return LabeledMatrix(M.ground, F, out, kind)


def signed_pivot(M: LabeledMatrix, Y) -> LabeledMatrix:
    """``I_Y (M * Y)``, which is symmetric whenever M is."""
    P = pivot(M, Y)
    out = negate(P, Y, ())
    kind = MatrixKind.SYMMETRIC if M.kind is MatrixKind.SYMMETRIC else None
    return out.with_kind(kind)


def schur(M: LabeledMatrix, Y) -> LabeledMatrix:
    """Schur complement ``D - C A^-1 B`` of ``A = M[Y]``, on ``V - Y``."""
    F, E = M.field, M.entries
    iy, ir, Ainv = _blocks(M, Y)
    B = E[np.ix_(iy, ir)]
    C = E[np.ix_(ir, iy)]
    D = E[np.ix_(ir, ir)]
    S = F.sub_table[D, linalg.matmul(F, linalg.matmul(F, C, Ainv), B)]
    return LabeledMatrix(M.labels(ir), F, S, M.kind)


def sign_vector(M: LabeledMatrix, X) -> np.ndarray:
    s = np.ones(M.n, dtype=np.int64)
    s[M.indices(X)] = M.field.minus_one
    return s


def negate(M: LabeledMatrix, X, Y) -> LabeledMatrix:
    """``I_X M I_Y``: negate the rows in X and the columns in Y (untagged)."""
    F = M.field
    r, c = sign_vector(M, X), sign_vector(M, Y)
    out = F.mul_table[F.mul_table[r[:, None], M.entries], c[None, :]]
    return LabeledMatrix(M.ground, F, out, None)


def tucker_identity_holds(M: LabeledMatrix, Y, X, pivoted: LabeledMatrix | None = None) -> bool:
    """``det((M*Y)[X]) * det(M[Y]) == det(M[X ^ Y])``.

    Sweeps over many X may pass ``pivoted = pivot(M, Y)`` to skip recomputing it.
    """
    P = pivot(M, Y) if pivoted is None else pivoted
    F = M.field
    xs, ys = set(M.labels(M.indices(X))), set(M.labels(M.indices(Y)))
    lhs = F.mul(det(principal(P, xs)), det(principal(M, ys)))
    return lhs == det(principal(M, xs ^ ys))


def nonsingular_principal_sets(M: LabeledMatrix, max_n: int | None = None) -> list[frozenset]:
    """All X with ``det M[X] != 0``, ordered by (size, ground order)."""
    caps.check(M.n, caps.ENUMERATION, max_n)
    return [frozenset(M.labels(ix)) for ix in _subsets_by_size(M.n)
            if linalg.det(M.field, M.entries[np.ix_(ix, ix)]) != 0]


def _subsets_by_size(n: int):
    for k in range(n + 1):
        yield from (list(c) for c in itertools.combinations(range(n), k))


# --- isomorphism -------------------------------------------------------------

def isomorphic(M1: LabeledMatrix, M2: LabeledMatrix) -> dict | None:
    """Lexicographically least bijection f with ``M1[i,j] == M2[f(i),f(j)]``."""
    if M1.field != M2.field:
        raise GroundMismatch("matrices live over different fields")
    if M1.n != M2.n:
        return None
    n = M1.n
    A, B = M1.entries, M2.entries
    sig1 = [(A[i, i], tuple(sorted(A[i])), tuple(sorted(A[:, i]))) for i in range(n)]
    sig2 = [(B[j, j], tuple(sorted(B[j])), tuple(sorted(B[:, j]))) for j in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None
    cand = [[j for j in range(n) if sig2[j] == sig1[i]] for i in range(n)]
    image = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for j in cand[i]:
            if used[j]:
                continue
            if all(A[i, k] == B[j, image[k]] and A[k, i] == B[image[k], j] for k in range(i)):
                image[i] = j
                used[j] = True
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    if not extend(0):
        return None
    return {M1.ground[i]: M2.ground[image[i]] for i in range(n)}


def canonical_entries(M: LabeledMatrix) -> tuple:
    """Lexicographically least row-major entry tuple over all relabelings."""
    n = M.n
    if n == 0:
        return ()
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    best = None
    E = M.entries.astype(np.uint8)
    for chunk in np.array_split(perms, max(1, len(perms) // 5040)):
        P = E[chunk[:, :, None], chunk[:, None, :]].reshape(len(chunk), n * n)
        order = np.lexsort(P.T[::-1])
        cand = P[order[0]]
        if best is None or tuple(cand) < best:
            best = tuple(int(x) for x in cand)
    return best


def canonical_form(M: LabeledMatrix) -> str:
    """Relabeling-invariant text key: field, kind, size and least entry string."""
    kind = M.kind.value if M.kind else "grid"
    ent = canonical_entries(M)
    n = M.n
    rows = ";".join(" ".join(str(x) for x in ent[i * n:(i + 1) * n]) for i in range(n))
    return f"GF({M.field.q}) {kind} n={n} [{rows}]"


def canonical_matrix(M: LabeledMatrix, labels=None) -> LabeledMatrix:
    n = M.n
    if labels is None:
        labels = [str(i + 1) for i in range(n)]
    ent = np.array(canonical_entries(M), dtype=np.int64).reshape(n, n)
    return LabeledMatrix(tuple(labels), M.field, ent, M.kind)


# --- text format ---------------------------------------------------------------

def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_blocks(text: str, allowed_kinds=("symmetric", "skew")):
    """Parse the shared header/row layout; returns (q, kind, labels, rows)."""
    q = kind = labels = None
    rows: list[tuple[int, str, list[str]]] = []
    for lineno, line in _tokens(text):
        head, _, rest = line.partition(" ")
        if head == "field":
            try:
                q = int(rest.strip())
            except ValueError:
                raise ParseError(f"bad field order {rest!r}", lineno) from None
        elif head == "kind":
            kind = rest.strip()
            if kind not in allowed_kinds:
                raise ParseError(f"kind must be one of {', '.join(allowed_kinds)}", lineno)
        elif head == "elements":
            labels = rest.split()
            if len(set(labels)) != len(labels):
                raise ParseError("duplicate element labels", lineno)
        elif head == "row":
            label, colon, vals = rest.partition(":")
            if not colon:
                raise ParseError("row lines look like 'row <label>: e1 e2 ...'", lineno)
            rows.append((lineno, label.strip(), vals.split()))
        else:
            raise ParseError(f"unrecognised line {line!r}", lineno)
    if q is None:
        raise ParseError("missing 'field' line")
    if kind is None:
        raise ParseError("missing 'kind' line")
    if labels is None:
        raise ParseError("missing 'elements' line")
    return q, kind, labels, rows


def parse_entries(F: GF, vals, width: int, lineno: int) -> list[int]:
    if len(vals) != width:
        raise ParseError(f"expected {width} entries, found {len(vals)}", lineno)
    try:
        return [F.element(v) for v in vals]
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def parse_matrix(text: str) -> LabeledMatrix:
    from .errors import NotPrimePower, UnsupportedOrder
    q, kind, labels, rows = parse_blocks(text)
    try:
        F = _field(q)
    except (NotPrimePower, UnsupportedOrder) as exc:
        raise ParseError(str(exc)) from None
    n = len(labels)
    seen = {}
    for lineno, label, vals in rows:
        if label not in labels:
            raise ParseError(f"row for unknown element {label!r}", lineno)
        if label in seen:
            raise ParseError(f"duplicate row for {label!r}", lineno)
        seen[label] = parse_entries(F, vals, n, lineno)
    missing = [v for v in labels if v not in seen]
    if missing:
        raise ParseError(f"missing rows for {', '.join(missing)}")
    E = np.array([seen[v] for v in labels], dtype=np.int64).reshape(n, n)
    return LabeledMatrix(tuple(labels), F, E, kind)


def read_matrix(path) -> LabeledMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def format_matrix(M: LabeledMatrix) -> str:
    if M.kind is None:
        raise KindMismatch("only symmetric or skew matrices have a file format")
    lines = [f"field {M.field.q}", f"kind {M.kind.value}", "elements " + " ".join(M.ground)]
    for v, row in zip(M.ground, M.entries):
        lines.append(f"row {v}: " + " ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"
