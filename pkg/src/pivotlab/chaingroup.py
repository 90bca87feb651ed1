"""Chains to K = F^2, chain-groups, minors, connectivity and matrix representations.

A chain on V assigns each element a pair (top, bottom) in K.  It is stored as a
flat vector of length 2|V| interleaved as (v1-top, v1-bottom, v2-top, ...).
A :class:`ChainGroup` is a subspace of K^V kept in reduced row echelon form,
so two chain-groups are equal exactly when their bases are equal arrays.

Two bilinear forms on K are supported::

    PLUS :  <(a, b), (c, d)> = ad + bc     (symmetric)
    MINUS:  <(a, b), (c, d)> = ad - bc     (skew-symmetric)

Skew-symmetric matrices pair with PLUS and symmetric matrices with MINUS.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import caps, fmatrix, linalg
from .errors import (ExhaustionFailure, GroundMismatch, InvalidRepresentation,
                     NotEulerian, NotIsotropic, NotIsotropicDirection,
                     NotSupplementary, ParseError, SingularPivotBlock,
                     UnknownLabel)
from .fmatrix import LabeledMatrix, MatrixKind, label_list
from .gf import GF, field as _field


class FormKind(enum.Enum):
    PLUS = "b+"
    MINUS = "b-"

    @classmethod
    def parse(cls, value) -> "FormKind":
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        if v in ("b+", "plus", "+", "bplus"):
            return cls.PLUS
        if v in ("b-", "minus", "-", "bminus"):
            return cls.MINUS
        raise ValueError(f"unknown form {value!r}")

    @classmethod
    def for_kind(cls, kind: MatrixKind) -> "FormKind":
        return cls.PLUS if kind is MatrixKind.SKEW else cls.MINUS

    @property
    def matrix_kind(self) -> MatrixKind:
        return MatrixKind.SKEW if self is FormKind.PLUS else MatrixKind.SYMMETRIC


TOP = (1, 0)
BOTTOM = (0, 1)


def pair(F: GF, form: FormKind, x, y):
    """Pointwise form on K; ``x`` and ``y`` are arrays ending in an axis of length 2."""
    x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
    ad = F.mul_table[x[..., 0], y[..., 1]]
    bc = F.mul_table[x[..., 1], y[..., 0]]
    return F.add_table[ad, bc] if form is FormKind.PLUS else F.sub_table[ad, bc]


def gram(F: GF, form: FormKind, n: int) -> np.ndarray:
    """2n x 2n Gram matrix G with <f, g> = f G g^T."""
    G = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        G[2 * i, 2 * i + 1] = 1
        G[2 * i + 1, 2 * i] = 1 if form is FormKind.PLUS else F.minus_one
    return G


def _cols(idx) -> list[int]:
    out = []
    for i in idx:
        out += [2 * i, 2 * i + 1]
    return out


class _Grounded:
    ground: tuple

    def index(self, label) -> int:
        try:
            return self._pos[str(label)]
        except KeyError:
            raise UnknownLabel(f"unknown label {label!r}") from None

    def indices(self, X) -> list[int]:
        return sorted({self.index(x) for x in label_list(X)})

    @property
    def n(self) -> int:
        return len(self.ground)


def _check_ground(ground) -> tuple:
    ground = tuple(str(v) for v in ground)
    if len(set(ground)) != len(ground):
        raise ValueError("duplicate labels in ground set")
    return ground


@dataclass(frozen=True, eq=False)
class Chain(_Grounded):
    ground: tuple
    field: GF
    vec: np.ndarray

    def __post_init__(self):
        ground = _check_ground(self.ground)
        F = self.field if isinstance(self.field, GF) else _field(int(self.field))
        v = np.array(self.vec, dtype=np.int64).reshape(2 * len(ground))
        if v.size and (v.min() < 0 or v.max() >= F.q):
            raise ValueError(f"chain entries outside GF({F.q})")
        v.flags.writeable = False
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "field", F)
        object.__setattr__(self, "vec", v)
        object.__setattr__(self, "_pos", {x: i for i, x in enumerate(ground)})

    @classmethod
    def zero(cls, ground, field) -> "Chain":
        ground = label_list(ground)
        return cls(tuple(ground), field, np.zeros(2 * len(ground), dtype=np.int64))

    @classmethod
    def constant(cls, ground, field, value) -> "Chain":
        ground = label_list(ground)
        return cls(tuple(ground), field, np.tile(np.asarray(value, dtype=np.int64), len(ground)))

    @classmethod
    def from_pairs(cls, ground, field, pairs) -> "Chain":
        """``pairs`` is a sequence in ground order or a dict keyed by label."""
        ground = label_list(ground)
        if isinstance(pairs, dict):
            pairs = [pairs.get(v, (0, 0)) for v in ground]
        return cls(tuple(ground), field, np.asarray(pairs, dtype=np.int64).reshape(-1))

    @classmethod
    def unit(cls, ground, field, v, value) -> "Chain":
        c = cls.zero(ground, field)
        vec = c.vec.copy()
        i = c.index(v)
        vec[2 * i:2 * i + 2] = value
        return cls(c.ground, c.field, vec)

    @property
    def pairs(self) -> np.ndarray:
        return self.vec.reshape(-1, 2)

    def __getitem__(self, label) -> tuple:
        i = self.index(label)
        return int(self.vec[2 * i]), int(self.vec[2 * i + 1])

    def with_values(self, labels, value) -> "Chain":
        vec = self.vec.copy().reshape(-1, 2)
        vec[self.indices(labels)] = value
        return Chain(self.ground, self.field, vec.reshape(-1))

    def negate(self) -> "Chain":
        return Chain(self.ground, self.field, self.field.neg_table[self.vec])

    def restrict(self, T) -> "Chain":
        idx = self.indices(T)
        return Chain(tuple(self.ground[i] for i in idx), self.field, self.vec[_cols(idx)])

    def reorder(self, ground) -> "Chain":
        idx = [self.index(v) for v in ground]
        return Chain(tuple(str(v) for v in ground), self.field, self.vec[_cols(idx)])

    def is_zero(self) -> bool:
        return not self.vec.any()

    def key(self):
        return (self.ground, self.field.q, self.vec.tobytes())

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        body = " ".join(f"{v}:({t},{b})" for v, (t, b) in zip(self.ground, self.pairs.tolist()))
        return f"Chain({body})"


def up(ground, field, v) -> Chain:
    """The chain that is (1, 0) at v and zero elsewhere."""
    return Chain.unit(ground, field, v, TOP)


def down(ground, field, v) -> Chain:
    """The chain that is (0, 1) at v and zero elsewhere."""
    return Chain.unit(ground, field, v, BOTTOM)


@dataclass(frozen=True, eq=False)
class ChainGroup(_Grounded):
    """A subspace of K^V with a fixed form; ``basis`` is kept in RREF."""

    ground: tuple
    field: GF
    form: FormKind
    basis: np.ndarray

    def __post_init__(self):
        ground = _check_ground(self.ground)
        F = self.field if isinstance(self.field, GF) else _field(int(self.field))
        B = np.array(self.basis, dtype=np.int64)
        width = 2 * len(ground)
        if B.ndim != 2:
            B = B.reshape(-1, width) if width else np.zeros((0, 0), dtype=np.int64)
        if B.shape[1] != width:
            raise GroundMismatch(f"basis has {B.shape[1]} columns, expected {width}")
        if B.size and (B.min() < 0 or B.max() >= F.q):
            raise ValueError(f"basis entries outside GF({F.q})")
        B = linalg.rref(F, B)[0] if B.shape[0] else B
        B.flags.writeable = False
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "field", F)
        object.__setattr__(self, "form", FormKind.parse(self.form))
        object.__setattr__(self, "basis", B)
        object.__setattr__(self, "_pos", {x: i for i, x in enumerate(ground)})

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def chains(self) -> list[Chain]:
        return [Chain(self.ground, self.field, row) for row in self.basis]

    def contains(self, f: Chain) -> bool:
        _same_ground(self, f)
        return linalg.row_space_contains(self.field, self.basis, f.vec)

    def reorder(self, ground) -> "ChainGroup":
        idx = [self.index(v) for v in ground]
        if len(idx) != self.n or len(set(idx)) != self.n:
            raise GroundMismatch("reorder needs a permutation of the ground set")
        return ChainGroup(tuple(str(v) for v in ground), self.field, self.form,
                          self.basis[:, _cols(idx)])

    def relabel(self, mapping) -> "ChainGroup":
        return ChainGroup(tuple(str(mapping[v]) for v in self.ground), self.field,
                          self.form, self.basis)

    def key(self):
        return (self.ground, self.field.q, self.form, self.basis.shape, self.basis.tobytes())

    def __eq__(self, other):
        if not isinstance(other, ChainGroup):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"ChainGroup(GF({self.field.q}), {self.form.value}, {list(self.ground)}, "
                f"dim={self.dim})")


def _same_ground(a, b):
    if tuple(a.ground) != tuple(b.ground):
        raise GroundMismatch(f"ground sets differ: {list(a.ground)} vs {list(b.ground)}")
    if a.field != b.field:
        raise GroundMismatch("objects live over different fields")


# --- basic construction and the form ------------------------------------------

def form_eval(form, f: Chain, g: Chain) -> int:
    form = FormKind.parse(form)
    _same_ground(f, g)
    F = f.field
    vals = pair(F, form, f.pairs, g.pairs)
    return int(np.bitwise_xor.reduce(vals)) if F.q == 2 else _sum(F, vals)


def _sum(F: GF, vals) -> int:
    s = 0
    for v in np.asarray(vals).ravel():
        s = F.add_table[s, v]
    return int(s)


def span(chains, form=FormKind.PLUS, ground=None, field=None) -> ChainGroup:
    chains = list(chains)
    if not chains:
        if ground is None or field is None:
            raise ValueError("an empty span needs an explicit ground set and field")
        g = label_list(ground)
        return ChainGroup(tuple(g), field, form, np.zeros((0, 2 * len(g)), dtype=np.int64))
    first = chains[0]
    for c in chains[1:]:
        _same_ground(first, c)
    if ground is not None and tuple(label_list(ground)) != first.ground:
        raise GroundMismatch("chains do not live on the requested ground set")
    return ChainGroup(first.ground, first.field, form, np.stack([c.vec for c in chains]))


def zero_group(ground, field, form=FormKind.PLUS) -> ChainGroup:
    return span([], form, ground, _field(field) if isinstance(field, int) else field)


def full_group(ground, field, form=FormKind.PLUS) -> ChainGroup:
    g = label_list(ground)
    return ChainGroup(tuple(g), field, form, np.eye(2 * len(g), dtype=np.int64))


def _form_matrix(N: ChainGroup) -> np.ndarray:
    """Pairwise form values between basis rows."""
    F = N.field
    B = N.basis
    return linalg.matmul(F, linalg.matmul(F, B, gram(F, N.form, N.n)), B.T)


def is_isotropic(N: ChainGroup) -> bool:
    return not _form_matrix(N).any()


def is_lagrangian(N: ChainGroup) -> bool:
    return N.dim == N.n and is_isotropic(N)


def orthogonal(N: ChainGroup) -> ChainGroup:
    F = N.field
    G = gram(F, N.form, N.n)
    if N.dim == 0:
        return full_group(N.ground, F, N.form)
    ns = linalg.nullspace(F, linalg.matmul(F, N.basis, G), 2 * N.n)
    return ChainGroup(N.ground, F, N.form, ns)


# --- restriction, minors ---------------------------------------------------------

def restrict(N: ChainGroup, T) -> ChainGroup:
    """N . T"""
    idx = N.indices(T)
    return ChainGroup(tuple(N.ground[i] for i in idx), N.field, N.form, N.basis[:, _cols(idx)])


def _filter(N: ChainGroup, cols: list[int]) -> np.ndarray:
    """Basis rows spanning the chains of N vanishing on the given coordinates."""
    if not cols or N.dim == 0:
        return N.basis
    K = linalg.left_nullspace(N.field, N.basis[:, cols])
    if K.shape[0] == 0:
        return np.zeros((0, N.basis.shape[1]), dtype=np.int64)
    return linalg.matmul(N.field, K, N.basis)


def times(N: ChainGroup, T) -> ChainGroup:
    """N x T: chains of N vanishing off T, restricted to T."""
    idx = N.indices(T)
    rest = [i for i in range(N.n) if i not in set(idx)]
    B = _filter(N, _cols(rest))
    return ChainGroup(tuple(N.ground[i] for i in idx), N.field, N.form, B[:, _cols(idx)])


def delete(N: ChainGroup, T) -> ChainGroup:
    """Keep chains whose value at each x in T pairs to zero with (1, 0); drop T.

    For both forms that means the bottom coordinate vanishes on T.
    """
    idx = N.indices(T)
    B = _filter(N, [2 * i + 1 for i in idx])
    keep = [i for i in range(N.n) if i not in set(idx)]
    return ChainGroup(tuple(N.ground[i] for i in keep), N.field, N.form, B[:, _cols(keep)])


def contract(N: ChainGroup, T) -> ChainGroup:
    """Keep chains whose value on T pairs to zero with (0, 1), i.e. top vanishes; drop T."""
    idx = N.indices(T)
    B = _filter(N, [2 * i for i in idx])
    keep = [i for i in range(N.n) if i not in set(idx)]
    return ChainGroup(tuple(N.ground[i] for i in keep), N.field, N.form, B[:, _cols(keep)])


def minor(N: ChainGroup, contract_set=(), delete_set=()) -> ChainGroup:
    """``N / contract_set \\ delete_set``."""
    C, D = set(label_list(contract_set)), set(label_list(delete_set))
    if C & D:
        raise ValueError("contracted and deleted sets must be disjoint")
    idx_c = [2 * N.index(x) for x in C]
    idx_d = [2 * N.index(x) + 1 for x in D]
    B = _filter(N, sorted(idx_c + idx_d))
    keep = [i for i in range(N.n) if N.ground[i] not in C | D]
    return ChainGroup(tuple(N.ground[i] for i in keep), N.field, N.form, B[:, _cols(keep)])


def connectivity(N: ChainGroup, U):
    """(dim N - dim N x (V - U) - dim N x U) / 2 as an int, or a Fraction if odd."""
    idx = set(N.indices(U))
    rest = [N.ground[i] for i in range(N.n) if i not in idx]
    num = N.dim - times(N, rest).dim - times(N, [N.ground[i] for i in sorted(idx)]).dim
    return num // 2 if num % 2 == 0 else Fraction(num, 2)


def connectivity_oracle(N: ChainGroup):
    """Bitmask cut function for the widths module (bit i = ground[i])."""
    F, B, n = N.field, N.basis, N.n
    d = N.dim

    def cut(mask: int):
        inside = [i for i in range(n) if mask >> i & 1]
        outside = [i for i in range(n) if not mask >> i & 1]
        r_in = linalg.rank(F, B[:, _cols(inside)]) if inside else 0
        r_out = linalg.rank(F, B[:, _cols(outside)]) if outside else 0
        num = r_in + r_out - d
        return num // 2 if num % 2 == 0 else Fraction(num, 2)

    return cut


# --- representations ---------------------------------------------------------------

def _is_signed_unit(p) -> bool:
    t, b = int(p[0]), int(p[1])
    return (t == 0) != (b == 0)


@dataclass(frozen=True)
class MatrixRepresentation:
    """(matrix, a, b): a and b are supplementary chains on the matrix ground."""

    matrix: LabeledMatrix
    a: Chain
    b: Chain

    def __post_init__(self):
        M = self.matrix
        if M.kind is None:
            raise InvalidRepresentation("representation matrix must be symmetric or skew")
        for c in (self.a, self.b):
            if c.ground != M.ground or c.field != M.field:
                raise InvalidRepresentation("chains must live on the matrix ground set")
        if not supplementary(self.form, self.a, self.b):
            raise InvalidRepresentation("a and b are not supplementary")

    @property
    def form(self) -> FormKind:
        return FormKind.for_kind(self.matrix.kind)

    @property
    def special(self) -> bool:
        return all(_is_signed_unit(p) for p in self.a.pairs) and \
            all(_is_signed_unit(p) for p in self.b.pairs)

    def __eq__(self, other):
        if not isinstance(other, MatrixRepresentation):
            return NotImplemented
        return (self.matrix, self.a, self.b) == (other.matrix, other.a, other.b)

    def __hash__(self):
        return hash((self.matrix, self.a, self.b))


def supplementary(form, a: Chain, b: Chain) -> bool:
    form = FormKind.parse(form)
    F = a.field
    _same_ground(a, b)
    A, B = a.pairs, b.pairs
    return (not pair(F, form, A, A).any() and not pair(F, form, B, B).any()
            and bool(np.all(pair(F, form, A, B) == 1)))


def standard_representation(M: LabeledMatrix) -> MatrixRepresentation:
    a = Chain.constant(M.ground, M.field, TOP)
    b = Chain.constant(M.ground, M.field, BOTTOM)
    return MatrixRepresentation(M, a, b)


def fundamental_chains(rep: MatrixRepresentation) -> np.ndarray:
    """Rows f_i with f_i(j) = m_ij a(j) + [i = j] b(j)."""
    M, F = rep.matrix, rep.matrix.field
    n = M.n
    A = rep.a.pairs
    rows = F.mul_table[M.entries[:, :, None], A[None, :, :]]
    diag = np.arange(n)
    rows[diag, diag] = F.add_table[rows[diag, diag], rep.b.pairs]
    return rows.reshape(n, 2 * n)


def from_matrix(rep, a: Chain | None = None, b: Chain | None = None) -> ChainGroup:
    """Chain-group spanned by the fundamental chains of a representation.

    ``rep`` may be a bare LabeledMatrix, in which case a = (1, 0) and b = (0, 1)
    everywhere unless given.
    """
    if isinstance(rep, LabeledMatrix):
        if a is None and b is None:
            rep = standard_representation(rep)
        else:
            std = standard_representation(rep)
            rep = MatrixRepresentation(rep, a or std.a, b or std.b)
    M = rep.matrix
    return ChainGroup(M.ground, M.field, rep.form, fundamental_chains(rep))


def _direction_check(N: ChainGroup, a: Chain):
    _same_ground(N, a)
    F = N.field
    A = a.pairs
    if np.any((A[:, 0] == 0) & (A[:, 1] == 0)) or pair(F, N.form, A, A).any():
        raise NotIsotropicDirection("a must be nonzero and isotropic at every element")


def _pairing_matrix(N: ChainGroup, a: Chain) -> np.ndarray:
    """W[r, x] = <a(x), f_r(x)> for the basis rows f_r."""
    rows = N.basis.reshape(N.dim, N.n, 2)
    return pair(N.field, N.form, np.broadcast_to(a.pairs, rows.shape), rows)


def is_eulerian(N: ChainGroup, a: Chain) -> bool:
    _direction_check(N, a)
    if N.dim == 0:
        return True
    return linalg.rank(N.field, _pairing_matrix(N, a)) == N.dim


def special_eulerian(N: ChainGroup) -> Chain:
    """An eulerian chain with values in {(1,0), (0,1)}.

    Works element by element: put (1,0) at the first element when the deletion
    of that element admits a compatible chain, otherwise (0,1) with the
    contraction.
    """
    if not is_isotropic(N):
        raise NotIsotropic("special eulerian chains exist only for isotropic chain-groups")
    return _special_eulerian(N)


def _special_eulerian(N: ChainGroup) -> Chain:
    if N.n == 0:
        return Chain.zero((), N.field)
    v, rest = N.ground[0], N.ground[1:]
    for value, minor_fn in ((TOP, delete), (BOTTOM, contract)):
        sub = _special_eulerian(minor_fn(N, [v]))
        cand = Chain.from_pairs(N.ground, N.field, [value] + sub.pairs.tolist())
        if is_eulerian(N, cand):
            return cand
    raise ExhaustionFailure("no special eulerian chain found for an isotropic chain-group")


def _require_lagrangian(N: ChainGroup):
    if not is_lagrangian(N):
        raise NotIsotropic("operation needs a Lagrangian chain-group")


def fundamental_basis(N: ChainGroup, a: Chain) -> list[Chain]:
    """The chains f_v with <a(v), f_v(v)> = 1 and <a(w), f_v(w)> = 0 for w != v."""
    return [Chain(N.ground, N.field, r) for r in _fundamental_rows(N, a)]


def _fundamental_rows(N: ChainGroup, a: Chain) -> np.ndarray:
    _require_lagrangian(N)
    if not is_eulerian(N, a):
        raise NotEulerian("a is not eulerian for this chain-group")
    F = N.field
    W = _pairing_matrix(N, a)
    return linalg.matmul(F, linalg.inverse(F, W), N.basis)


def to_matrix(N: ChainGroup, a: Chain, b: Chain | None = None) -> MatrixRepresentation:
    """Fundamental matrix of N with respect to a, with entries <f_i(j), b(j)>.

    Under the symmetric form b(v) is replaced by f_v(v), which is what makes the
    diagonal vanish in characteristic 2 and changes nothing otherwise.  The
    returned representation carries the adjusted b.  ``b`` may be omitted for
    the symmetric form.
    """
    F = N.field
    rows = _fundamental_rows(N, a)
    n = N.n
    R = rows.reshape(n, n, 2)
    if N.form is FormKind.PLUS:
        bvals = R[np.arange(n), np.arange(n)].copy()
        if b is not None:
            _same_ground(N, b)
            if not supplementary(N.form, a, b):
                raise NotSupplementary("b is not supplementary to a")
    else:
        if b is None:
            raise NotSupplementary("the skew form needs an explicit b")
        _same_ground(N, b)
        if not supplementary(N.form, a, b):
            raise NotSupplementary("b is not supplementary to a")
        bvals = b.pairs
    E = pair(F, N.form, R, np.broadcast_to(bvals, R.shape))
    M = LabeledMatrix(N.ground, F, E, N.form.matrix_kind)
    return MatrixRepresentation(M, a, Chain(N.ground, F, bvals.reshape(-1)))


def representation_pivot(rep: MatrixRepresentation, Y) -> MatrixRepresentation:
    """Another special representation of the same chain-group, pivoted on Y."""
    M = rep.matrix
    if not rep.special:
        raise InvalidRepresentation("representation pivots need a special representation")
    labels = [M.ground[i] for i in M.indices(Y)]
    if not labels:
        return rep
    a_new = rep.a.with_values(labels, rep.b.pairs[M.indices(labels)])
    if rep.form is FormKind.PLUS:
        P = fmatrix.pivot(M, labels)
        b_new = rep.b.with_values(labels, rep.a.pairs[M.indices(labels)])
    else:
        P = fmatrix.signed_pivot(M, labels)
        b_new = rep.b.with_values(labels, M.field.neg_table[rep.a.pairs[M.indices(labels)]])
    return MatrixRepresentation(P, a_new, b_new)


def equivalent_fundamental_matrices(M1: LabeledMatrix, M2: LabeledMatrix, form=None,
                                    max_n: int | None = None):
    """Search Y and signs d with M2 = D (M1*Y) D (or D I_Y (M1*Y) D for b-).

    Returns ``(Y, signs)`` with Y a sorted label tuple and ``signs`` mapping
    labels to +1/-1, or None.  Y runs over nonsingular blocks by (size, order)
    and the sign pattern is the one fixing +1 at the first element of every
    connected piece.
    """
    form = FormKind.for_kind(M1.kind) if form is None else FormKind.parse(form)
    if M1.ground != M2.ground or M1.field != M2.field:
        raise GroundMismatch("matrices must share ground set and field")
    caps.check(M1.n, caps.EQUIVALENCE, max_n)
    F, n = M1.field, M1.n
    for idx in fmatrix._subsets_by_size(n):
        if linalg.det(F, M1.entries[np.ix_(idx, idx)]) == 0:
            continue
        Y = [M1.ground[i] for i in idx]
        P = fmatrix.pivot(M1, Y) if form is FormKind.PLUS else fmatrix.negate(fmatrix.pivot(M1, Y), Y, ())
        d = _match_signs(F, P.entries, M2.entries)
        if d is not None:
            return tuple(Y), {v: (1 if s == 1 else -1) for v, s in zip(M1.ground, d)}
    return None


def _match_signs(F: GF, P: np.ndarray, Q: np.ndarray):
    """Signs d (field elements +-1) with Q[i,j] = d_i d_j P[i,j], or None."""
    n = P.shape[0]
    if not np.array_equal(P != 0, Q != 0) or not np.array_equal(np.diag(P), np.diag(Q)):
        return None
    d = [0] * n
    m1 = F.minus_one
    for s in range(n):
        if d[s]:
            continue
        d[s] = 1
        stack = [s]
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(P[i]).tolist():
                ratio = F.div(int(Q[i, j]), int(P[i, j]))
                if ratio not in (1, m1):
                    return None
                want = F.mul(ratio, d[i])
                if d[j] == 0:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    return None
    return d


# --- isomorphism and minor search ------------------------------------------------

def simple_isomorphic(N1: ChainGroup, N2: ChainGroup, max_n: int | None = None) -> dict | None:
    """Least bijection mu : V1 -> V2 (by ground order of images) with N1 = N2 o mu."""
    if N1.field != N2.field or N1.form != N2.form:
        raise GroundMismatch("chain-groups must share field and form")
    if N1.n != N2.n or N1.dim != N2.dim:
        return None
    caps.check(N1.n, caps.MINOR_SEARCH, max_n)
    n = N1.n
    F = N1.field
    sig1 = [_element_signature(N1, i) for i in range(n)]
    sig2 = [_element_signature(N2, j) for j in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None
    image: list[int] = []
    used = [False] * n

    def prefix_ok(k):
        R1 = N1.basis[:, _cols(range(k))]
        R2 = N2.basis[:, _cols(image)]
        return np.array_equal(linalg.rref(F, R1)[0], linalg.rref(F, R2)[0])

    def extend(k):
        if k == n:
            return True
        for j in range(n):
            if used[j] or sig2[j] != sig1[k]:
                continue
            image.append(j)
            used[j] = True
            if prefix_ok(k + 1) and extend(k + 1):
                return True
            image.pop()
            used[j] = False
        return False

    if not extend(0):
        return None
    mu = {N1.ground[i]: N2.ground[j] for i, j in enumerate(image)}
    if N2.reorder([mu[v] for v in N1.ground]).relabel(
            {mu[v]: v for v in N1.ground}) != N1:
        raise ExhaustionFailure("isomorphism check disagrees with prefix search")
    return mu


def _element_signature(N: ChainGroup, i: int):
    F = N.field
    cols = N.basis[:, [2 * i, 2 * i + 1]]
    r = linalg.rank(F, cols) if N.dim else 0
    up_in = linalg.row_space_contains(F, N.basis, _unit_vec(N.n, i, 0)) if N.dim else False
    dn_in = linalg.row_space_contains(F, N.basis, _unit_vec(N.n, i, 1)) if N.dim else False
    return (r, bool(up_in), bool(dn_in))


def _unit_vec(n, i, slot):
    v = np.zeros(2 * n, dtype=np.int64)
    v[2 * i + slot] = 1
    return v


def minor_embedding(N1: ChainGroup, N2: ChainGroup, max_n: int | None = None):
    """Find disjoint (X, Y) with N1 simply isomorphic to N2 / X \\ Y.

    Retained sets are tried in lexicographic order, then contraction sets by
    (size, order).  Returns ``(X, Y, bijection)`` or None.
    """
    if N1.field != N2.field or N1.form != N2.form:
        raise GroundMismatch("chain-groups must share field and form")
    caps.check(N2.n, caps.MINOR_SEARCH, max_n)
    if N1.n > N2.n:
        return None
    for keep in itertools.combinations(range(N2.n), N1.n):
        removed = [N2.ground[i] for i in range(N2.n) if i not in keep]
        for X in _subsets_ordered(removed):
            Y = [v for v in removed if v not in X]
            Nm = minor(N2, X, Y)
            if Nm.dim != N1.dim:
                continue
            mu = simple_isomorphic(N1, Nm, max_n=max(N1.n, caps.resolve(caps.MINOR_SEARCH, max_n)))
            if mu is not None:
                return tuple(X), tuple(Y), mu
    return None


def _subsets_ordered(items):
    for k in range(len(items) + 1):
        for c in itertools.combinations(items, k):
            yield list(c)


# --- text format --------------------------------------------------------------------

def parse_chaingroup(text: str) -> ChainGroup:
    from .errors import NotPrimePower, UnsupportedOrder
    form = q = labels = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "form":
            try:
                form = FormKind.parse(rest.strip())
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        elif head == "field":
            try:
                q = int(rest)
            except ValueError:
                raise ParseError(f"bad field order {rest!r}", lineno) from None
        elif head == "elements":
            labels = rest.split()
        elif head.startswith("chain"):
            body = line.split(":", 1)[1] if ":" in line else ""
            rows.append((lineno, body.split()))
        else:
            raise ParseError(f"unrecognised line {line!r}", lineno)
    for what, val in (("form", form), ("field", q), ("elements", labels)):
        if val is None:
            raise ParseError(f"missing '{what}' line")
    try:
        F = _field(q)
    except (NotPrimePower, UnsupportedOrder) as exc:
        raise ParseError(str(exc)) from None
    vecs = []
    for lineno, toks in rows:
        if len(toks) != len(labels):
            raise ParseError(f"expected {len(labels)} pairs, found {len(toks)}", lineno)
        vec = []
        for t in toks:
            parts = t.strip("()").split(",")
            if len(parts) != 2:
                raise ParseError(f"bad pair {t!r}; write top,bottom", lineno)
            try:
                vec += [F.element(p) for p in parts]
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        vecs.append(vec)
    basis = np.array(vecs, dtype=np.int64).reshape(len(vecs), 2 * len(labels))
    return ChainGroup(tuple(labels), F, form, basis)


def format_chaingroup(N: ChainGroup) -> str:
    lines = [f"form {N.form.value}", f"field {N.field.q}", "elements " + " ".join(N.ground)]
    for row in N.basis.reshape(N.dim, N.n, 2):
        lines.append("chain: " + " ".join(f"{t},{b}" for t, b in row.tolist()))
    return "\n".join(lines) + "\n"
