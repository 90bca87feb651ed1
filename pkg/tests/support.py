"""Shared generators and brute-force oracles for the test suite.

The oracles here deliberately avoid the library's elimination code: they
enumerate permutations, spans and subsets directly.
"""

import itertools
import math

import numpy as np

from pivotlab import chaingroup as cg
from pivotlab import fmatrix as fm
from pivotlab.gf import field

TOP, BOTTOM = (1, 0), (0, 1)


def labels(n):
    return tuple(str(i + 1) for i in range(n))


# --- generators ----------------------------------------------------------------------

def random_matrix(rng, q, kind, n, ground=None):
    F = field(q)
    kind = fm.MatrixKind.parse(kind)
    E = rng.integers(0, q, size=(n, n))
    for i in range(n):
        for j in range(i):
            E[i, j] = E[j, i] if kind is fm.MatrixKind.SYMMETRIC else F.neg(E[j, i])
        if kind is fm.MatrixKind.SKEW:
            E[i, i] = 0
    return fm.LabeledMatrix(tuple(ground or labels(n)), F, E, kind)


def all_matrices(q, kind, n):
    from pivotlab.containment import matrix_universe
    return matrix_universe(q, kind, n, dedupe=False)


def signed_units(F):
    """All nonzero multiples of (1,0) and (0,1)."""
    return [(c, 0) for c in range(1, F.q)] + [(0, c) for c in range(1, F.q)]


def partner(F, form, a):
    """The signed unit b on the other axis with <a, b> = 1."""
    other = (0, 1) if a[1] == 0 else (1, 0)
    t = int(cg.pair(F, form, np.array(a), np.array(other)))
    c = F.inv(t)
    return (F.mul(c, other[0]), F.mul(c, other[1]))


def random_special_rep(rng, M, signs=(1, -1)):
    """A special representation of M with a random pattern of +-(1,0)/(0,1) values."""
    F = M.field
    form = cg.FormKind.for_kind(M.kind)
    a_vals, b_vals = [], []
    for _ in range(M.n):
        s = F.from_int(int(rng.choice(signs)))
        base = (1, 0) if rng.integers(2) == 0 else (0, 1)
        a = (F.mul(s, base[0]), F.mul(s, base[1]))
        a_vals.append(a)
        b_vals.append(partner(F, form, a))
    return cg.MatrixRepresentation(M, cg.Chain.from_pairs(M.ground, F, a_vals),
                                   cg.Chain.from_pairs(M.ground, F, b_vals))


def random_lagrangian(rng, q, form, n):
    form = cg.FormKind.parse(form)
    M = random_matrix(rng, q, form.matrix_kind, n)
    return cg.from_matrix(random_special_rep(rng, M))


def random_isotropic(rng, q, form, n, dim=None):
    """A random subspace of a random Lagrangian chain-group."""
    L = random_lagrangian(rng, q, form, n)
    if dim is None:
        dim = int(rng.integers(0, n + 1))
    F = L.field
    coeffs = rng.integers(0, q, size=(dim, L.dim)) if L.dim else np.zeros((dim, 0), dtype=np.int64)
    rows = []
    for c in coeffs:
        v = np.zeros(2 * n, dtype=np.int64)
        for k, x in enumerate(c):
            v = F.add_table[v, F.mul_table[int(x), L.basis[k]]]
        rows.append(cg.Chain(L.ground, F, v))
    return cg.span(rows, form, L.ground, F)


def all_isotropic(q, form, n):
    """Every isotropic chain-group on n elements, by extending spans one vector at a time."""
    F = field(q)
    form = cg.FormKind.parse(form)
    ground = labels(n)
    vectors = [np.array(v, dtype=np.int64) for v in itertools.product(range(q), repeat=2 * n)]

    def pairing(u, v):
        return form_value(F, form, u, v)

    start = cg.zero_group(ground, F, form)
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for N in frontier:
            members = all_chains(N)
            for v in vectors:
                if tuple(v) in members or pairing(v, v) != 0:
                    continue
                if any(pairing(v, b) != 0 for b in N.basis):
                    continue
                M = cg.ChainGroup(ground, F, form, np.vstack([N.basis, v[None, :]]))
                if M.key() not in seen:
                    seen[M.key()] = M
                    nxt.append(M)
        frontier = nxt
    return list(seen.values())


def form_value(F, form, u, v):
    """Sum over elements of the pointwise form values of two flat chain vectors."""
    vals = cg.pair(F, form, np.asarray(u).reshape(-1, 2), np.asarray(v).reshape(-1, 2))
    total = 0
    for x in np.atleast_1d(vals):
        total = F.add(total, int(x))
    return total


# --- brute-force oracles -------------------------------------------------------------

def leibniz_det(F, E):
    """Determinant by the permutation expansion."""
    E = np.asarray(E)
    n = E.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = F.mul(term, int(E[i, perm[i]]))
        if inversions % 2:
            term = F.neg(term)
        total = F.add(total, term)
    return total


def span_set(F, rows):
    """Every linear combination of the rows, as a set of tuples."""
    rows = [np.asarray(r, dtype=np.int64) for r in rows]
    width = rows[0].size if rows else 0
    out = set()
    for coeffs in itertools.product(range(F.q), repeat=len(rows)):
        v = np.zeros(width, dtype=np.int64)
        for c, r in zip(coeffs, rows):
            v = F.add_table[v, F.mul_table[c, r]]
        out.add(tuple(int(x) for x in v))
    return out


def log_q(size, q):
    d = round(math.log(size, q))
    assert q ** d == size
    return d


def brute_rank(F, A):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return log_q(len(span_set(F, list(A))), F.q)


def all_chains(N):
    return span_set(N.field, list(N.basis)) if N.dim else {tuple([0] * (2 * N.n))}


def brute_times_dim(N, T):
    keep = set(N.indices(T))
    cols = [c for i in keep for c in (2 * i, 2 * i + 1)]
    outside = [c for i in range(N.n) if i not in keep for c in (2 * i, 2 * i + 1)]
    found = {tuple(v[c] for c in sorted(cols)) for v in all_chains(N)
             if all(v[c] == 0 for c in outside)}
    return log_q(len(found), N.field.q)


def brute_connectivity(N, U):
    """(dim N - dim N x U - dim N x (V - U)) / 2 from explicit chain enumeration."""
    from fractions import Fraction
    U = set(U)
    rest = [v for v in N.ground if v not in U]
    val = Fraction(N.dim - brute_times_dim(N, U) - brute_times_dim(N, rest), 2)
    return int(val) if val.denominator == 1 else val


def subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


# --- hypothesis strategies -----------------------------------------------------------

def matrices(q, kind, min_n=0, max_n=5):
    """Hypothesis strategy for kind-tagged matrices on labels 1..n."""
    from hypothesis import strategies as st

    F = field(q)
    kind = fm.MatrixKind.parse(kind)

    @st.composite
    def build(draw):
        n = draw(st.integers(min_n, max_n))
        E = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                if i == j and kind is fm.MatrixKind.SKEW:
                    continue
                x = draw(st.integers(0, q - 1))
                E[i, j] = x
                E[j, i] = x if kind is fm.MatrixKind.SYMMETRIC else F.neg(x)
        return fm.LabeledMatrix(labels(n), F, E, kind)

    return build()


def all_subspaces(q, n):
    """Every subspace of GF(q)^n as a Tutte chain-group on labels 1..n."""
    from pivotlab import tuttebridge as tb

    F = field(q)
    ground = labels(n)
    vectors = [np.array(v, dtype=np.int64) for v in itertools.product(range(q), repeat=n) if any(v)]
    start = tb.tutte_span(ground, F, [])
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for N in frontier:
            for v in vectors:
                M = tb.tutte_span(ground, F, np.vstack([N.basis, v[None, :]]))
                if M.key() not in seen:
                    seen[M.key()] = M
                    nxt.append(M)
        frontier = nxt
    return list(seen.values())
