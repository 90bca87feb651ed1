import itertools

import numpy as np
import pytest
from support import all_subspaces, labels, subsets

from pivotlab import chaingroup as cg
from pivotlab import tuttebridge as tb
from pivotlab import widths as w
from pivotlab.errors import GroundSetTooLarge, NotAMatroid, ParseError
from pivotlab.gf import field

F2, F3 = field(2), field(3)
U12 = tb.tutte_span(["a", "b"], F2, [[1, 1]])


def vectors(N):
    """Every vector of a Tutte chain-group, as tuples."""
    F = N.field
    out = set()
    for coeffs in itertools.product(range(F.q), repeat=N.dim):
        v = np.zeros(N.n, dtype=np.int64)
        for c, r in zip(coeffs, N.basis):
            v = F.add_table[v, F.mul_table[c, r]]
        out.add(tuple(int(x) for x in v))
    return out


def brute_rank(N, X):
    """|X| minus the dimension of the vectors supported inside X, by enumeration."""
    idx = set(N.indices(X))
    inside = [v for v in vectors(N) if all(v[i] == 0 for i in range(N.n) if i not in idx)]
    return len(idx) - round(np.log(len(inside)) / np.log(N.field.q))


def brute_circuits(N):
    sups = {frozenset(i for i, x in enumerate(v) if x) for v in vectors(N)} - {frozenset()}
    return {S for S in sups if not any(T < S for T in sups)}


def matroid_delete(M, X):
    keep = [v for v in M.ground if v not in set(X)]
    return {S: M.rank_of(S) for S in subsets(keep)}


def matroid_contract(M, X):
    keep = [v for v in M.ground if v not in set(X)]
    rX = M.rank_of(X)
    return {S: M.rank_of(list(S) + list(X)) - rX for S in subsets(keep)}


def rank_dict(M):
    return {S: M.rank_of(S) for S in subsets(M.ground)}


SMALL = [N for q, top in ((2, 4), (3, 3)) for n in range(top + 1) for N in all_subspaces(q, n)]


# --- matroids of Tutte chain-groups -----------------------------------------------------------

def test_matroid_examples():
    free = tb.matroid_from(tb.tutte_span(labels(3), F2, []))
    assert free.full_rank == 3 and free.circuits() == []
    everything = tb.matroid_from(tb.tutte_span(labels(3), F2, np.eye(3, dtype=np.int64)))
    assert everything.full_rank == 0
    assert everything.circuits() == [("1",), ("2",), ("3",)]
    M = tb.matroid_from(U12)
    assert M.circuits() == [("a", "b")] and M.full_rank == 1


def test_rank_and_circuits_against_enumeration():
    for N in SMALL:
        M = tb.matroid_from(N)
        assert M.full_rank == N.n - N.dim
        for X in subsets(N.ground):
            assert M.rank_of(X) == brute_rank(N, X)
        assert {frozenset(N.indices(C)) for C in M.circuits()} == brute_circuits(N)
        assert set(M.circuits()) == set(tb.supports(N))


def test_rank_axioms_are_enforced():
    with pytest.raises(NotAMatroid):
        tb.Matroid(["a"], [0, 2])
    with pytest.raises(NotAMatroid):
        tb.Matroid(["a", "b"], [0, 1, 1, 0])  # not monotone
    with pytest.raises(NotAMatroid):
        tb.Matroid(["a", "b"], [1, 1, 1, 1])  # r(empty) must be 0
    tb.Matroid(["a", "b"], [0, 1, 1, 1])


def test_matroid_cap():
    with pytest.raises(GroundSetTooLarge):
        tb.matroid_from(tb.tutte_span(labels(4), F2, []), max_n=3)


# --- minors and duality --------------------------------------------------------------------

def test_tutte_minor_examples():
    assert tb.tutte_minor(U12, ["a", "b"], ["a", "b"]) == U12
    deleted = tb.matroid_from(tb.tutte_times(U12, ["a"]))
    assert deleted.full_rank == 1 and deleted.circuits() == []
    contracted = tb.matroid_from(tb.tutte_restrict(U12, ["a"]))
    assert contracted.full_rank == 0
    with pytest.raises(ValueError):
        tb.tutte_minor(U12, ["a"], ["b"])


def test_matroid_minor_correspondence():
    for N in SMALL:
        M = tb.matroid_from(N)
        for X in subsets(N.ground):
            rest = [v for v in N.ground if v not in X]
            assert rank_dict(tb.matroid_from(tb.tutte_times(N, rest))) == matroid_delete(M, X)
            assert rank_dict(tb.matroid_from(tb.tutte_restrict(N, rest))) == matroid_contract(M, X)


def test_tutte_duality():
    for N in SMALL:
        perp = tb.tutte_orthogonal(N)
        assert tb.tutte_orthogonal(perp) == N
        for X in subsets(N.ground):
            assert tb.tutte_orthogonal(tb.tutte_restrict(N, X)) == tb.tutte_times(perp, X)


# --- the lift ----------------------------------------------------------------------------------

def test_lift_examples():
    g = ("a", "b")
    zero = tb.lift(tb.tutte_span(g, F2, []))
    assert zero == cg.span([cg.Chain.unit(g, F2, v, (0, 1)) for v in g], cg.FormKind.PLUS)
    full = tb.lift(tb.tutte_span(g, F2, np.eye(2, dtype=np.int64)))
    assert full == cg.span([cg.Chain.unit(g, F2, v, (1, 0)) for v in g], cg.FormKind.PLUS)
    L = tb.lift(U12)
    assert L.dim == 2
    assert L == cg.span([cg.Chain.constant(g, F2, (1, 0)), cg.Chain.constant(g, F2, (0, 1))],
                        cg.FormKind.PLUS)


def test_lift_is_lagrangian():
    for N in SMALL:
        L = tb.lift(N)
        assert L.form is cg.FormKind.PLUS
        assert cg.is_lagrangian(L)


def test_lift_carries_minors():
    # Restricting the Tutte chain-group corresponds to deleting from the lift and
    # the times-construction to contracting.
    for N in SMALL:
        L = tb.lift(N)
        for X in subsets(N.ground):
            rest = [v for v in N.ground if v not in X]
            assert tb.lift(tb.tutte_restrict(N, rest)) == cg.delete(L, X)
            assert tb.lift(tb.tutte_times(N, rest)) == cg.contract(L, X)


def test_minor_relation_matches_lift():
    small = [N for n in range(4) for N in all_subspaces(2, n)]
    big = all_subspaces(2, 4)
    classes = []
    for N in big:
        if not any(tb.tutte_isomorphic(N, R) for R in classes):
            classes.append(N)
    found = 0
    for A in small:
        for B in classes:
            hit = tb.tutte_minor_embedding(A, B)
            assert (hit is not None) == (cg.minor_embedding(tb.lift(A), tb.lift(B)) is not None)
            if hit is not None:
                S, T, mu = hit
                assert tb.tutte_minor(B, S, T).reorder([mu[v] for v in A.ground]).relabel(
                    {mu[v]: v for v in A.ground}) == A
                found += 1
    assert found > 100


def test_connectivity_shift():
    for N in SMALL:
        M = tb.matroid_from(N)
        L = tb.lift(N)
        for X in subsets(N.ground):
            assert tb.matroid_connectivity(M, X) == cg.connectivity(L, X) + 1


def test_matroid_connectivity_examples():
    M = tb.matroid_from(U12)
    assert tb.matroid_connectivity(M, []) == 1
    assert tb.matroid_connectivity(M, ["a"]) == 2
    free = tb.matroid_from(tb.tutte_span(labels(3), F2, []))
    assert all(tb.matroid_connectivity(free, X) == 1 for X in subsets(labels(3)))


def test_matroid_branch_width_examples():
    assert tb.matroid_branch_width(tb.matroid_from(tb.tutte_span(["a"], F2, []))).width == 1
    assert tb.matroid_branch_width(tb.matroid_from(U12)).width == 2
    assert tb.matroid_branch_width(tb.matroid_from(tb.tutte_span(labels(3), F2, []))).width == 1


def test_width_shift():
    rng = np.random.default_rng(0)
    cases = list(SMALL)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        cases.append(tb.tutte_span(labels(n), F3, rng.integers(0, 3, size=(int(rng.integers(0, n + 1)), n))))
    for N in cases:
        mbw = tb.matroid_branch_width(tb.matroid_from(N)).width
        assert mbw == w.branch_width(tb.lift(N)).width + 1


# --- text format ------------------------------------------------------------------------------

def test_tutte_text_roundtrip():
    text = tb.format_tutte(U12)
    assert text == "field 2\nkind tutte\nelements a b\nrow r1: 1 1\n"
    assert tb.parse_tutte(text) == U12
    with pytest.raises(ParseError):
        tb.parse_tutte("field 2\nkind skew\nelements a\nrow a: 0\n")
    with pytest.raises(ParseError):
        tb.parse_tutte("field 6\nkind tutte\nelements a\nrow r1: 1\n")
