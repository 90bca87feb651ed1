from pathlib import Path

import networkx as nx
import numpy as np
import pytest
from support import labels, leibniz_det, random_matrix

from pivotlab import chaingroup as cg
from pivotlab import containment as ct
from pivotlab import deltamatroid as dm
from pivotlab import fmatrix as fm
from pivotlab import widths as w
from pivotlab.errors import CapExceeded, GroundSetTooLarge, KindMismatch
from pivotlab.gf import field

DATA = Path(__file__).parent / "data"
F2 = field(2)
P3 = fm.adjacency_matrix(labels(3), [("1", "2"), ("2", "3")])
K1 = fm.zero_matrix(["z"])


def verify_witness(small, big, wit):
    """Check a containment witness directly: nonsingular block, disjoint sets, isomorphism."""
    A, X, mu = list(wit.A_set), list(wit.X_set), wit.bijection
    assert not set(A) & set(X)
    idx = [big.ground.index(v) for v in A]
    assert leibniz_det(big.field, big.entries[np.ix_(idx, idx)]) != 0
    sub = fm.principal(fm.schur(big, A), X)
    assert sorted(mu) == sorted(small.ground) and sorted(mu.values()) == sorted(X)
    for i in small.ground:
        for j in small.ground:
            assert small[i, j] == sub[mu[i], mu[j]]


# --- Schur minors -------------------------------------------------------------------------

def test_all_schur_minors_examples():
    zero = ct.all_schur_minors(fm.zero_matrix(labels(2)))
    assert [M.n for M, _ in zero] == [0, 1, 2]
    I = fm.LabeledMatrix(labels(2), F2, np.eye(2, dtype=np.int64), "symmetric")
    found = ct.all_schur_minors(I)
    assert [(M.n, M.entries.tolist()) for M, _ in found] == [(0, []), (1, [[1]]), (2, [[1, 0], [0, 1]])]
    forms = {fm.canonical_form(M) for M, _ in ct.all_schur_minors(P3)}
    assert fm.canonical_form(K1) in forms
    assert fm.principal(fm.schur(P3, ["1", "2"]), ["3"]).entries.tolist() == [[0]]


def test_all_schur_minor_witnesses():
    rng = np.random.default_rng(0)
    for q, kind in ((2, "skew"), (3, "symmetric")):
        M = random_matrix(rng, q, kind, 4)
        out = ct.all_schur_minors(M)
        assert len({fm.canonical_form(S) for S, _ in out}) == len(out)
        for S, wit in out:
            verify_witness(S, M, wit)


def test_schur_minor_cap():
    with pytest.raises(GroundSetTooLarge):
        ct.all_schur_minors(fm.zero_matrix(labels(9)))


# --- containment queries --------------------------------------------------------------------

def test_pivot_minor_contained_examples():
    wit = ct.pivot_minor_contained(P3, P3)
    assert (wit.A_set, wit.X_set) == ((), ("1", "2", "3"))
    assert wit.bijection == {"1": "1", "2": "2", "3": "3"}
    wit = ct.pivot_minor_contained(K1, P3)
    assert wit.to_dict() == {"A": [], "X": ["1"], "bijection": {"z": "1"}}
    K2 = fm.adjacency_matrix(["a", "b"], [("a", "b")])
    assert ct.pivot_minor_contained(P3, K2) is None
    with pytest.raises(KindMismatch):
        ct.pivot_minor_contained(fm.zero_matrix(["a"], kind="symmetric"), P3)


def test_witnesses_verify():
    rng = np.random.default_rng(1)
    hits = 0
    for q, kind in ((2, "skew"), (3, "skew"), (3, "symmetric")):
        for _ in range(20):
            n = int(rng.integers(0, 3))
            A = random_matrix(rng, q, kind, n, ground=["x", "y"][:n])
            B = random_matrix(rng, q, kind, 4)
            wit = ct.pivot_minor_contained(A, B)
            if wit is not None:
                verify_witness(A, B, wit)
                hits += 1
    assert hits > 10


def test_graph_pivot_minor():
    c5 = nx.cycle_graph(5)
    p4 = nx.path_graph(4)
    assert ct.graph_pivot_minor(c5, p4) is None
    assert ct.graph_pivot_minor(p4, c5) is not None
    assert ct.graph_pivot_minor((["v"], []), P3) is not None
    wit = ct.graph_pivot_minor(P3, P3)
    assert wit.A_set == () and wit.bijection == {"1": "1", "2": "2", "3": "3"}


# --- order properties on small universes ------------------------------------------------------

def containment_table(universe):
    return [[ct.pivot_minor_contained(a, b) is not None for b in universe] for a in universe]


def test_reflexive_transitive_and_width_monotone():
    U = ct.universe_upto(2, "skew", 4)
    T = containment_table(U)
    widths = [w.rank_width(M).width for M in U]
    m = len(U)
    for i in range(m):
        assert T[i][i]
        for j in range(m):
            if T[i][j]:
                assert widths[i] <= widths[j]
                assert all(T[i][k] for k in range(m) if T[j][k])


@pytest.mark.parametrize("q,kind,n", [(2, "skew", 4), (2, "symmetric", 3), (3, "skew", 3)])
def test_matrix_and_chain_group_containment_agree(q, kind, n):
    U = ct.universe_upto(q, kind, n)
    for a in U:
        for b in U:
            if a.n > b.n:
                continue
            wit = ct.pivot_minor_contained(a, b)
            emb = cg.minor_embedding(cg.from_matrix(a), cg.from_matrix(b))
            assert (wit is None) == (emb is None)


def test_containment_implies_delta_matroid_minor():
    U = ct.universe_upto(2, "symmetric", 3)
    for a in U:
        for b in U:
            if ct.pivot_minor_contained(a, b) is not None:
                assert dm.dm_minor_contained(dm.from_matrix(a), dm.from_matrix(b)) is not None


def test_universe_counts():
    # labeled simple graphs up to isomorphism on 0..4 vertices
    assert [len(ct.matrix_universe(2, "skew", n)) for n in range(5)] == [1, 1, 2, 4, 11]
    assert len(ct.matrix_universe(2, "skew", 3, dedupe=False)) == 8
    assert len(ct.matrix_universe(3, "symmetric", 1)) == 3


# --- the quasi-order report ---------------------------------------------------------------------

def test_report_on_repeated_matrix():
    r = ct.quasi_order_report([P3, P3])
    assert r["table"] == [[1, 1], [1, 1]]
    assert r["edges"] == [[0, 1], [1, 0]]


def test_report_golden_file():
    report = ct.quasi_order_report(ct.universe_upto(2, "skew", 3))
    golden = (DATA / "quasi_order_n3_skew_gf2.json").read_text()
    assert ct.report_json(report) == golden


def test_report_antichains_are_maximal():
    U = ct.universe_upto(2, "skew", 3)
    r = ct.quasi_order_report(U)
    T = r["table"]
    for chain in r["antichains"]:
        for i in chain:
            for j in chain:
                assert i == j or not (T[i][j] or T[j][i])
        for k in range(len(U)):
            if k not in chain:
                assert any(T[k][i] or T[i][k] for i in chain)


def test_greedy_antichains_for_long_lists():
    U = ct.universe_upto(2, "skew", 4)
    r = ct.quasi_order_report(U, exact_limit=5)
    assert r["antichain_method"] == "greedy"
    T = r["table"]
    exact = ct.quasi_order_report(U)["antichains"]
    assert all(chain in exact for chain in r["antichains"])
    for chain in r["antichains"]:
        assert all(i == j or not (T[i][j] or T[j][i]) for i in chain for j in chain)
        assert all(any(T[k][i] or T[i][k] for i in chain) for k in range(len(U)) if k not in chain)
    with pytest.raises(CapExceeded):
        ct.quasi_order_report(U, max_items=10)
