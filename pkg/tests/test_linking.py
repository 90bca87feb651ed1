import itertools

import numpy as np
import pytest
from support import brute_connectivity, labels, random_isotropic, random_lagrangian, subsets

from pivotlab import chaingroup as cg
from pivotlab import fmatrix as fm
from pivotlab import linking as lk
from pivotlab.errors import GapTooLarge, NotIsotropic, PreconditionFailed

P3 = cg.from_matrix(fm.adjacency_matrix(labels(3), [("1", "2"), ("2", "3")]))
# path 1-2-3 and a separate edge 4-5
TWO_BLOCKS = cg.from_matrix(fm.adjacency_matrix(labels(5), [("1", "2"), ("2", "3"), ("4", "5")]))


def brute_min(N, X, Y):
    gap = [v for v in N.ground if v not in set(X) | set(Y)]
    return min(brute_connectivity(N, set(X) | set(S)) for S in subsets(gap))


def brute_max(N, X, Y):
    gap = [v for v in N.ground if v not in set(X) | set(Y)]
    best = None
    for U in subsets(gap):
        W = [v for v in gap if v not in U]
        M = cg.minor(N, W, U)
        val = brute_connectivity(M, [v for v in M.ground if v in X])
        best = val if best is None else max(best, val)
    return best


def random_pair(rng, ground):
    side = rng.integers(0, 3, size=len(ground))
    X = [v for v, s in zip(ground, side) if s == 1]
    Y = [v for v, s in zip(ground, side) if s == 2]
    return X, Y


# --- examples ------------------------------------------------------------------------------

def test_min_side_examples():
    assert lk.min_side(P3, [], []) == (0, ())
    assert lk.min_side(P3, ["1"], ["3"]) == (1, ("1",))
    assert lk.min_side(TWO_BLOCKS, ["1"], ["4"]) == (0, ("1", "2", "3"))


def test_max_side_examples():
    assert lk.max_side(P3, ["1", "2"], ["3"]) == (1, (), ())
    k, U, W = lk.max_side(P3, ["1"], ["3"])
    assert k == 1 and (U, W) == ((), ("2",))
    assert lk.max_side(TWO_BLOCKS, ["1"], ["4"])[0] == 0


def test_linking_result_shape():
    r = lk.linking_equal(P3, ["1"], ["3"])
    assert r.value == 1
    assert r.to_dict() == {"value": 1, "min_witness": ["1"],
                           "max_witness": {"delete": [], "contract": ["2"]}}
    assert lk.linking_equal(P3, ["1"], ["3"], mode="inductive").value == 1


def test_linking_argument_errors():
    with pytest.raises(ValueError):
        lk.min_side(P3, ["1"], ["1"])
    with pytest.raises(ValueError):
        lk.linking_equal(P3, ["1"], ["3"], mode="fast")
    with pytest.raises(GapTooLarge):
        lk.min_side(P3, [], [], max_gap=2)
    half = cg.span([cg.Chain.constant(["u", "v"], P3.field, (1, 0))], cg.FormKind.MINUS)
    with pytest.raises(NotIsotropic):
        lk.linking_equal(half, ["u"], ["v"])


# --- the min-max identity ----------------------------------------------------------------

@pytest.mark.parametrize("q,form", [(2, "b-"), (2, "b+"), (3, "b-"), (3, "b+")])
def test_min_equals_max_against_brute_force(q, form):
    rng = np.random.default_rng(q * 10 + len(form))
    for _ in range(10):
        N = random_lagrangian(rng, q, form, int(rng.integers(1, 6)))
        for _ in range(4):
            X, Y = random_pair(rng, N.ground)
            expected = brute_min(N, X, Y)
            assert expected == brute_max(N, X, Y)
            r = lk.linking_equal(N, X, Y)
            assert r.value == expected
            Z = set(r.min_witness)
            assert set(X) <= Z and not Z & set(Y)
            U, W = r.max_witness
            gap = {v for v in N.ground if v not in set(X) | set(Y)}
            assert set(U) | set(W) == gap and not set(U) & set(W)


def test_min_witness_is_least():
    rng = np.random.default_rng(11)
    for _ in range(20):
        N = random_lagrangian(rng, 2, "b-", 5)
        X, Y = random_pair(rng, N.ground)
        k, Z = lk.min_side(N, X, Y)
        gap = [v for v in N.ground if v not in set(X) | set(Y)]
        first = None
        for S in subsets(gap):
            cand = set(X) | set(S)
            if brute_connectivity(N, cand) == k:
                key = (len(cand), sorted(N.ground.index(v) for v in cand))
                first = key if first is None or key < first else first
        assert (len(Z), [N.ground.index(v) for v in Z]) == first


def test_inductive_mode_agrees():
    rng = np.random.default_rng(12)
    for q in (2, 3):
        for _ in range(25):
            N = random_lagrangian(rng, q, "b+" if rng.integers(2) else "b-", int(rng.integers(0, 7)))
            X, Y = random_pair(rng, N.ground)
            a = lk.linking_equal(N, X, Y)
            b = lk.linking_equal(N, X, Y, mode="inductive")
            assert a.value == b.value
            assert cg.connectivity(N, b.min_witness) == b.value
            U, W = b.max_witness
            M = cg.minor(N, W, U)
            assert cg.connectivity(M, [v for v in M.ground if v in X]) == b.value


def test_max_at_most_min_for_isotropic():
    rng = np.random.default_rng(13)
    for q in (2, 3):
        for _ in range(40):
            N = random_isotropic(rng, q, "b+" if rng.integers(2) else "b-", int(rng.integers(1, 5)))
            X, Y = random_pair(rng, N.ground)
            assert lk.max_side(N, X, Y)[0] <= lk.min_side(N, X, Y)[0]


# --- Bixby-type inequality ------------------------------------------------------------------

def test_bixby_empty_sets():
    rng = np.random.default_rng(14)
    for _ in range(10):
        N = random_lagrangian(rng, 3, "b-", 3)
        for v in N.ground:
            assert lk.bixby_holds(N, v, [], [])


def all_bixby_triples(ground):
    for v in ground:
        rest = [u for u in ground if u != v]
        for X in subsets(rest):
            for Y in subsets(rest):
                yield v, X, Y


def test_bixby_full_sweep_on_path():
    assert all(lk.bixby_holds(P3, v, X, Y) for v, X, Y in all_bixby_triples(P3.ground))


def test_bixby_random_instances():
    rng = np.random.default_rng(15)
    for q in (2, 3):
        for _ in range(4):
            N = random_lagrangian(rng, q, "b+" if rng.integers(2) else "b-", 4)
            assert all(lk.bixby_holds(N, v, X, Y) for v, X, Y in all_bixby_triples(N.ground))


def test_bixby_rejects_v_in_sets():
    with pytest.raises(ValueError):
        lk.bixby_holds(P3, "1", ["1"], [])


# --- restriction witness -------------------------------------------------------------------

def test_restriction_witness_examples():
    assert lk.restriction_witness(P3, ["1"], ["1"]) == ((), ())
    C, D = lk.restriction_witness(P3, ["1"], ["1", "2"])
    assert cg.minor(cg.times(P3, ["1", "2"]), C, D) == cg.times(P3, ["1"])
    with pytest.raises(PreconditionFailed):
        lk.restriction_witness(P3, ["1"], ["1", "2", "3"])


def test_restriction_witness_random():
    rng = np.random.default_rng(16)
    found = 0
    for q in (2, 3):
        for _ in range(30):
            N = random_lagrangian(rng, q, "b-", int(rng.integers(1, 6)))
            X, extra = random_pair(rng, N.ground)
            Y = [v for v in N.ground if v in set(X) | set(extra)]
            base = cg.connectivity(N, X)
            dips = any(cg.connectivity(N, set(X) | set(S)) < base
                       for S in subsets([v for v in Y if v not in X]))
            if dips:
                with pytest.raises(PreconditionFailed):
                    lk.restriction_witness(N, X, Y)
                continue
            C, D = lk.restriction_witness(N, X, Y)
            assert sorted(C + D) == sorted(v for v in Y if v not in X)
            assert cg.minor(cg.times(N, Y), C, D) == cg.times(N, X)
            found += 1
    assert found > 10
