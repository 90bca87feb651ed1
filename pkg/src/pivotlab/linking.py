"""Min-max linking for Lagrangian chain-groups.

For disjoint X and Y the minimum of the connectivity over all Z with
X <= Z <= V - Y equals the largest connectivity of X in a minor on X + Y.
Both sides are computed by exhaustive sweeps; an element-by-element recursion
through deletion and contraction is offered as a second route.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import caps
from .chaingroup import (ChainGroup, connectivity, contract, delete,
                         is_lagrangian, minor, times)
from .errors import (ExhaustionFailure, GapTooLarge, InternalConsistencyFailure,
                     NotIsotropic, PreconditionFailed)
from .fmatrix import label_list
from .widths import CutFunction, connectivity_function


@dataclass(frozen=True)
class LinkingResult:
    value: int
    min_witness: tuple
    max_witness: tuple  # (U deleted, W contracted)

    def to_dict(self) -> dict:
        U, W = self.max_witness
        return {"value": int(self.value), "min_witness": list(self.min_witness),
                "max_witness": {"delete": list(U), "contract": list(W)}}


def _order_key(mask: int):
    return (bin(mask).count("1"), [i for i in range(mask.bit_length()) if mask >> i & 1])


def _submasks(free: int):
    sub = 0
    while True:
        yield sub
        if sub == free:
            return
        sub = ((sub | ~free) + 1) & free


def min_side_masks(cut: CutFunction, Xm: int, Ym: int):
    """(min value, least witness mask) over X <= Z <= V - Y; order is (size, position)."""
    free = cut.full & ~(Xm | Ym)
    best, arg = None, None
    for sub in _submasks(free):
        Z = Xm | sub
        v = cut(Z)
        if best is None or v < best or (v == best and _order_key(Z) < _order_key(arg)):
            best, arg = v, Z
    return best, arg


def _sides(N: ChainGroup, X, Y, max_gap):
    Xl, Yl = set(label_list(X)), set(label_list(Y))
    N.indices(Xl | Yl)
    if Xl & Yl:
        raise ValueError("X and Y must be disjoint")
    gap = [v for v in N.ground if v not in Xl | Yl]
    caps.check(len(gap), caps.GAP, max_gap, what="gap V - (X + Y)", error=GapTooLarge)
    return Xl, Yl, gap


def min_side(N: ChainGroup, X, Y, max_gap: int | None = None):
    """``(k, Z)``: least connectivity of a set between X and V - Y, with witness."""
    _sides(N, X, Y, max_gap)
    cut = connectivity_function(N)
    val, Z = min_side_masks(cut, cut.mask(X), cut.mask(Y))
    return val, cut.labels(Z)


def _subsets_by_size(items):
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def max_side(N: ChainGroup, X, Y, max_gap: int | None = None):
    """``(k, U, W)``: largest connectivity of X in N / W \\ U over partitions of the gap.

    U (deleted) runs over subsets of the gap by (size, position); ties keep
    the first.
    """
    Xl, _, gap = _sides(N, X, Y, max_gap)
    best = None
    for U in _subsets_by_size(gap):
        W = tuple(v for v in gap if v not in U)
        M = minor(N, W, U)
        val = connectivity(M, [v for v in M.ground if v in Xl])
        if best is None or val > best[0]:
            best = (val, U, W)
    return best


def _inductive(N: ChainGroup, Xl: set, Yl: set):
    """Returns (k, Z, U, W) by recursion on the first gap element."""
    gap = [v for v in N.ground if v not in Xl | Yl]
    if not gap:
        X = tuple(v for v in N.ground if v in Xl)
        return connectivity(N, X), X, (), ()
    v = gap[0]
    k1, Z1, U1, W1 = _inductive(delete(N, [v]), Xl, Yl)
    k2, Z2, U2, W2 = _inductive(contract(N, [v]), Xl, Yl)
    k = max(k1, k2)
    if k1 >= k2:
        U, W = (v,) + U1, W1
    else:
        U, W = U2, (v,) + W2
    meet = set(Z1) & set(Z2)
    join = set(Z1) | set(Z2) | {v}
    for Z in (meet, join):
        if connectivity(N, Z) <= k:
            order = [x for x in N.ground if x in Z]
            return k, tuple(order), _ordered(N, U), _ordered(N, W)
    raise InternalConsistencyFailure("neither the meet nor the join attains the linking value")


def _ordered(N, S):
    S = set(S)
    return tuple(v for v in N.ground if v in S)


def linking_equal(N: ChainGroup, X, Y, mode: str = "brute", max_gap: int | None = None) -> LinkingResult:
    """Both sides of the linking identity, checked equal."""
    if not is_lagrangian(N):
        raise NotIsotropic("the linking identity is stated for Lagrangian chain-groups")
    Xl, Yl, _ = _sides(N, X, Y, max_gap)
    if mode == "inductive":
        k, Z, U, W = _inductive(N, Xl, Yl)
        if connectivity(N, Z) != k:
            raise InternalConsistencyFailure("inductive min witness has the wrong value")
        M = minor(N, W, U)
        if connectivity(M, [v for v in M.ground if v in Xl]) != k:
            raise InternalConsistencyFailure("inductive max witness has the wrong value")
        return LinkingResult(k, Z, (U, W))
    if mode != "brute":
        raise ValueError("mode must be 'brute' or 'inductive'")
    kmin, Z = min_side(N, X, Y, max_gap)
    kmax, U, W = max_side(N, X, Y, max_gap)
    if kmin != kmax:
        raise InternalConsistencyFailure(f"min side {kmin} differs from max side {kmax}")
    return LinkingResult(kmin, Z, (tuple(U), tuple(W)))


def bixby_holds(N: ChainGroup, v, X, Y) -> bool:
    """lambda_{N\\v}(X) + lambda_{N/v}(Y) >= lambda_N(X & Y) + lambda_N(X | Y | {v}) - 1."""
    v = str(v)
    Xl, Yl = set(label_list(X)), set(label_list(Y))
    if v in Xl | Yl:
        raise ValueError("v must lie outside X and Y")
    N.indices(Xl | Yl | {v})
    lhs = connectivity(delete(N, [v]), Xl) + connectivity(contract(N, [v]), Yl)
    rhs = connectivity(N, Xl & Yl) + connectivity(N, Xl | Yl | {v}) - 1
    return lhs >= rhs


def restriction_witness(N: ChainGroup, X, Y):
    """A partition (C, D) of Y - X with N x X = (N x Y) / C \\ D.

    Requires connectivity(Z) >= connectivity(X) for every X <= Z <= Y; C runs
    over subsets of Y - X by (size, position).
    """
    Xl, Yl = set(label_list(X)), set(label_list(Y))
    N.indices(Yl | Xl)
    if not Xl <= Yl:
        raise ValueError("X must be a subset of Y")
    if not is_lagrangian(N):
        raise NotIsotropic("the restriction witness is stated for Lagrangian chain-groups")
    cut = connectivity_function(N)
    xm, ym = cut.mask(Xl), cut.mask(Yl)
    base = cut(xm)
    for sub in _submasks(ym & ~xm):
        if cut(xm | sub) < base:
            raise PreconditionFailed(
                f"connectivity dips below {base} at {list(cut.labels(xm | sub))}")
    target = times(N, Xl)
    NY = times(N, Yl)
    between = [v for v in N.ground if v in Yl - Xl]
    for C in _subsets_by_size(between):
        D = tuple(v for v in between if v not in C)
        if minor(NY, C, D) == target:
            return tuple(C), D
    raise ExhaustionFailure("no partition realizes the restriction")
