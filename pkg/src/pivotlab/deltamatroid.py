"""Delta-matroids as explicit feasible families over a labeled ground set.

Families are stored as bitmasks (bit i = ground[i]) and listed ordered by
(size, position).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import caps, linalg
from .chaingroup import (Chain, ChainGroup, _pairing_matrix, is_isotropic,
                         supplementary)
from .errors import (EmptyAfterDeletion, EmptyFamily, GroundMismatch,
                     NotADeltaMatroid, NotIsotropic, NotSupplementary,
                     ParseError)
from .fmatrix import LabeledMatrix, label_list


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _set_key(m: int):
    return (_popcount(m), [i for i in range(m.bit_length()) if m >> i & 1])


def check_sea_masks(masks) -> bool:
    """Symmetric exchange: for F, F' feasible and x in F ^ F', some y in F ^ F'
    (possibly x itself) has F ^ {x, y} feasible."""
    fam = set(masks)
    if not fam:
        raise EmptyFamily("a delta-matroid needs at least one feasible set")
    for F in fam:
        for G in fam:
            diff = F ^ G
            d = diff
            while d:
                x = d & -d
                d ^= x
                Fx = F ^ x
                e = diff
                found = False
                while e:
                    y = e & -e
                    e ^= y
                    if (Fx ^ y if y != x else Fx) in fam:
                        found = True
                        break
                if not found:
                    return False
    return True


@dataclass(frozen=True, eq=False)
class DeltaMatroid:
    ground: tuple
    masks: frozenset

    def __post_init__(self):
        ground = tuple(str(v) for v in self.ground)
        if len(set(ground)) != len(ground):
            raise ValueError("duplicate labels in ground set")
        masks = frozenset(int(m) for m in self.masks)
        if not masks:
            raise EmptyFamily("a delta-matroid needs at least one feasible set")
        if any(m >> len(ground) for m in masks):
            raise GroundMismatch("feasible set outside the ground set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "masks", masks)

    @classmethod
    def from_sets(cls, ground, sets, check: bool = True) -> "DeltaMatroid":
        """Build from label sets; ``check=False`` trusts the family and skips the exchange sweep."""
        ground = label_list(ground)
        pos = {v: i for i, v in enumerate(ground)}
        masks = set()
        for S in sets:
            m = 0
            for x in label_list(S):
                if x not in pos:
                    raise GroundMismatch(f"label {x!r} is not in the ground set")
                m |= 1 << pos[x]
            masks.add(m)
        D = cls(tuple(ground), frozenset(masks))
        if check and not check_sea_masks(D.masks):
            raise NotADeltaMatroid("family violates the symmetric exchange axiom")
        return D

    @property
    def n(self) -> int:
        return len(self.ground)

    def mask(self, labels) -> int:
        pos = {v: i for i, v in enumerate(self.ground)}
        m = 0
        for x in label_list(labels):
            if x not in pos:
                from .errors import UnknownLabel
                raise UnknownLabel(f"unknown label {x!r}")
            m |= 1 << pos[x]
        return m

    def labels(self, m: int) -> tuple:
        return tuple(v for i, v in enumerate(self.ground) if m >> i & 1)

    @property
    def feasible(self) -> list[tuple]:
        return [self.labels(m) for m in sorted(self.masks, key=_set_key)]

    def is_feasible(self, labels) -> bool:
        return self.mask(labels) in self.masks

    def __eq__(self, other):
        if not isinstance(other, DeltaMatroid):
            return NotImplemented
        if set(self.ground) != set(other.ground):
            return False
        return {frozenset(s) for s in self.feasible} == {frozenset(s) for s in other.feasible}

    def __hash__(self):
        return hash(frozenset(frozenset(s) for s in self.feasible))

    def __repr__(self):
        sets = ", ".join("{" + ",".join(s) + "}" for s in self.feasible)
        return f"DeltaMatroid({list(self.ground)}, [{sets}])"


def check_sea(family, ground=None) -> bool:
    """SEA on a family of label sets (or a DeltaMatroid)."""
    if isinstance(family, DeltaMatroid):
        return check_sea_masks(family.masks)
    family = [label_list(S) for S in family]
    if not family:
        raise EmptyFamily("the symmetric exchange axiom needs a nonempty family")
    if ground is None:
        ground = sorted({x for S in family for x in S})
    D = DeltaMatroid.from_sets(ground, family, check=False)
    return check_sea_masks(D.masks)


def twist(D: DeltaMatroid, X) -> DeltaMatroid:
    t = D.mask(X)
    return DeltaMatroid(D.ground, frozenset(m ^ t for m in D.masks))


def dm_delete(D: DeltaMatroid, X) -> DeltaMatroid:
    x = D.mask(X)
    keep = [i for i in range(D.n) if not x >> i & 1]
    masks = set()
    for m in D.masks:
        if m & x:
            continue
        masks.add(sum(1 << j for j, i in enumerate(keep) if m >> i & 1))
    if not masks:
        raise EmptyAfterDeletion("no feasible set avoids the deleted elements")
    return DeltaMatroid(tuple(D.ground[i] for i in keep), frozenset(masks))


def dm_minor(D: DeltaMatroid, twist_set=(), delete_set=()) -> DeltaMatroid:
    return dm_delete(twist(D, twist_set), delete_set)


def is_even(D: DeltaMatroid) -> bool:
    return len({_popcount(m) % 2 for m in D.masks}) == 1


def from_matrix(A: LabeledMatrix, max_n: int | None = None) -> DeltaMatroid:
    """Sets indexing nonsingular principal submatrices."""
    caps.check(A.n, caps.ENUMERATION, max_n)
    F, E, n = A.field, A.entries, A.n
    masks = set()
    for m in range(1 << n):
        idx = [i for i in range(n) if m >> i & 1]
        if linalg.det(F, E[np.ix_(idx, idx)]) != 0:
            masks.add(m)
    return DeltaMatroid(A.ground, frozenset(masks))


def from_chaingroup(N: ChainGroup, a: Chain, b: Chain, max_n: int | None = None) -> DeltaMatroid:
    """X is feasible when no nonzero chain of N pairs to zero with a off X and with b on X."""
    if not is_isotropic(N):
        raise NotIsotropic("delta-matroids come from isotropic chain-groups")
    if a.ground != N.ground or b.ground != N.ground:
        raise GroundMismatch("chains must live on the ground of N")
    if not supplementary(N.form, a, b):
        raise NotSupplementary("a and b are not supplementary")
    caps.check(N.n, caps.ENUMERATION, max_n)
    F, n = N.field, N.n
    masks = set()
    A, B = a.pairs, b.pairs
    for m in range(1 << n):
        sel = np.array([(m >> i) & 1 for i in range(n)], dtype=bool)
        c = np.where(sel[:, None], B, A)
        if N.dim == 0 or linalg.rank(F, _pairing_matrix(N, Chain(N.ground, F, c.reshape(-1)))) == N.dim:
            masks.add(m)
    return DeltaMatroid(N.ground, frozenset(masks))


def _remap(masks, positions) -> frozenset:
    """Send bit positions[j] to bit j."""
    out = set()
    for m in masks:
        out.add(sum(1 << j for j, p in enumerate(positions) if m >> p & 1))
    return frozenset(out)


def _profile(masks):
    return sorted(_popcount(m) for m in masks)


def dm_minor_contained(D1: DeltaMatroid, D2: DeltaMatroid, max_n: int | None = None):
    """Search (twist T, deleted set, bijection) with D1 isomorphic to (D2 ^ T) minus the deleted set.

    T runs by (size, position), retained sets lexicographically, bijections
    lexicographically.
    """
    caps.check(D2.n, caps.MINOR_SEARCH, max_n)
    n1, n2 = D1.n, D2.n
    if n1 > n2:
        return None
    target = D1.masks
    prof = _profile(target)
    for T in sorted(range(1 << n2), key=_set_key):
        tw = [m ^ T for m in D2.masks]
        for keep in itertools.combinations(range(n2), n1):
            out = sum(1 << i for i in range(n2) if i not in keep)
            sub = _remap([m for m in tw if not m & out], keep)
            if len(sub) != len(target) or _profile(sub) != prof:
                continue
            for perm in itertools.permutations(range(n1)):
                # D1 element j maps to retained element keep[perm[j]]
                mapped = frozenset(sum(1 << j for j in range(n1) if m >> perm[j] & 1) for m in sub)
                if mapped == target:
                    bij = {D1.ground[j]: D2.ground[keep[perm[j]]] for j in range(n1)}
                    return (D2.labels(T), tuple(D2.ground[i] for i in range(n2) if i not in keep), bij)
    return None


def width_upper_bound(A: LabeledMatrix, max_n: int | None = None):
    """Rank-width of one representing matrix: an upper bound for the delta-matroid width."""
    from .widths import rank_width
    return rank_width(A, max_n).width


# --- text format -------------------------------------------------------------------

def parse_family(text: str) -> DeltaMatroid:
    """One feasible set per line, ``-`` for the empty set; optional ``elements`` header."""
    ground = None
    sets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("elements"):
            ground = line.split()[1:]
            continue
        sets.append((lineno, [] if line == "-" else line.split()))
    if not sets:
        raise ParseError("no feasible sets listed")
    if ground is None:
        ground = []
        for _, S in sets:
            for x in S:
                if x not in ground:
                    ground.append(x)
    for lineno, S in sets:
        bad = [x for x in S if x not in ground]
        if bad:
            raise ParseError(f"element {bad[0]!r} not in the ground set", lineno)
    return DeltaMatroid.from_sets(ground, [S for _, S in sets])


def format_family(D: DeltaMatroid) -> str:
    lines = ["elements " + " ".join(D.ground)]
    lines += [" ".join(S) if S else "-" for S in D.feasible]
    return "\n".join(lines) + "\n"
