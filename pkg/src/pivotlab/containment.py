"""Pivot-minor containment of matrices and a small quasi-order harness.

M1 is contained in M2 when M1 is isomorphic to a principal submatrix of a
Schur complement M2 / M2[A] for some nonsingular principal block A.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import caps, linalg
from .errors import CapExceeded, KindMismatch
from .fmatrix import (LabeledMatrix, MatrixKind, adjacency_matrix,
                      canonical_entries, canonical_form, canonical_matrix,
                      isomorphic, principal, schur)
from .gf import field as _field


@dataclass(frozen=True)
class ContainmentWitness:
    A_set: tuple
    X_set: tuple
    bijection: dict

    def to_dict(self) -> dict:
        return {"A": list(self.A_set), "X": list(self.X_set),
                "bijection": {k: v for k, v in self.bijection.items()}}


def _nonsingular_blocks(M: LabeledMatrix):
    F, E, n = M.field, M.entries, M.n
    for k in range(n + 1):
        for idx in itertools.combinations(range(n), k):
            if linalg.det(F, E[np.ix_(idx, idx)]) != 0:
                yield list(idx)


def _lex_subsets(items):
    """All subsets in lexicographic order of their element sequences."""
    items = list(items)

    def rec(start, prefix):
        yield list(prefix)
        for i in range(start, len(items)):
            prefix.append(items[i])
            yield from rec(i + 1, prefix)
            prefix.pop()

    yield from rec(0, [])


def all_schur_minors(M: LabeledMatrix, max_n: int | None = None):
    """Every (M / M[A])[X] up to isomorphism, first occurrence kept.

    A runs over nonsingular blocks by (size, position) and X over subsets of
    the rest in lexicographic order.
    """
    caps.check(M.n, caps.MINOR_SEARCH, max_n)
    seen = set()
    out = []
    for idx in _nonsingular_blocks(M):
        A = [M.ground[i] for i in idx]
        S = schur(M, A)
        for X in _lex_subsets(S.ground):
            sub = principal(S, X)
            key = (sub.n, canonical_entries(sub))
            if key in seen:
                continue
            seen.add(key)
            out.append((sub, ContainmentWitness(tuple(A), tuple(X), {x: x for x in X})))
    return out


def _entry_profile(M: LabeledMatrix):
    return (M.n, tuple(sorted(M.entries.ravel().tolist())))


def pivot_minor_contained(M1: LabeledMatrix, M2: LabeledMatrix,
                          max_n: int | None = None) -> ContainmentWitness | None:
    """First witness (A, X, bijection) in (size, position) / lexicographic order."""
    if M1.field != M2.field or M1.kind != M2.kind:
        raise KindMismatch("containment compares matrices of one field and kind")
    caps.check(M2.n, caps.MINOR_SEARCH, max_n)
    n1 = M1.n
    if n1 > M2.n:
        return None
    prof = _entry_profile(M1)
    for idx in _nonsingular_blocks(M2):
        if M2.n - len(idx) < n1:
            break
        A = [M2.ground[i] for i in idx]
        S = schur(M2, A)
        for X in itertools.combinations(S.ground, n1):
            sub = principal(S, X)
            if _entry_profile(sub) != prof:
                continue
            mu = isomorphic(M1, sub)
            if mu is not None:
                return ContainmentWitness(tuple(A), tuple(X), mu)
    return None


def _graph_matrix(G) -> LabeledMatrix:
    if isinstance(G, LabeledMatrix):
        return G
    if hasattr(G, "nodes") and hasattr(G, "edges"):
        return adjacency_matrix(list(G.nodes), list(G.edges))
    vertices, edges = G
    return adjacency_matrix(vertices, edges)


def graph_pivot_minor(G1, G2, max_n: int | None = None) -> ContainmentWitness | None:
    """Pivot-minor test for simple graphs via their GF(2) adjacency matrices."""
    return pivot_minor_contained(_graph_matrix(G1), _graph_matrix(G2), max_n)


# --- universes and the quasi-order report ------------------------------------------

def matrix_universe(q: int, kind, n: int, dedupe: bool = True) -> list[LabeledMatrix]:
    """All matrices of one kind over GF(q) on labels 1..n, optionally one per iso class.

    Deduplicated output uses canonical representatives sorted by entry string.
    """
    F = _field(q)
    kind = MatrixKind.parse(kind)
    labels = [str(i + 1) for i in range(n)]
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    diag = list(range(n)) if kind is MatrixKind.SYMMETRIC else []
    out = {}
    for vals in itertools.product(range(q), repeat=len(upper) + len(diag)):
        E = np.zeros((n, n), dtype=np.int64)
        for (i, j), v in zip(upper, vals):
            E[i, j] = v
            E[j, i] = v if kind is MatrixKind.SYMMETRIC else F.neg(v)
        for i, v in zip(diag, vals[len(upper):]):
            E[i, i] = v
        M = LabeledMatrix(tuple(labels), F, E, kind)
        if dedupe:
            M = canonical_matrix(M)
            out.setdefault(M.entries.tobytes(), M)
        else:
            out[len(out)] = M
    items = list(out.values())
    if dedupe:
        items.sort(key=lambda M: tuple(M.entries.ravel().tolist()))
    return items


def universe_upto(q: int, kind, n_max: int) -> list[LabeledMatrix]:
    out = []
    for n in range(n_max + 1):
        out += matrix_universe(q, kind, n)
    return out


def _maximal_antichains(incomparable: list[list[bool]]) -> list[list[int]]:
    import networkx as nx
    m = len(incomparable)
    G = nx.Graph()
    G.add_nodes_from(range(m))
    G.add_edges_from((i, j) for i in range(m) for j in range(i + 1, m) if incomparable[i][j])
    return [sorted(c) for c in nx.find_cliques(G)]


def _greedy_antichains(incomparable: list[list[bool]]) -> list[list[int]]:
    m = len(incomparable)
    found = set()
    for start in range(m):
        chosen = [start]
        for j in range(m):
            if j != start and all(incomparable[j][c] for c in chosen):
                chosen.append(j)
        found.add(tuple(sorted(chosen)))
    return [list(c) for c in found]


def quasi_order_report(matrices, max_items: int = 200, max_n: int | None = None,
                       exact_limit: int = 20) -> dict:
    """Pairwise containment table, comparability edges and maximal antichains."""
    matrices = list(matrices)
    if len(matrices) > max_items:
        raise CapExceeded(f"{len(matrices)} matrices exceed the limit of {max_items}")
    m = len(matrices)
    table = [[pivot_minor_contained(a, b, max_n) is not None for b in matrices] for a in matrices]
    incomparable = [[i != j and not table[i][j] and not table[j][i] for j in range(m)]
                    for i in range(m)]
    if m <= exact_limit:
        chains = _maximal_antichains(incomparable)
        method = "exact"
    else:
        chains = _greedy_antichains(incomparable)
        method = "greedy"
    chains.sort(key=lambda c: (-len(c), c))
    return {
        "nodes": [canonical_form(M) for M in matrices],
        "table": [[int(x) for x in row] for row in table],
        "edges": [[i, j] for i in range(m) for j in range(m) if i != j and table[i][j]],
        "antichains": chains,
        "antichain_method": method,
    }


def report_json(report: dict, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
