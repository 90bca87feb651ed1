"""Decomposition trees, cut functions, exact rank-width and branch-width.

Subsets of the ground set are bitmasks: bit i stands for ``ground[i]``.
The exact width comes from a subset DP rooted at the leaf of the last ground
element; a second, naive enumerator of all leaf-labeled cubic trees is kept as
an oracle for small inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import caps, linalg
from .errors import ExhaustionFailure, MalformedTree
from .fmatrix import LabeledMatrix, label_list


# --- cut functions -------------------------------------------------------------

class CutFunction:
    """A memoized set function on subsets of ``ground`` given by bitmask."""

    def __init__(self, ground, fn: Callable[[int], object]):
        self.ground = tuple(str(v) for v in ground)
        self._fn = fn
        self._memo: dict[int, object] = {}

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __call__(self, mask: int):
        try:
            return self._memo[mask]
        except KeyError:
            v = self._memo[mask] = self._fn(mask)
            return v

    def mask(self, labels) -> int:
        pos = {v: i for i, v in enumerate(self.ground)}
        m = 0
        for x in label_list(labels):
            if x not in pos:
                from .errors import UnknownLabel
                raise UnknownLabel(f"unknown label {x!r}")
            m |= 1 << pos[x]
        return m

    def labels(self, mask: int) -> tuple:
        return tuple(v for i, v in enumerate(self.ground) if mask >> i & 1)

    def value(self, labels):
        return self(self.mask(labels))

    def table(self) -> list:
        return [self(m) for m in range(1 << self.n)]


def cut_rank(M: LabeledMatrix, X) -> int:
    """Rank of M[X, V - X]."""
    ix = M.indices(X)
    rest = [i for i in range(M.n) if i not in set(ix)]
    if not ix or not rest:
        return 0
    return linalg.rank(M.field, M.entries[np.ix_(ix, rest)])


def cut_rank_function(M: LabeledMatrix) -> CutFunction:
    F, E, n = M.field, M.entries, M.n

    def fn(mask):
        ix = [i for i in range(n) if mask >> i & 1]
        rest = [i for i in range(n) if not mask >> i & 1]
        if not ix or not rest:
            return 0
        return linalg.rank(F, E[np.ix_(ix, rest)])

    return CutFunction(M.ground, fn)


def connectivity_function(N) -> CutFunction:
    from .chaingroup import connectivity_oracle
    return CutFunction(N.ground, connectivity_oracle(N))


def as_cut_function(obj) -> CutFunction:
    if isinstance(obj, CutFunction):
        return obj
    if isinstance(obj, LabeledMatrix):
        return cut_rank_function(obj)
    from .chaingroup import ChainGroup
    if isinstance(obj, ChainGroup):
        return connectivity_function(obj)
    raise TypeError(f"cannot build a cut function from {type(obj).__name__}")


# --- trees ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionTree:
    """A subcubic tree whose degree-at-most-1 nodes are exactly the labeled leaves."""

    nodes: tuple
    edges: tuple
    leaf_map: dict = dc_field(hash=False)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        edges = tuple(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "leaf_map", {str(k): v for k, v in self.leaf_map.items()})
        self.validate()

    def validate(self):
        nodes = set(self.nodes)
        if len(nodes) != len(self.nodes):
            raise MalformedTree("duplicate nodes")
        adj = {v: [] for v in self.nodes}
        for u, v in self.edges:
            if u not in nodes or v not in nodes or u == v:
                raise MalformedTree(f"bad edge ({u}, {v})")
            adj[u].append(v)
            adj[v].append(u)
        if len(set(self.edges)) != len(self.edges):
            raise MalformedTree("parallel edges")
        if nodes and len(self.edges) != len(nodes) - 1:
            raise MalformedTree("a tree on m nodes has m - 1 edges")
        if nodes:
            seen = {self.nodes[0]}
            stack = [self.nodes[0]]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen != nodes:
                raise MalformedTree("tree is not connected")
        if any(len(a) > 3 for a in adj.values()):
            raise MalformedTree("a node has degree above 3")
        leaves = {v for v, a in adj.items() if len(a) <= 1}
        images = list(self.leaf_map.values())
        if len(set(images)) != len(images) or set(images) != leaves:
            raise MalformedTree("leaf map must be a bijection onto the degree-1 nodes")

    @property
    def ground(self) -> tuple:
        return tuple(self.leaf_map)

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def edge_sides(self, ground) -> dict:
        """Edge -> bitmask of the leaves on the side of the edge's first node."""
        pos = {v: i for i, v in enumerate(ground)}
        if set(pos) != set(self.leaf_map):
            raise MalformedTree("tree leaves do not match the ground set")
        leafbit = {node: 1 << pos[lab] for lab, node in self.leaf_map.items()}
        adj = self.adjacency()
        out = {}
        for u, v in self.edges:
            mask = 0
            seen = {u, v}
            stack = [u]
            while stack:
                x = stack.pop()
                mask |= leafbit.get(x, 0)
                for w in adj[x]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            out[(u, v)] = mask
        return out

    def serialize(self, ground=None) -> str:
        return serialize_tree(self, ground)


def serialize_tree(tree: DecompositionTree, ground=None) -> str:
    """Nested groups rooted at the leaf of the last ground element.

    Children are ordered by their least ground position, e.g. ``((1 2) 3)``.
    """
    ground = tuple(ground) if ground is not None else tree.ground
    if not ground:
        return "()"
    pos = {v: i for i, v in enumerate(ground)}
    label_of = {node: lab for lab, node in tree.leaf_map.items()}
    if len(ground) == 1:
        return ground[0]
    adj = tree.adjacency()
    root = tree.leaf_map[ground[-1]]

    def render(node, parent):
        if node in label_of:
            return label_of[node], pos[label_of[node]]
        kids = [render(w, node) for w in adj[node] if w != parent]
        kids.sort(key=lambda t: t[1])
        return "(" + " ".join(k[0] for k in kids) + ")", min(k[1] for k in kids)

    body, _ = render(adj[root][0], root)
    return f"({body} {ground[-1]})"


def parse_tree(text: str) -> DecompositionTree:
    """Inverse of :func:`serialize_tree`."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise MalformedTree("empty tree string")
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise MalformedTree("unbalanced parentheses")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise MalformedTree("unexpected ')'")
        if tok != "(":
            return tok
        items = []
        while pos < len(tokens) and tokens[pos] != ")":
            items.append(read())
        if pos >= len(tokens):
            raise MalformedTree("unbalanced parentheses")
        pos += 1
        return items

    expr = read()
    if pos != len(tokens):
        raise MalformedTree("trailing input after tree")
    nodes, edges, leaf_map = [], [], {}

    def build(e):
        nid = len(nodes)
        nodes.append(nid)
        if isinstance(e, str):
            if e in leaf_map:
                raise MalformedTree(f"label {e!r} appears twice")
            leaf_map[e] = nid
            return nid
        for child in e:
            edges.append((nid, build(child)))
        return nid

    if isinstance(expr, list) and len(expr) == 2:
        a, b = build(expr[0]), build(expr[1])
        edges.append((a, b))
    elif isinstance(expr, list) and len(expr) == 0:
        pass
    else:
        build(expr)
    return DecompositionTree(tuple(nodes), tuple(edges), leaf_map)


def _tree_from_nested(ground, nested) -> DecompositionTree:
    """Build a tree from a rooted structure over ground indices plus the last leaf."""
    nodes, edges, leaf_map = [], [], {}

    def build(e):
        nid = len(nodes)
        nodes.append(nid)
        if isinstance(e, int):
            leaf_map[ground[e]] = nid
            return nid
        for child in e:
            edges.append((nid, build(child)))
        return nid

    a = build(nested)
    b = build(len(ground) - 1)
    edges.append((a, b))
    return DecompositionTree(tuple(nodes), tuple(edges), dict(sorted(leaf_map.items(),
                                                                    key=lambda kv: ground.index(kv[0]))))


def trivial_tree(ground) -> DecompositionTree:
    ground = label_list(ground)
    if not ground:
        return DecompositionTree((), (), {})
    return DecompositionTree((0,), (), {ground[0]: 0})


def enumerate_trees(ground) -> Iterator[DecompositionTree]:
    """Every cubic tree with leaves labeled by ``ground``, by leaf insertion.

    Leaf k is inserted into each edge of a tree on the first k leaves, edges in
    list order; the output order is lexicographic in the insertion choices.
    """
    ground = label_list(ground)
    n = len(ground)
    if n <= 1:
        yield trivial_tree(ground)
        return
    leaf_map = {v: i for i, v in enumerate(ground)}

    def rec(k, edges, nxt):
        if k == n:
            yield DecompositionTree(tuple(range(nxt)), tuple(edges), leaf_map)
            return
        for j, (u, v) in enumerate(edges):
            w = nxt
            new = edges[:j] + [(u, w), (w, v)] + edges[j + 1:] + [(k, w)]
            yield from rec(k + 1, new, nxt + 1)

    # leaves are nodes 0..n-1, internal nodes are numbered from n upward
    yield from rec(2, [(0, 1)], n)


# --- width reports -----------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    return int(x)


@dataclass(frozen=True)
class WidthReport:
    width: object
    per_edge: dict
    tree: DecompositionTree
    ground: tuple = ()

    def tree_string(self) -> str:
        return serialize_tree(self.tree, self.ground or None)

    def to_dict(self) -> dict:
        ground = self.ground or self.tree.ground
        sides = self.tree.edge_sides(ground) if self.tree.edges else {}
        edges = []
        last = 1 << (len(ground) - 1) if ground else 0
        for e, w in self.per_edge.items():
            m = sides[e]
            if m & last:
                m = ((1 << len(ground)) - 1) ^ m
            edges.append({"split": [v for i, v in enumerate(ground) if m >> i & 1],
                          "width": _jsonable(w)})
        edges.sort(key=lambda d: (len(d["split"]), [ground.index(v) for v in d["split"]]))
        return {"width": _jsonable(self.width), "edges": edges, "tree": self.tree_string()}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def decomposition_width(cut, tree: DecompositionTree, ground=None) -> WidthReport:
    """Width of each edge of ``tree`` under ``cut`` and their maximum."""
    cut = as_cut_function(cut)
    ground = tuple(ground) if ground is not None else cut.ground
    if set(tree.leaf_map) != set(ground) or len(tree.leaf_map) != len(ground):
        raise MalformedTree("tree leaves do not match the ground set")
    sides = tree.edge_sides(ground)
    per_edge = {e: cut(m) for e, m in sides.items()}
    width = max(per_edge.values(), default=0)
    return WidthReport(width, per_edge, tree, tuple(ground))


def _ascending_submasks(rest: int):
    sub = 0
    while True:
        yield sub
        if sub == rest:
            return
        sub = ((sub | ~rest) + 1) & rest


def optimal_width(cut, max_n: int | None = None) -> WidthReport:
    """Exact minimum width over all decomposition trees, by subset DP."""
    cut = as_cut_function(cut)
    n = cut.n
    caps.check(n, caps.WIDTH, max_n)
    if n <= 1:
        return decomposition_width(cut, trivial_tree(cut.ground))
    low_full = (1 << (n - 1)) - 1
    best: dict[int, object] = {}
    split: dict[int, int] = {}
    for X in sorted(range(1, low_full + 1), key=lambda m: (bin(m).count("1"), m)):
        cx = cut(X)
        if X & (X - 1) == 0:
            best[X] = cx
            continue
        low = X & -X
        rest = X ^ low
        bval, bs = None, None
        for sub in _ascending_submasks(rest):
            if sub == rest:
                break
            S = sub | low
            v = max(best[S], best[X ^ S])
            if bval is None or v < bval:
                bval, bs = v, S
        best[X] = max(cx, bval)
        split[X] = bs

    def nested(X):
        if X & (X - 1) == 0:
            return X.bit_length() - 1
        S = split[X]
        return [nested(S), nested(X ^ S)]

    tree = _tree_from_nested(list(cut.ground), nested(low_full))
    report = decomposition_width(cut, tree)
    if report.width != best[low_full]:
        raise ExhaustionFailure("DP value and its witness tree disagree")
    return report


def naive_width(cut) -> object:
    """Minimum width over every tree from :func:`enumerate_trees` (small n only)."""
    cut = as_cut_function(cut)
    return min(decomposition_width(cut, t).width for t in enumerate_trees(cut.ground))


def rank_width(M: LabeledMatrix, max_n: int | None = None) -> WidthReport:
    return optimal_width(cut_rank_function(M), max_n)


def branch_width(N, max_n: int | None = None) -> WidthReport:
    return optimal_width(connectivity_function(N), max_n)


# --- linkedness ---------------------------------------------------------------------

def _edge_pair_sides(a: int, b: int, full: int):
    """Far sides (F, G) of two distinct edges given one side mask of each."""
    cands = [(f, g) for f in (a, full ^ a) for g in (b, full ^ b) if not f & g]
    proper = [c for c in cands if c[0] | c[1] != full]
    return (proper or cands)[0]


def is_linked(N, tree: DecompositionTree) -> bool:
    """Whether every pair of edges attains the linking minimum along its path."""
    return _is_linked(connectivity_function(N), tree, {})


def _is_linked(cut: CutFunction, tree: DecompositionTree, memo: dict) -> bool:
    from .linking import min_side_masks
    sides = tree.edge_sides(cut.ground)
    full = cut.full
    widths = {e: cut(m) for e, m in sides.items()}
    edges = list(sides)
    for i, f in enumerate(edges):
        for g in edges[i + 1:]:
            Fm, Gm = _edge_pair_sides(sides[f], sides[g], full)
            path_min = min(widths[e] for e, m in sides.items()
                           if (Fm & ~m == 0 and Gm & m == 0) or (Fm & m == 0 and Gm & ~m == 0))
            key = (Fm, Gm)
            if key not in memo:
                memo[key] = min_side_masks(cut, Fm, Gm)[0]
            if path_min != memo[key]:
                return False
    return True


def find_linked_decomposition(N, max_n: int | None = None) -> DecompositionTree:
    """A width-optimal linked branch-decomposition.

    The DP witness is tried first, then every tree in :func:`enumerate_trees`
    order whose width is optimal.
    """
    caps.check(N.n, caps.LINKED, max_n)
    cut = connectivity_function(N)
    opt = optimal_width(cut, max_n=max(N.n, 1))
    memo: dict = {}
    if _is_linked(cut, opt.tree, memo):
        return opt.tree
    for t in enumerate_trees(cut.ground):
        if decomposition_width(cut, t).width == opt.width and _is_linked(cut, t, memo):
            return t
    raise ExhaustionFailure("no linked optimal branch-decomposition found")
