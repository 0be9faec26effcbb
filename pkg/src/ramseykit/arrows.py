"""Partition-arrow checking on explicit hypergraphs of copies, small Ramsey
degrees, tangent numbers, and trees of 1-types."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Optional

from .errors import DEFAULT_NODE_CAP, InvalidInput, SearchCapExceeded
from .structures import Structure, enumerate_embeddings


@dataclass(frozen=True)
class ABCHypergraph:
    """Vertices are embeddings of a into c; one hyperedge per embedding of b
    into c, collecting the indices of all a-copies it carries.

    Hyperedges are deduplicated; multiplicities count the b-embeddings that
    produced each edge.
    """

    a: Structure
    b: Structure
    c: Structure
    vertices: tuple
    hyperedges: tuple
    multiplicities: tuple

    def degree(self, vertex_index: int) -> int:
        return sum(1 for e in self.hyperedges if vertex_index in e)


def abc_hypergraph(a: Structure, b: Structure, c: Structure) -> ABCHypergraph:
    vertices = tuple(enumerate_embeddings(a, c))
    index = {e.map: i for i, e in enumerate(vertices)}
    inner = [f.map for f in enumerate_embeddings(a, b)]
    counts: dict[frozenset, int] = {}
    for g in enumerate_embeddings(b, c):
        edge = frozenset(index[g.apply(f)] for f in inner)
        counts[edge] = counts.get(edge, 0) + 1
    edges = sorted(counts, key=lambda e: sorted(e))
    return ABCHypergraph(
        a, b, c, vertices, tuple(edges), tuple(counts[e] for e in edges)
    )


@dataclass(frozen=True)
class ColoringWitness:
    """An r-coloring of the a-copies under which every b-copy sees more than
    t distinct colors (t=1 is a bad coloring for the plain arrow)."""

    colors: int
    assignment: tuple
    t: int = 1
    certifies: str = "bad-coloring"

    def replay(self, h: ABCHypergraph) -> bool:
        if len(self.assignment) != len(h.vertices):
            return False
        if any(not (0 <= col < self.colors) for col in self.assignment):
            return False
        return all(
            len({self.assignment[i] for i in edge}) > self.t
            for edge in h.hyperedges
        )


def _find_spread_coloring(
    h: ABCHypergraph, r: int, t: int, node_cap: int
) -> Optional[tuple]:
    """Lex-least r-coloring giving every hyperedge more than t colors, the
    first vertex pinned to color 0; None when impossible."""
    n = len(h.vertices)
    if any(len(e) <= t for e in h.hyperedges):
        return None
    if n == 0:
        return ()
    edges_by_last = {}
    for edge in h.hyperedges:
        edges_by_last.setdefault(max(edge), []).append(edge)
    assignment = [0] * n
    nodes = 0

    def spread(v: int) -> bool:
        return all(
            len({assignment[i] for i in edge}) > t
            for edge in edges_by_last.get(v, ())
        )

    def walk(v: int) -> bool:
        nonlocal nodes
        if v == n:
            return True
        for color in range(r) if v else (0,):
            nodes += 1
            if nodes > node_cap:
                raise SearchCapExceeded("coloring search exceeded node cap", node_cap)
            assignment[v] = color
            if spread(v) and walk(v + 1):
                return True
        return False

    return tuple(assignment) if walk(0) else None


def check_arrow(
    a: Structure,
    b: Structure,
    c: Structure,
    r: int,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Optional[ColoringWitness]:
    """None when c arrows (b)^a_r; otherwise the lexicographically least bad
    r-coloring of the a-copies in c."""
    if r < 1:
        raise InvalidInput("need at least one color")
    h = abc_hypergraph(a, b, c)
    got = _find_spread_coloring(h, r, 1, node_cap)
    if got is None:
        return None
    return ColoringWitness(r, got)


@dataclass(frozen=True)
class RamseyDegreeReport:
    """Least t making the extended arrow hold, with the coloring defeating
    t-1.  copy_degree divides out the automorphisms of a (informative; the
    embedding count is primary)."""

    t: int
    copy_degree: Fraction
    colors: int
    witness_below: Optional[ColoringWitness] = None


def ramsey_degree_in(
    a: Structure,
    b: Structure,
    c: Structure,
    r: int,
    node_cap: int = DEFAULT_NODE_CAP,
) -> RamseyDegreeReport:
    """Exact minimal t with: every r-coloring admits a b-copy seeing at most
    t colors.  Searches downward; every step is an exhaustive scan."""
    if r < 1:
        raise InvalidInput("need at least one color")
    h = abc_hypergraph(a, b, c)
    from .structures import automorphisms

    aut = max(1, len(automorphisms(a)))
    t_max = max((len(e) for e in h.hyperedges), default=0)
    t = t_max
    witness = None
    for t_try in range(t_max - 1, -1, -1):
        got = _find_spread_coloring(h, r, t_try, node_cap)
        if got is not None:
            t = t_try + 1
            witness = ColoringWitness(r, got, t_try, "degree-exceeds-t")
            break
        t = t_try
    return RamseyDegreeReport(t, Fraction(t, aut), r, witness)


def tangent_numbers(k_max: int) -> list[int]:
    """t_1 = 1 and t_k = sum of C(2k-2, 2l-1) t_l t_{k-l}; exact integers."""
    if k_max < 1:
        raise InvalidInput("need k_max >= 1")
    t = [0, 1]
    for k in range(2, k_max + 1):
        t.append(
            sum(comb(2 * k - 2, 2 * ell - 1) * t[ell] * t[k - ell] for ell in range(1, k))
        )
    return t[1:]


def devlin_degree(k: int) -> int:
    """Big Ramsey degree of a k-tuple in the rationals: t_k times k!."""
    return tangent_numbers(k)[-1] * factorial(k)


@dataclass(frozen=True)
class TypeTree:
    """Levels of quantifier-free 1-types of an enumerated structure; level m
    partitions the vertices from m on by their type over 0..m-1."""

    structure: Structure
    levels: tuple

    def classes(self, m: int) -> tuple:
        return self.levels[m]

    def leq(self, x: tuple[int, int], y: tuple[int, int]) -> bool:
        """Tree order: (m, i) below (n, j) iff m <= n and the class at (m, i)
        contains the one at (n, j)."""
        m, i = x
        n, j = y
        return m <= n and self.levels[m][i] >= self.levels[n][j]

    def parent(self, m: int, i: int) -> int:
        """Index at level m-1 of the class containing this one."""
        if m == 0:
            raise InvalidInput("level 0 classes have no parent")
        target = self.levels[m][i]
        for j, cls in enumerate(self.levels[m - 1]):
            if target <= cls:
                return j
        raise AssertionError("levels do not nest")


def tree_of_types(s: Structure, depth: int) -> TypeTree:
    """Levels 0..depth of the tree of 1-types; vertices u, v of level m fall
    together iff the substructures on 0..m-1 plus u and 0..m-1 plus v are
    isomorphic via the identity extended by u -> v."""
    if not s.language.is_relational():
        raise InvalidInput("tree of types is defined for relational structures")
    if not (0 <= depth <= s.size):
        raise InvalidInput(f"depth must lie in 0..{s.size}")
    levels = []
    for m in range(depth + 1):
        buckets: dict[tuple, list[int]] = {}
        for u in range(m, s.size):
            window = set(range(m)) | {u}
            key = []
            for name in s.language.relation_names:
                normalized = frozenset(
                    tuple(m if x == u else x for x in t)
                    for t in s.rels[name]
                    if set(t) <= window
                )
                key.append((name, normalized))
            buckets.setdefault(tuple(key), []).append(u)
        classes = sorted((frozenset(vs) for vs in buckets.values()), key=min)
        levels.append(tuple(classes))
    return TypeTree(s, tuple(levels))
