"""Constructors for the small standard structures used throughout."""

from __future__ import annotations

from itertools import combinations

from .errors import InvalidInput
from .structures import GRAPH_LANGUAGE, Language, Structure

ORDERED_GRAPH_LANGUAGE = Language(relations=(("E", 2), ("<", 2)))
ORDER_LANGUAGE = Language(relations=(("<", 2),))
ORIENTED_GRAPH_LANGUAGE = Language(relations=(("arc", 2),))


def _lt_tuples(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def make_chain(n: int) -> Structure:
    """Linear order on n vertices (language: just "<")."""
    return Structure(ORDER_LANGUAGE, n, {"<": _lt_tuples(n)})


def make_graph(n: int, edges, ordered: bool = False) -> Structure:
    """Symmetric loop-free graph; ordered=True adds the natural linear order."""
    sym = set()
    for u, v in edges:
        if u == v:
            continue
        sym.add((u, v))
        sym.add((v, u))
    if ordered:
        return Structure(ORDERED_GRAPH_LANGUAGE, n, {"E": sym, "<": _lt_tuples(n)})
    return Structure(GRAPH_LANGUAGE, n, {"E": sym})


def make_clique(n: int, ordered: bool = False) -> Structure:
    return make_graph(n, combinations(range(n), 2), ordered=ordered)


def make_path(n: int, ordered: bool = False) -> Structure:
    return make_graph(n, [(i, i + 1) for i in range(n - 1)], ordered=ordered)


def make_cycle(n: int, ordered: bool = False) -> Structure:
    edges = [(i, (i + 1) % n) for i in range(n)]
    return make_graph(n, edges, ordered=ordered)


def make_empty_graph(n: int, ordered: bool = False) -> Structure:
    return make_graph(n, [], ordered=ordered)


def make_oriented_graph(n: int, arcs) -> Structure:
    """Oriented graph: no loops, at most one direction per vertex pair."""
    arcset = set()
    for u, v in arcs:
        if u == v:
            raise InvalidInput(f"loop at vertex {u}")
        if (v, u) in arcset:
            raise InvalidInput(f"both orientations given for {{{u}, {v}}}")
        arcset.add((u, v))
    return Structure(ORIENTED_GRAPH_LANGUAGE, n, {"arc": arcset})


def ordered_edge() -> Structure:
    """Single edge with a linear order: the ordered 2-clique."""
    return make_clique(2, ordered=True)


def ordered_vertex() -> Structure:
    return make_clique(1, ordered=True)
