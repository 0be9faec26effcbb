"""Predimension tools: the sparsity classes C0/CF, 2-orientations,
successor-closed sets, and the orders <=_s / <=_d."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import InvalidInput, RamseykitError
from .structures import Structure

C0 = "C0"
CF = "CF"
LEQ_S = "leq_s"
LEQ_D = "leq_d"

DEFAULT_EXHAUSTIVE_BOUND = 12


class BoundExceeded(RamseykitError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"graph has {size} vertices, exhaustive bound is {bound}")
        self.size = size
        self.bound = bound


def undirected_edges(g: Structure) -> list[tuple[int, int]]:
    """Edge list of a simple graph, sorted; rejects loops."""
    if not g.language.is_relation("E") or g.language.arity("E") != 2:
        raise InvalidInput('graph must carry a binary relation "E"')
    edges = set()
    for u, v in g.rels["E"]:
        if u == v:
            raise InvalidInput(f"loop at vertex {u}; simple graph required")
        edges.add((min(u, v), max(u, v)))
    return sorted(edges)


def predimension(g: Structure) -> int:
    return 2 * g.size - len(undirected_edges(g))


@dataclass(frozen=True)
class OrientedGraph:
    """A graph with every edge given a direction (tail, head)."""

    graph: Structure
    orientation: frozenset

    def __post_init__(self):
        arcs = frozenset((int(u), int(v)) for u, v in self.orientation)
        object.__setattr__(self, "orientation", arcs)
        edges = undirected_edges(self.graph)
        covered = sorted((min(u, v), max(u, v)) for u, v in arcs)
        if covered != edges:
            raise InvalidInput("orientation must direct every underlying edge exactly once")

    def outdegree(self, v: int) -> int:
        return sum(1 for u, _ in self.orientation if u == v)

    def is_2orientation(self) -> bool:
        return all(self.outdegree(v) <= 2 for v in range(self.graph.size))

    def roots(self) -> dict[int, int]:
        """Vertices of outdegree below 2, with multiplicity 2 - outdegree."""
        out = {}
        for v in range(self.graph.size):
            d = self.outdegree(v)
            if d < 2:
                out[v] = 2 - d
        return out

    def roots_of(self, u: int) -> frozenset[int]:
        """Roots reachable from u along arc directions (u itself included
        when it is a root)."""
        seen = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            for a, b in self.orientation:
                if a == w and b not in seen:
                    seen.add(b)
                    stack.append(b)
        root_set = self.roots()
        return frozenset(v for v in seen if v in root_set)

    def is_successor_closed(self, vset: Iterable[int]) -> bool:
        inside = set(vset)
        return not any(u in inside and v not in inside for u, v in self.orientation)

    def is_successor_d_closed(self, vset: Iterable[int]) -> bool:
        inside = set(vset)
        if not self.is_successor_closed(inside):
            return False
        return all(
            self.roots_of(u) - inside
            for u in range(self.graph.size)
            if u not in inside
        )


def class_membership(
    g: Structure,
    which: str = C0,
    bound: int = DEFAULT_EXHAUSTIVE_BOUND,
    log_base: float = math.e,
) -> tuple[bool, Optional[frozenset]]:
    """Exhaustively check delta >= 0 (C0) or delta >= log|H| (CF) over all
    induced subgraphs; edge-deleted subgraphs only raise delta, so induced
    ones suffice.  Returns the least violating vertex set on failure."""
    if which not in (C0, CF):
        raise InvalidInput(f"unknown class {which!r}")
    if g.size > bound:
        raise BoundExceeded(g.size, bound)
    edges = undirected_edges(g)
    for k in range(1, g.size + 1):
        threshold = 0.0 if which == C0 else math.log(k, log_base)
        for subset in combinations(range(g.size), k):
            inside = set(subset)
            m = sum(1 for u, v in edges if u in inside and v in inside)
            if 2 * k - m < threshold:
                return False, frozenset(subset)
    return True, None


def _allowed_tails(u: int, v: int, closed: Optional[set]) -> list[int]:
    if closed is not None:
        if u in closed and v not in closed:
            return [v]
        if v in closed and u not in closed:
            return [u]
    return sorted((u, v))


def enumerate_2orientations(
    g: Structure, closed: Optional[Iterable[int]] = None
) -> Iterator[OrientedGraph]:
    """All 2-orientations (lex order over edge tail choices); when closed is
    given, only those keeping it successor-closed."""
    closed_set = set(closed) if closed is not None else None
    edges = undirected_edges(g)
    outdeg = [0] * g.size
    chosen: list[tuple[int, int]] = []

    def walk(i: int) -> Iterator[OrientedGraph]:
        if i == len(edges):
            yield OrientedGraph(g, frozenset(chosen))
            return
        u, v = edges[i]
        for tail in _allowed_tails(u, v, closed_set):
            if outdeg[tail] == 2:
                continue
            outdeg[tail] += 1
            chosen.append((tail, u if tail == v else v))
            yield from walk(i + 1)
            chosen.pop()
            outdeg[tail] -= 1

    yield from walk(0)


def find_2orientation(
    g: Structure,
    closed: Optional[Iterable[int]] = None,
    d_closed: bool = False,
) -> Optional[OrientedGraph]:
    """A 2-orientation of g, or None.

    With closed, the returned orientation keeps that set successor-closed
    (no arcs leaving it).  With d_closed, additionally every outside vertex
    reaches a root outside the set; this variant retries over orientations
    exhaustively, so it is for desk-scale graphs.
    """
    closed_set = set(closed) if closed is not None else None
    if d_closed:
        target = closed_set if closed_set is not None else set()
        for cand in enumerate_2orientations(g, closed_set):
            if cand.is_successor_d_closed(target):
                return cand
        return None

    # Kuhn matching: every edge needs one of two outdegree slots at an
    # allowed tail vertex.
    edges = undirected_edges(g)
    slot_owner: dict[tuple[int, int], int] = {}

    def try_assign(i: int, visited: set) -> bool:
        u, v = edges[i]
        for tail in _allowed_tails(u, v, closed_set):
            for slot in ((tail, 0), (tail, 1)):
                if slot in visited:
                    continue
                visited.add(slot)
                if slot not in slot_owner or try_assign(slot_owner[slot], visited):
                    slot_owner[slot] = i
                    return True
        return False

    for i in range(len(edges)):
        if not try_assign(i, set()):
            return None
    tails = {}
    for (vertex, _), i in slot_owner.items():
        tails[i] = vertex
    arcs = []
    for i, (u, v) in enumerate(edges):
        tail = tails[i]
        arcs.append((tail, u if tail == v else v))
    got = OrientedGraph(g, frozenset(arcs))
    assert got.is_2orientation()
    if closed_set is not None:
        assert got.is_successor_closed(closed_set)
    return got


def substructure_order(
    g: Structure,
    h_vertices: Iterable[int],
    which: str = LEQ_S,
    bound: int = DEFAULT_EXHAUSTIVE_BOUND,
) -> bool:
    """Is the induced subgraph on h_vertices <=_s (or <=_d) in g?

    Quantification over all subgraphs containing h reduces to induced vertex
    supersets: removing edges only raises delta.
    """
    if which not in (LEQ_S, LEQ_D):
        raise InvalidInput(f"unknown order {which!r}")
    if g.size > bound:
        raise BoundExceeded(g.size, bound)
    base = sorted(set(int(v) for v in h_vertices))
    for v in base:
        if not (0 <= v < g.size):
            raise InvalidInput(f"vertex {v} out of range")
    edges = undirected_edges(g)

    def delta_of(vset: set) -> int:
        m = sum(1 for u, v in edges if u in vset and v in vset)
        return 2 * len(vset) - m

    d_base = delta_of(set(base))
    rest = [v for v in range(g.size) if v not in base]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            w = set(base) | set(extra)
            if which == LEQ_S:
                if delta_of(w) < d_base:
                    return False
            else:
                if extra and delta_of(w) <= d_base:
                    return False
    return True
