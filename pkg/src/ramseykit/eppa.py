"""EPPA witnesses: extension tables, coherence, faithfulness, and the
explicit witness construction for n-partite tournaments.

A witness for a structure A is a structure B containing A such that every
partial automorphism of A (an isomorphism between two substructures of A)
extends to a full automorphism of B.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping, Optional, Sequence

from .errors import InvalidInput, SizeCapExceeded
from .structures import (
    EMBEDDING,
    _KIND_RANK,
    EmbeddingMap,
    PartialAutomorphism,
    Structure,
    classify_map,
    enumerate_partial_automorphisms,
    induced_substructure,
    is_irreducible,
)


class IncompleteTable(InvalidInput):
    """An extension table lacks an entry for some partial automorphism."""

    def __init__(self, missing: PartialAutomorphism):
        self.missing = missing
        super().__init__(
            f"extension table has no entry for {missing.domain} -> {missing.image}"
        )


class NotNPartiteTournament(InvalidInput):
    pass


@dataclass(frozen=True)
class EppaInstance:
    """A structure, a candidate witness containing it, and optionally a
    table assigning to each partial automorphism an extending automorphism
    of the witness (as a vertex permutation tuple)."""

    small: Structure
    witness: Structure
    inclusion: EmbeddingMap
    table: Optional[Mapping[PartialAutomorphism, tuple[int, ...]]] = None

    def __post_init__(self):
        if self.inclusion.source != self.small or self.inclusion.target != self.witness:
            raise InvalidInput("inclusion endpoints differ from small/witness")
        kind = classify_map(self.inclusion.map, self.small, self.witness)
        if kind is None or _KIND_RANK[kind] < _KIND_RANK[EMBEDDING]:
            raise InvalidInput("inclusion is not an embedding")


@dataclass(frozen=True)
class EppaReport:
    ok: bool
    table: Optional[dict[PartialAutomorphism, tuple[int, ...]]]
    failing: Optional[PartialAutomorphism]


@dataclass(frozen=True)
class CoherenceReport:
    ok: bool
    violating: Optional[tuple[PartialAutomorphism, PartialAutomorphism]]


@dataclass(frozen=True)
class FaithfulnessReport:
    ok: bool
    failing: Optional[tuple[int, ...]]


def _generic_first_automorphism(
    s: Structure, candidates: Sequence[Sequence[int]]
) -> Optional[tuple[int, ...]]:
    """DFS over vertex maps in ascending order, any language.

    Relations are checked incrementally in both directions, so every partial
    assignment is a partial isomorphism on relations; the leaf check settles
    function symbols.
    """
    n = s.size
    rel_by_last: dict[int, list[tuple[str, tuple[int, ...]]]] = {
        v: [] for v in range(n)
    }
    by_member: dict[int, list[tuple[str, tuple[int, ...]]]] = {v: [] for v in range(n)}
    for name in s.language.relation_names:
        for t in s.rels[name]:
            if t:
                rel_by_last[max(t)].append((name, t))
                for w in set(t):
                    by_member[w].append((name, t))

    f: list[int] = []
    back: dict[int, int] = {}

    def consistent(v: int, t: int) -> bool:
        for name, tup in rel_by_last[v]:
            if tuple(f[x] for x in tup) not in s.rels[name]:
                return False
        for name, tup in by_member[t]:
            if all(w in back for w in tup):
                if tuple(back[w] for w in tup) not in s.rels[name]:
                    return False
        return True

    def walk(v: int) -> Optional[tuple[int, ...]]:
        if v == n:
            kind = classify_map(f, s, s)
            if kind is not None and _KIND_RANK[kind] >= _KIND_RANK[EMBEDDING]:
                return tuple(f)
            return None
        for t in candidates[v]:
            if t in back:
                continue
            f.append(t)
            back[t] = v
            if consistent(v, t):
                got = walk(v + 1)
                if got is not None:
                    f.pop()
                    del back[t]
                    return got
            f.pop()
            del back[t]
        return None

    return walk(0)


class _AutomorphismSearcher:
    """Reusable automorphism search for one structure.

    When every relation is unary or binary and there are no functions, the
    search keeps a bitmask domain of possible images per vertex, filters all
    domains after each assignment, and always branches on a vertex with the
    fewest remaining images; otherwise it falls back to the generic DFS.
    The search order is deterministic, so reruns return the same
    automorphism, but which one is found is otherwise unspecified.
    """

    def __init__(self, s: Structure):
        self.s = s
        n = s.size
        self.n = n
        self.full = (1 << n) - 1
        self.binary_ok = s.language.is_relational() and all(
            a <= 2 for _, a in s.language.relations
        )
        if not self.binary_ok:
            return
        unary = [name for name, a in s.language.relations if a == 1]
        binary = [name for name, a in s.language.relations if a == 2]
        self.binary = binary
        # Unary membership and binary loops fold into one profile per vertex.
        prof = [0] * n
        for i, name in enumerate(unary):
            for (v,) in s.rels[name]:
                prof[v] |= 1 << i
        shift = len(unary)
        pat = [[0] * n for _ in range(n)]
        out = [[0] * n for _ in binary]
        inn = [[0] * n for _ in binary]
        for i, name in enumerate(binary):
            for u, v in s.rels[name]:
                if u == v:
                    prof[u] |= 1 << (shift + i)
                else:
                    pat[u][v] |= 1 << (2 * i)
                    pat[v][u] |= 1 << (2 * i + 1)
                    out[i][u] |= 1 << v
                    inn[i][v] |= 1 << u
        self.pat = pat
        self.out = out
        self.inn = inn
        by_prof: dict[int, int] = {}
        for v in range(n):
            by_prof[prof[v]] = by_prof.get(prof[v], 0) | (1 << v)
        self.prof_mask = [by_prof[prof[v]] for v in range(n)]
        # comb_rows[t][pattern]: images allowed for w when v -> t and the
        # pair (v, w) has the given membership pattern.  Rows are filled on
        # first use of t.
        self.comb_rows: list[Optional[list[int]]] = [None] * n

    def _comb_row(self, t: int) -> list[int]:
        row = self.comb_rows[t]
        if row is None:
            row = []
            for pattern in range(1 << (2 * len(self.binary))):
                got = self.full
                for i in range(len(self.binary)):
                    if (pattern >> (2 * i)) & 1:
                        got &= self.out[i][t]
                    else:
                        got &= self.full ^ self.out[i][t]
                    if (pattern >> (2 * i + 1)) & 1:
                        got &= self.inn[i][t]
                    else:
                        got &= self.full ^ self.inn[i][t]
                row.append(got)
            self.comb_rows[t] = row
        return row

    def first(self, candidates: Sequence[Sequence[int]]) -> Optional[tuple[int, ...]]:
        if not self.binary_ok:
            return _generic_first_automorphism(self.s, candidates)
        n = self.n
        if n == 0:
            return ()
        doms = []
        for v in range(n):
            m = 0
            for c in candidates[v]:
                m |= 1 << c
            doms.append(m & self.prof_mask[v])
        pat = self.pat
        comb_row = self._comb_row
        f = [-1] * n

        def walk(doms: list[int], depth: int) -> bool:
            if depth == n:
                return True
            v = -1
            fewest = n + 1
            for w in range(n):
                if f[w] < 0:
                    c = doms[w].bit_count()
                    if c < fewest:
                        if c == 0:
                            return False
                        v, fewest = w, c
                        if c == 1:
                            break
            d = doms[v]
            row = pat[v]
            while d:
                low = d & -d
                d ^= low
                t = low.bit_length() - 1
                f[v] = t
                ct = comb_row(t)
                keep = ~low
                trimmed = list(doms)
                ok = True
                for w in range(n):
                    if f[w] < 0:
                        nd = trimmed[w] & ct[row[w]] & keep
                        if not nd:
                            ok = False
                            break
                        trimmed[w] = nd
                if ok and walk(trimmed, depth + 1):
                    return True
            f[v] = -1
            return False

        if not walk(doms, 0):
            return None
        result = tuple(f)
        kind = classify_map(result, self.s, self.s)
        assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[EMBEDDING]
        return result


def _first_automorphism(
    s: Structure, candidates: Sequence[Sequence[int]]
) -> Optional[tuple[int, ...]]:
    return _AutomorphismSearcher(s).first(candidates)


def extend_to_automorphism(
    s: Structure, pins: Mapping[int, int]
) -> Optional[tuple[int, ...]]:
    """An automorphism of s agreeing with pins, or None if none exists.

    The search is complete and deterministic: it fails only when no
    extension exists, and reruns return the same automorphism.
    """
    n = s.size
    fixed: dict[int, int] = {}
    for x, y in pins.items():
        x, y = int(x), int(y)
        if not (0 <= x < n and 0 <= y < n):
            raise InvalidInput(f"pin {x} -> {y} out of range")
        fixed[x] = y
    if len(set(fixed.values())) != len(fixed):
        return None
    everything = range(n)
    return _first_automorphism(
        s, [(fixed[v],) if v in fixed else everything for v in range(n)]
    )


def is_eppa_witness(inst: EppaInstance) -> EppaReport:
    """Extend every partial automorphism of small through the inclusion.

    Returns the full extension table, or the least partial automorphism (in
    enumeration order) with no extending automorphism of the witness.
    """
    incl = inst.inclusion.map
    n = inst.witness.size
    searcher = _AutomorphismSearcher(inst.witness)
    identity = tuple(range(n))
    everything = range(n)

    def search(pins: dict[int, int]) -> Optional[tuple[int, ...]]:
        return searcher.first(
            [(pins[v],) if v in pins else everything for v in range(n)]
        )

    ps = list(enumerate_partial_automorphisms(inst.small))
    table: dict[PartialAutomorphism, tuple[int, ...]] = {}
    found: list[tuple[int, ...]] = []
    failed = False
    # Largest domains first: an automorphism found for p settles every
    # restriction of p, so fresh searches run only for maximal maps.
    for p in sorted(ps, key=lambda q: -len(q.domain)):
        pins = {incl[x]: incl[y] for x, y in zip(p.domain, p.image)}
        if all(x == y for x, y in pins.items()):
            table[p] = identity
            continue
        g = next(
            (h for h in found if all(h[x] == y for x, y in pins.items())), None
        )
        if g is None:
            g = search(pins)
            if g is None:
                failed = True
                break
            found.append(g)
        table[p] = g
    if not failed:
        return EppaReport(True, {p: table[p] for p in ps}, None)
    for p in ps:
        pins = {incl[x]: incl[y] for x, y in zip(p.domain, p.image)}
        if not all(x == y for x, y in pins.items()) and search(pins) is None:
            return EppaReport(False, None, p)
    raise AssertionError("extension failure did not replay")


def table_replays(inst: EppaInstance) -> bool:
    """Each table entry is an automorphism of the witness extending its key."""
    if inst.table is None:
        return False
    incl = inst.inclusion.map
    n = inst.witness.size
    for p, g in inst.table.items():
        g = tuple(g)
        if sorted(g) != list(range(n)):
            return False
        kind = classify_map(g, inst.witness, inst.witness)
        if kind is None or _KIND_RANK[kind] < _KIND_RANK[EMBEDDING]:
            return False
        if any(g[incl[x]] != incl[y] for x, y in zip(p.domain, p.image)):
            return False
    return True


def check_coherence(inst: EppaInstance) -> CoherenceReport:
    """Composition law: whenever Dom(g) = Range(f), the entry for g o f is
    the composition of the entries for g and f.

    The table must be total; the least violating pair (f, g) is returned.
    """
    ps = enumerate_partial_automorphisms(inst.small)
    table = inst.table if inst.table is not None else {}
    for p in ps:
        if p not in table:
            raise IncompleteTable(p)
    n = inst.witness.size
    for f in ps:
        range_f = tuple(sorted(f.image))
        psi_f = table[f]
        for g in ps:
            if g.domain != range_f:
                continue
            gm = g.mapping()
            h = PartialAutomorphism(
                inst.small, f.domain, tuple(gm[y] for y in f.image)
            )
            psi_g = table[g]
            composed = tuple(psi_g[psi_f[v]] for v in range(n))
            if composed != tuple(table[h]):
                return CoherenceReport(False, (f, g))
    return CoherenceReport(True, None)


def is_irreducible_faithful(inst: EppaInstance) -> FaithfulnessReport:
    """Every irreducible substructure of the witness moves into the image of
    small under some automorphism of the witness.

    Exhaustive scan in size-then-lex order; the least immovable irreducible
    substructure is reported.
    """
    b = inst.witness
    inside = sorted(set(inst.inclusion.map))
    everything = range(b.size)
    searcher = _AutomorphismSearcher(b)
    for size in range(1, b.size + 1):
        for w in combinations(range(b.size), size):
            sub, _ = induced_substructure(b, w)
            irr, _ = is_irreducible(sub)
            if not irr:
                continue
            wset = set(w)
            hit = searcher.first(
                [inside if v in wset else everything for v in range(b.size)]
            )
            if hit is None:
                return FaithfulnessReport(False, w)
    return FaithfulnessReport(True, None)


# n-partite tournaments ---------------------------------------------------------


def validate_npartite_tournament(
    s: Structure, parts: Sequence[Sequence[int]]
) -> tuple[tuple[int, ...], ...]:
    """Check the partition and orientation rule; return the normalized parts.

    A valid instance has exactly one binary relation and no functions, at
    least two parts, no arcs inside a part, and exactly one arc direction
    between vertices of different parts.
    """
    lang = s.language
    if lang.functions or len(lang.relations) != 1 or lang.relations[0][1] != 2:
        raise NotNPartiteTournament(
            "language must be a single binary relation without functions"
        )
    arc = lang.relations[0][0]
    norm = tuple(tuple(sorted(int(v) for v in p)) for p in parts)
    if len(norm) < 2:
        raise NotNPartiteTournament("need at least two parts")
    if any(not p for p in norm):
        raise NotNPartiteTournament("empty part")
    flat = sorted(v for p in norm for v in p)
    if flat != list(range(s.size)):
        raise NotNPartiteTournament("parts do not partition the vertex set")
    part_of = {v: i for i, p in enumerate(norm) for v in p}
    for u, v in s.rels[arc]:
        if u == v:
            raise NotNPartiteTournament(f"loop at {u}")
        if part_of[u] == part_of[v]:
            raise NotNPartiteTournament(f"arc ({u}, {v}) inside part {part_of[u]}")
    for u in range(s.size):
        for v in range(u + 1, s.size):
            if part_of[u] == part_of[v]:
                continue
            fwd = (u, v) in s.rels[arc]
            bwd = (v, u) in s.rels[arc]
            if fwd and bwd:
                raise NotNPartiteTournament(f"both orientations between {u} and {v}")
            if not fwd and not bwd:
                raise NotNPartiteTournament(f"no orientation between {u} and {v}")
    return norm


@dataclass(frozen=True)
class NPartiteWitness:
    """Output of the explicit witness construction.

    padded is the normalized copy of the input: parts equal-sized, laid out
    as consecutive blocks, fresh vertices filling each part's tail, and the
    new cross-part pairs oriented from the smaller to the larger vertex so
    the result stays an n-partite tournament; placement sends an original
    vertex to its padded position.  Witness
    vertices are the pairs (x, chi) with x a padded vertex and chi one bit
    per cross-part vertex of x in ascending order; labels records that pair
    for each witness vertex.  psi embeds padded into b; inclusion is psi
    after placement, embedding the original input.
    """

    padded: Structure
    parts: tuple[tuple[int, ...], ...]
    placement: tuple[int, ...]
    b: Structure
    b_parts: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, tuple[int, ...]], ...]
    psi: EmbeddingMap
    inclusion: EmbeddingMap


def npartite_tournament_witness(
    a: Structure, parts: Sequence[Sequence[int]], max_vertices: int = 4096
) -> NPartiteWitness:
    """Product-style witness for an n-partite tournament.

    The witness vertex (x, chi) is adjacent to (y, chi') across parts, with
    the arc pointing at (y, chi') exactly when x < y and chi(y) + chi'(x) is
    even, or x > y and the sum is odd.  The embedding psi sends x to
    (x, chi_x) where chi_x marks the smaller cross-part vertices that x
    beats.
    """
    norm = validate_npartite_tournament(a, parts)
    arc = a.language.relations[0][0]
    width = max(len(p) for p in norm)
    n = len(norm)

    placement_map: dict[int, int] = {}
    for i, p in enumerate(norm):
        for j, v in enumerate(p):
            placement_map[v] = i * width + j
    placement = tuple(placement_map[v] for v in range(a.size))
    k = n * width
    padded_parts = tuple(tuple(range(i * width, (i + 1) * width)) for i in range(n))
    padded_arcs = {(placement_map[u], placement_map[v]) for u, v in a.rels[arc]}
    # Pads must take part in the tournament for psi to reflect arcs; new
    # cross-part pairs are oriented from the smaller to the larger vertex.
    for u in range(k):
        for v in range(u + 1, k):
            if u // width != v // width and (v, u) not in padded_arcs:
                padded_arcs.add((u, v))
    padded = Structure(a.language, k, {arc: padded_arcs})
    validate_npartite_tournament(padded, padded_parts)

    b_size = k * 2 ** (k - width)
    if b_size > max_vertices:
        raise SizeCapExceeded(
            f"witness needs {b_size} vertices, cap is {max_vertices}",
            cap=max_vertices,
        )

    nbr = [tuple(y for y in range(k) if y // width != x // width) for x in range(k)]
    pos = [{y: j for j, y in enumerate(nbr[x])} for x in range(k)]
    labels = tuple(
        (x, bits) for x in range(k) for bits in product((0, 1), repeat=k - width)
    )
    index = {lab: i for i, lab in enumerate(labels)}

    arcs = set()
    for i, (x, chi) in enumerate(labels):
        for j in range(i + 1, len(labels)):
            y, chj = labels[j]
            if x // width == y // width:
                continue
            # Labels are sorted by x, so x < y here.
            if (chi[pos[x][y]] + chj[pos[y][x]]) % 2 == 0:
                arcs.add((i, j))
            else:
                arcs.add((j, i))
    b = Structure(a.language, len(labels), {arc: arcs})
    block = width * 2 ** (k - width)
    b_parts = tuple(
        tuple(range(i * block, (i + 1) * block)) for i in range(n)
    )
    validate_npartite_tournament(b, b_parts)

    psi_vec = []
    for x in range(k):
        bits = tuple(1 if (y < x and (x, y) in padded_arcs) else 0 for y in nbr[x])
        psi_vec.append(index[(x, bits)])
    kind = classify_map(psi_vec, padded, b)
    assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[EMBEDDING]
    psi = EmbeddingMap(padded, b, tuple(psi_vec), EMBEDDING)

    incl_vec = tuple(psi_vec[placement[v]] for v in range(a.size))
    kind = classify_map(incl_vec, a, b)
    assert kind is not None and _KIND_RANK[kind] >= _KIND_RANK[EMBEDDING]
    inclusion = EmbeddingMap(a, b, incl_vec, EMBEDDING)

    return NPartiteWitness(
        padded, padded_parts, placement, b, b_parts, labels, psi, inclusion
    )
