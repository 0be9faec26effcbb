"""Finite structures over languages with relation and set-valued function symbols.

Vertices are always the integers 0..n-1.  Function contents are total with
default value the empty set; a function entry is stored only when non-empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InvalidInput, NotClosed

ORDER_REL = "<"

# Classification kinds, weakest to strongest.
HOMOMORPHISM = "homomorphism"
MONOMORPHISM = "monomorphism"
HOM_EMBEDDING = "homomorphism-embedding"
EMBEDDING = "embedding"
U_CLOSED_EMBEDDING = "U-closed-embedding"
ISOMORPHISM = "isomorphism"


@dataclass(frozen=True)
class Language:
    """Relation and function symbols with fixed arities.

    Symbol names are unique across both kinds.  Relation arities are >= 1,
    function arities >= 0.  The reserved name "<" is an ordinary binary
    relation whose content, when present, is expected to be a strict order.
    """

    relations: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        rels = tuple((str(n), int(a)) for n, a in self.relations)
        funs = tuple((str(n), int(a)) for n, a in self.functions)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "functions", funs)
        names = [n for n, _ in rels] + [n for n, _ in funs]
        if len(set(names)) != len(names):
            raise InvalidInput(f"duplicate symbol names in language: {names}")
        for n, a in rels:
            if a < 1:
                raise InvalidInput(f"relation {n} must have positive arity, got {a}")
        for n, a in funs:
            if a < 0:
                raise InvalidInput(f"function {n} has negative arity {a}")

    @property
    def relation_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    @property
    def function_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.functions)

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        for n, a in self.functions:
            if n == name:
                return a
        raise InvalidInput(f"unknown symbol {name!r}")

    def is_relation(self, name: str) -> bool:
        return any(n == name for n, _ in self.relations)

    def is_function(self, name: str) -> bool:
        return any(n == name for n, _ in self.functions)

    def is_relational(self) -> bool:
        return not self.functions

    def with_relations(self, extra: Sequence[tuple[str, int]]) -> "Language":
        return Language(self.relations + tuple(extra), self.functions)


def _norm_tuple(t) -> tuple[int, ...]:
    return tuple(int(x) for x in t)


class Structure:
    """A finite model: vertex set 0..n-1, relation contents, function contents."""

    __slots__ = ("language", "size", "rels", "funs")

    def __init__(
        self,
        language: Language,
        size: int,
        rels: Optional[Mapping[str, Iterable[Sequence[int]]]] = None,
        funs: Optional[Mapping[str, Mapping[Sequence[int], Iterable[int]]]] = None,
    ):
        self.language = language
        self.size = int(size)
        rels = rels or {}
        funs = funs or {}
        for name in rels:
            if not language.is_relation(name):
                raise InvalidInput(f"{name!r} is not a relation of the language")
        for name in funs:
            if not language.is_function(name):
                raise InvalidInput(f"{name!r} is not a function of the language")
        self.rels: dict[str, frozenset[tuple[int, ...]]] = {
            name: frozenset(_norm_tuple(t) for t in rels.get(name, ()))
            for name in language.relation_names
        }
        self.funs: dict[str, dict[tuple[int, ...], frozenset[int]]] = {}
        for name in language.function_names:
            entries = {}
            for args, value in (funs.get(name) or {}).items():
                value = frozenset(int(v) for v in value)
                if value:
                    entries[_norm_tuple(args)] = value
            self.funs[name] = entries

    def rel(self, name: str) -> frozenset[tuple[int, ...]]:
        return self.rels[name]

    def fun(self, name: str, args: Sequence[int]) -> frozenset[int]:
        return self.funs[name].get(_norm_tuple(args), frozenset())

    def vertices(self) -> range:
        return range(self.size)

    def key(self):
        """Canonical hashable form; equal iff structures are identical."""
        rels = tuple(
            (name, tuple(sorted(self.rels[name])))
            for name in self.language.relation_names
        )
        funs = tuple(
            (name, tuple(sorted((a, tuple(sorted(v))) for a, v in self.funs[name].items())))
            for name in self.language.function_names
        )
        return (self.language, self.size, rels, funs)

    def __eq__(self, other):
        return isinstance(other, Structure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Structure(n={self.size}, {sum(len(v) for v in self.rels.values())} tuples)"

    def entries(self):
        """All relation tuples and function entries, each as (symbol, tuple).

        A function entry unpacks to args + one value vertex, matching the
        convention that a function entry "contains" its arguments and each
        member of its value set.
        """
        for name in self.language.relation_names:
            for t in sorted(self.rels[name]):
                yield name, t
        for name in self.language.function_names:
            for args in sorted(self.funs[name]):
                for v in sorted(self.funs[name][args]):
                    yield name, args + (v,)


@dataclass(frozen=True)
class EmbeddingMap:
    """A vertex map with a certified classification kind."""

    source: Structure
    target: Structure
    map: tuple[int, ...]
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "map", _norm_tuple(self.map))
        if len(self.map) != self.source.size:
            raise InvalidInput("map length differs from source size")

    def __call__(self, v: int) -> int:
        return self.map[v]

    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    def apply(self, t: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.map[v] for v in t)

    def compose(self, inner: "EmbeddingMap") -> tuple[int, ...]:
        """Vertex map of self o inner (inner first)."""
        return tuple(self.map[v] for v in inner.map)

    def verify(self, u_symbols: Optional[Iterable[str]] = None) -> bool:
        got = classify_map(self.map, self.source, self.target, u_symbols=u_symbols)
        return got is not None and _KIND_RANK[got] >= _KIND_RANK[self.kind]


@dataclass(frozen=True)
class PartialAutomorphism:
    """An isomorphism between two function-closed substructures."""

    structure: Structure
    domain: tuple[int, ...]
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", _norm_tuple(self.domain))
        object.__setattr__(self, "image", _norm_tuple(self.image))
        if len(self.domain) != len(self.image):
            raise InvalidInput("domain and image sizes differ")

    def mapping(self) -> dict[int, int]:
        return dict(zip(self.domain, self.image))

    def __call__(self, v: int) -> int:
        return self.mapping()[v]


@dataclass
class ValidationReport:
    valid: bool
    ordered: bool
    problems: list[str] = field(default_factory=list)


def validate_structure(s: Structure) -> ValidationReport:
    """Report every violated invariant; also report orderedness."""
    problems = []
    if s.size < 0:
        problems.append(f"negative size {s.size}")
    for name, arity in s.language.relations:
        for t in sorted(s.rels[name]):
            if len(t) != arity:
                problems.append(f"rel {name}: tuple {t} has arity {len(t)} != {arity}")
            if any(not (0 <= v < s.size) for v in t):
                problems.append(f"rel {name}: tuple {t} out of range 0..{s.size - 1}")
    for name, arity in s.language.functions:
        for args, value in sorted(s.funs[name].items()):
            if len(args) != arity:
                problems.append(f"fun {name}: args {args} have arity {len(args)} != {arity}")
            if any(not (0 <= v < s.size) for v in args):
                problems.append(f"fun {name}: args {args} out of range")
            if any(not (0 <= v < s.size) for v in value):
                problems.append(f"fun {name}: value {sorted(value)} out of range")
    return ValidationReport(valid=not problems, ordered=is_ordered(s), problems=problems)


def is_ordered(s: Structure) -> bool:
    """True iff "<" is present and its content is a strict linear order on all vertices."""
    if not s.language.is_relation(ORDER_REL):
        return False
    if s.language.arity(ORDER_REL) != 2:
        return False
    lt = s.rels[ORDER_REL]
    n = s.size
    if len(lt) != n * (n - 1) // 2:
        return False
    for u, v in lt:
        if u == v or (v, u) in lt:
            return False
    # Totality plus antisymmetry with the right count forces transitivity
    # only if checked; verify it directly.
    for u, v in lt:
        for w in range(n):
            if (v, w) in lt and (u, w) not in lt:
                return False
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in lt and (v, u) not in lt:
                return False
    return True


def generated_closure(s: Structure, seed: Iterable[int]) -> frozenset[int]:
    """Smallest superset of seed closed under all function values of s."""
    current = set(int(v) for v in seed)
    for v in current:
        if not (0 <= v < s.size):
            raise InvalidInput(f"seed vertex {v} out of range")
    changed = True
    while changed:
        changed = False
        for name, arity in s.language.functions:
            for args, value in s.funs[name].items():
                if all(v in current for v in args) and not value <= current:
                    current |= value
                    changed = True
    return frozenset(current)


def induced_substructure(s: Structure, vset: Iterable[int]) -> tuple[Structure, dict[int, int]]:
    """Substructure on vset, renumbered order-preservingly.

    Returns (structure, old->new correspondence).  Raises NotClosed when a
    function value escapes vset.
    """
    vs = sorted(set(int(v) for v in vset))
    for v in vs:
        if not (0 <= v < s.size):
            raise InvalidInput(f"vertex {v} out of range")
    inside = set(vs)
    for name, _ in s.language.functions:
        for args, value in s.funs[name].items():
            if all(v in inside for v in args) and not value <= inside:
                raise NotClosed(inside, (name, args, sorted(value)))
    old2new = {v: i for i, v in enumerate(vs)}
    rels = {
        name: [tuple(old2new[x] for x in t) for t in s.rels[name] if all(x in inside for x in t)]
        for name in s.language.relation_names
    }
    funs = {
        name: {
            tuple(old2new[x] for x in args): [old2new[v] for v in value]
            for args, value in s.funs[name].items()
            if all(x in inside for x in args)
        }
        for name in s.language.function_names
    }
    return Structure(s.language, len(vs), rels, funs), old2new


_KIND_RANK = {
    HOMOMORPHISM: 0,
    MONOMORPHISM: 1,
    HOM_EMBEDDING: 2,
    EMBEDDING: 3,
    U_CLOSED_EMBEDDING: 4,
    ISOMORPHISM: 5,
}


def _is_homomorphism(f: Sequence[int], a: Structure, b: Structure) -> bool:
    for name, arity in a.language.relations:
        rb = b.rels[name]
        for t in a.rels[name]:
            if tuple(f[v] for v in t) not in rb:
                return False
    # Set-valued functions require exact equality f[F_A(x)] = F_B(f(x)) on
    # every argument tuple, including tuples with empty value.
    for name, arity in a.language.functions:
        for args in product(range(a.size), repeat=arity):
            va = a.fun(name, args)
            vb = b.fun(name, tuple(f[x] for x in args))
            if frozenset(f[v] for v in va) != vb:
                return False
    return True


def _reflects_relations(f: Sequence[int], a: Structure, b: Structure) -> bool:
    for name, arity in a.language.relations:
        ra = a.rels[name]
        rb = b.rels[name]
        for t in product(range(a.size), repeat=arity):
            if tuple(f[v] for v in t) in rb and t not in ra:
                return False
    return True


def image_is_u_closed(image: frozenset[int], b: Structure, u_symbols: Iterable[str]) -> bool:
    """Closure of an image set under designated symbols of b.

    A relation symbol of arity n+1 encodes an n-ary function: whenever the
    first n entries of one of its tuples lie in the image, so must the last.
    A genuine function symbol requires its value set inside the image whenever
    its arguments are.
    """
    for name in u_symbols:
        if b.language.is_relation(name):
            for t in b.rels[name]:
                if all(v in image for v in t[:-1]) and t[-1] not in image:
                    return False
        elif b.language.is_function(name):
            for args, value in b.funs[name].items():
                if all(v in image for v in args) and not value <= image:
                    return False
        else:
            raise InvalidInput(f"u symbol {name!r} not in language")
    return True


def _closed_subsets(s: Structure):
    """All function-closed vertex subsets, as sorted tuples, smallest first."""
    from itertools import combinations

    out = []
    for k in range(s.size + 1):
        for sub in combinations(range(s.size), k):
            inside = set(sub)
            ok = True
            for name, _ in s.language.functions:
                for args, value in s.funs[name].items():
                    if all(v in inside for v in args) and not value <= inside:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(sub)
    return out


def classify_map(
    f: Sequence[int],
    a: Structure,
    b: Structure,
    u_symbols: Optional[Iterable[str]] = None,
) -> Optional[str]:
    """Strongest applicable classification of the vertex map f, or None.

    U-closed-embedding is only reported when u_symbols is given.
    """
    f = _norm_tuple(f)
    if len(f) != a.size:
        raise InvalidInput("map length differs from source size")
    for v in f:
        if not (0 <= v < b.size):
            raise InvalidInput(f"map value {v} out of target range")
    # The target may carry extra symbols (e.g. partition predicates); only
    # the source's symbols are checked, and all of them must exist in b.
    for name, arity in a.language.relations + a.language.functions:
        if name not in b.rels and name not in b.funs:
            raise InvalidInput(f"target lacks source symbol {name!r}")
        if b.language.arity(name) != arity:
            raise InvalidInput(f"symbol {name!r} has different arities in source and target")
    if not _is_homomorphism(f, a, b):
        return None
    injective = len(set(f)) == len(f)
    embedding = injective and _reflects_relations(f, a, b)
    if embedding:
        if injective and a.size == b.size:
            return ISOMORPHISM
        if u_symbols is not None and image_is_u_closed(frozenset(f), b, u_symbols):
            return U_CLOSED_EMBEDDING
        return EMBEDDING
    # Homomorphism-embedding: restriction to every irreducible substructure
    # is an embedding.  Exponential over closed subsets; desk scale only.
    if _is_hom_embedding(f, a, b):
        return HOM_EMBEDDING
    if injective:
        return MONOMORPHISM
    return HOMOMORPHISM


def _is_hom_embedding(f: Sequence[int], a: Structure, b: Structure) -> bool:
    for sub in _closed_subsets(a):
        if not sub:
            continue
        part, _ = induced_substructure(a, sub)
        irr, _ = is_irreducible(part)
        if not irr:
            continue
        g = tuple(f[v] for v in sub)
        if len(set(g)) != len(g):
            return False
        if not _is_homomorphism(g, part, b) or not _reflects_relations(g, part, b):
            return False
    return True


GRAPH_LANGUAGE = Language(relations=(("E", 2),))


def gaifman_graph(s: Structure) -> Structure:
    """Symmetric loop-free graph: uv iff some tuple or function entry has both."""
    edges = set()
    for _, t in s.entries():
        for i in range(len(t)):
            for j in range(i + 1, len(t)):
                u, v = t[i], t[j]
                if u != v:
                    edges.add((u, v))
                    edges.add((v, u))
    return Structure(GRAPH_LANGUAGE, s.size, {"E": edges})


def is_irreducible(s: Structure) -> tuple[bool, Optional[tuple[tuple[int, ...], tuple[int, ...]]]]:
    """Irreducibility with a decomposition witness (X, Y) when reducible.

    Reducible means: closed proper subsets X, Y with X u Y = vertices and
    every relation tuple / function entry inside X or inside Y.
    """
    n = s.size
    if s.language.is_relational():
        # Fast path: irreducible iff the Gaifman graph is complete.
        g = gaifman_graph(s)
        missing = None
        for u in range(n):
            for v in range(u + 1, n):
                if (u, v) not in g.rels["E"]:
                    missing = (u, v)
                    break
            if missing:
                break
        if missing is None:
            return True, None
        u, v = missing
        x = tuple(w for w in range(n) if w != v)
        y = tuple(w for w in range(n) if w != u)
        return False, (x, y)
    closed = [set(c) for c in _closed_subsets(s)]
    entries = [set(t) for _, t in s.entries()]
    for x in closed:
        if len(x) == n:
            continue
        for y in closed:
            if len(y) == n:
                continue
            if len(x | y) != n:
                continue
            if all(e <= x or e <= y for e in entries):
                return False, (tuple(sorted(x)), tuple(sorted(y)))
    return True, None


def enumerate_embeddings(
    a: Structure,
    b: Structure,
    projection: Optional[Mapping[int, str]] = None,
    u_closed: Optional[Iterable[str]] = None,
) -> list[EmbeddingMap]:
    """All embeddings a -> b in lexicographic order of the map sequence.

    projection constrains each source vertex to land in a named unary
    predicate of b; u_closed keeps only embeddings with U-closed image.
    """
    n, m = a.size, b.size
    if projection:
        for name in set(projection.values()):
            if not b.language.is_relation(name) or b.language.arity(name) != 1:
                raise InvalidInput(f"projection predicate {name!r} is not unary in target")
    candidates: list[list[int]] = []
    for v in range(n):
        if projection and v in projection:
            pred = b.rels[projection[v]]
            candidates.append([t for t in range(m) if (t,) in pred])
        else:
            candidates.append(list(range(m)))

    rel_by_last: dict[int, list[tuple[str, tuple[int, ...]]]] = {v: [] for v in range(n)}
    for name in a.language.relation_names:
        for t in a.rels[name]:
            if t:
                rel_by_last[max(t)].append((name, t))

    out: list[EmbeddingMap] = []
    f: list[int] = []
    used: set[int] = set()

    def extend(v: int):
        if v == n:
            kind = classify_map(f, a, b, u_symbols=u_closed)
            if kind is not None and _KIND_RANK[kind] >= _KIND_RANK[EMBEDDING]:
                if u_closed is None or _KIND_RANK[kind] >= _KIND_RANK[U_CLOSED_EMBEDDING]:
                    final = EMBEDDING if u_closed is None else U_CLOSED_EMBEDDING
                    if kind == ISOMORPHISM:
                        final = ISOMORPHISM
                    out.append(EmbeddingMap(a, b, tuple(f), final))
            return
        for t in candidates[v]:
            if t in used:
                continue
            f.append(t)
            ok = all(
                tuple(f[x] for x in tup) in b.rels[name]
                for name, tup in rel_by_last[v]
            )
            if ok:
                used.add(t)
                extend(v + 1)
                used.remove(t)
            f.pop()

    extend(0)
    return out


def automorphisms(s: Structure) -> list[EmbeddingMap]:
    """All automorphisms in lexicographic order (injective self-embeddings)."""
    out = []
    for e in enumerate_embeddings(s, s):
        kind = ISOMORPHISM if len(set(e.map)) == s.size else e.kind
        out.append(EmbeddingMap(s, s, e.map, kind))
    return out


def is_rigid(s: Structure) -> bool:
    return len(automorphisms(s)) == 1 or s.size == 0


def are_isomorphic(a: Structure, b: Structure) -> Optional[tuple[int, ...]]:
    """First isomorphism a -> b in lex order, or None."""
    if a.size != b.size or a.language != b.language:
        return None
    for e in enumerate_embeddings(a, b):
        return e.map
    return None


def enumerate_partial_automorphisms(
    s: Structure, max_domain: Optional[int] = None
) -> list[PartialAutomorphism]:
    """All isomorphisms between closed substructures, including the empty map.

    Ordered by (domain size, domain tuple, image map tuple).
    """
    limit = s.size if max_domain is None else min(max_domain, s.size)
    closed = [c for c in _closed_subsets(s) if len(c) <= limit]
    by_size: dict[int, list[tuple[int, ...]]] = {}
    for c in closed:
        by_size.setdefault(len(c), []).append(c)
    induced = {c: induced_substructure(s, c) for c in closed}
    out = []
    for size in sorted(by_size):
        for dom in by_size[size]:
            sub_d, _ = induced[dom]
            for img in by_size[size]:
                sub_i, _ = induced[img]
                for e in enumerate_embeddings(sub_d, sub_i):
                    # e maps renumbered dom -> renumbered img; translate back.
                    image = tuple(img[e.map[i]] for i in range(size))
                    out.append(PartialAutomorphism(s, dom, image))
    return out
