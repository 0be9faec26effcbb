"""Free, strong, and tree amalgamation, plus finite-catalog class properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence, Union

from .errors import InvalidInput, RamseykitError
from .structures import (
    EMBEDDING,
    HOM_EMBEDDING,
    HOMOMORPHISM,
    MONOMORPHISM,
    _KIND_RANK,
    EmbeddingMap,
    Structure,
    _closed_subsets,
    classify_map,
    enumerate_embeddings,
    induced_substructure,
    is_irreducible,
)

GRADE_NONE = "none"
GRADE_AMALGAM = "amalgam"
GRADE_STRONG = "strong"
GRADE_FREE = "free"


class OverlapNotInIrreducible(RamseykitError):
    """A tree-amalgam overlap image lies in no irreducible substructure."""

    def __init__(self, path: tuple[str, ...], image):
        self.path = path
        self.image = tuple(sorted(image))
        super().__init__(
            f"overlap image {self.image} at node {'/'.join(path) or 'root'} "
            "is contained in no irreducible substructure"
        )


@dataclass(frozen=True)
class AmalgamationProblem:
    """Two structures with a common embedded base."""

    base: Structure
    left: Structure
    right: Structure
    alpha1: EmbeddingMap
    alpha2: EmbeddingMap

    def __post_init__(self):
        if self.base.language != self.left.language or self.base.language != self.right.language:
            raise InvalidInput("amalgamation requires a common language")
        for alpha, target, name in (
            (self.alpha1, self.left, "alpha1"),
            (self.alpha2, self.right, "alpha2"),
        ):
            kind = classify_map(alpha.map, self.base, target)
            if kind is None or _KIND_RANK[kind] < _KIND_RANK[EMBEDDING]:
                raise InvalidInput(f"{name} is not an embedding")


def free_amalgam(p: AmalgamationProblem) -> tuple[Structure, EmbeddingMap, EmbeddingMap]:
    """Glue left and right along the base, identifying nothing else.

    Canonical numbering: left keeps its vertices, right's non-base vertices
    are appended in increasing order.
    """
    b1, b2, a = p.left, p.right, p.base
    beta1 = tuple(range(b1.size))
    base_image = {p.alpha2.map[x]: p.alpha1.map[x] for x in range(a.size)}
    beta2 = []
    nxt = b1.size
    for v in range(b2.size):
        if v in base_image:
            beta2.append(base_image[v])
        else:
            beta2.append(nxt)
            nxt += 1
    beta2 = tuple(beta2)
    size = b1.size + b2.size - a.size

    rels = {
        name: set(b1.rels[name])
        | {tuple(beta2[x] for x in t) for t in b2.rels[name]}
        for name in b1.language.relation_names
    }
    funs: dict[str, dict[tuple[int, ...], set[int]]] = {
        name: {} for name in b1.language.function_names
    }
    for name in b1.language.function_names:
        for args, value in b1.funs[name].items():
            funs[name].setdefault(args, set()).update(value)
        for args, value in b2.funs[name].items():
            image_args = tuple(beta2[x] for x in args)
            funs[name].setdefault(image_args, set()).update(beta2[v] for v in value)
    c = Structure(b1.language, size, rels, funs)
    return (
        c,
        EmbeddingMap(b1, c, beta1, EMBEDDING),
        EmbeddingMap(b2, c, beta2, EMBEDDING),
    )


def is_amalgam(
    c: Structure,
    p: AmalgamationProblem,
    beta1: Sequence[int],
    beta2: Sequence[int],
) -> str:
    """Strongest grade in none < amalgam < strong < free that (c, betas) satisfies."""
    beta1 = tuple(int(v) for v in beta1)
    beta2 = tuple(int(v) for v in beta2)
    for beta, side in ((beta1, p.left), (beta2, p.right)):
        kind = classify_map(beta, side, c)
        if kind is None or _KIND_RANK[kind] < _KIND_RANK[EMBEDDING]:
            return GRADE_NONE
    via1 = tuple(beta1[p.alpha1.map[x]] for x in range(p.base.size))
    via2 = tuple(beta2[p.alpha2.map[x]] for x in range(p.base.size))
    if via1 != via2:
        return GRADE_NONE
    im1, im2 = set(beta1), set(beta2)
    if im1 & im2 != set(via1):
        return GRADE_AMALGAM
    if im1 | im2 != set(range(c.size)):
        return GRADE_STRONG
    for _, t in c.entries():
        inside = set(t)
        if not (inside <= im1 or inside <= im2):
            return GRADE_STRONG
    return GRADE_FREE


# Tree amalgams --------------------------------------------------------------


@dataclass(frozen=True)
class TreeLeaf:
    """A single copy of the leaf structure."""


@dataclass(frozen=True)
class TreeJoin:
    """Free amalgam of two subtree results over an overlap structure.

    f1 and f2 are vertex maps embedding the overlap into the left and right
    subtree results; each image must lie inside an irreducible substructure.
    """

    overlap: Structure
    left: Union["TreeJoin", TreeLeaf]
    right: Union["TreeJoin", TreeLeaf]
    f1: tuple[int, ...]
    f2: tuple[int, ...]


@dataclass(frozen=True)
class TreeAmalgamSpec:
    leaf: Structure
    recipe: Union[TreeJoin, TreeLeaf] = field(default_factory=TreeLeaf)


def _image_in_some_irreducible(s: Structure, image: set[int]) -> bool:
    for sub in _closed_subsets(s):
        if image <= set(sub):
            part, _ = induced_substructure(s, sub)
            if is_irreducible(part)[0]:
                return True
    return False


def tree_amalgam(spec: TreeAmalgamSpec) -> tuple[Structure, list[EmbeddingMap]]:
    """Evaluate the recipe; returns the result and one leaf embedding per leaf.

    Leaf embeddings come in left-to-right order of the recipe tree.
    """

    def walk(node, path: tuple[str, ...]) -> tuple[Structure, list[tuple[int, ...]]]:
        if isinstance(node, TreeLeaf):
            return spec.leaf, [tuple(range(spec.leaf.size))]
        c1, leaves1 = walk(node.left, path + ("L",))
        c2, leaves2 = walk(node.right, path + ("R",))
        for f, side in ((node.f1, c1), (node.f2, c2)):
            kind = classify_map(f, node.overlap, side)
            if kind is None or _KIND_RANK[kind] < _KIND_RANK[EMBEDDING]:
                raise InvalidInput(f"overlap map {f} at {'/'.join(path) or 'root'} is not an embedding")
            if not _image_in_some_irreducible(side, set(f)):
                raise OverlapNotInIrreducible(path, set(f))
        problem = AmalgamationProblem(
            node.overlap,
            c1,
            c2,
            EmbeddingMap(node.overlap, c1, node.f1, EMBEDDING),
            EmbeddingMap(node.overlap, c2, node.f2, EMBEDDING),
        )
        c, beta1, beta2 = free_amalgam(problem)
        out = [tuple(beta1.map[v] for v in leaf) for leaf in leaves1]
        out += [tuple(beta2.map[v] for v in leaf) for leaf in leaves2]
        return c, out

    result, leaf_maps = walk(spec.recipe, ())
    return result, [EmbeddingMap(spec.leaf, result, m, EMBEDDING) for m in leaf_maps]


# Finite-catalog class properties --------------------------------------------


@dataclass
class PropertyStatus:
    status: str  # verified | violated | unknown
    counterexample: Optional[tuple] = None


@dataclass
class ClassPropertiesReport:
    hereditary: PropertyStatus
    jep: PropertyStatus
    ap: PropertyStatus
    strong_ap: PropertyStatus
    free_ap: PropertyStatus


def _iso_member(s: Structure, catalog: Sequence[Structure]) -> Optional[int]:
    for i, m in enumerate(catalog):
        if m.size != s.size or m.language != s.language:
            continue
        counts = tuple(len(m.rels[n]) for n in m.language.relation_names)
        if counts != tuple(len(s.rels[n]) for n in s.language.relation_names):
            continue
        if enumerate_embeddings(s, m):
            return i
    return None


def check_class_properties(catalog: Sequence[Structure], bound: int) -> ClassPropertiesReport:
    """Hereditary / JEP / AP / strong AP / free AP over a finite catalog.

    Instances are pairs or amalgamation triples drawn from the catalog whose
    glued size fits within the bound; witnesses are searched among catalog
    members of size at most the bound.  A property is unknown when a witness
    search had to skip catalog members above the bound.
    """
    catalog = list(catalog)
    if not catalog:
        raise InvalidInput("empty catalog")
    lang = catalog[0].language
    if any(m.language != lang for m in catalog):
        raise InvalidInput("catalog members must share a language")
    small = [m for m in catalog if m.size <= bound]
    has_big = len(small) < len(catalog)

    # Hereditary: every closed subset of every member stays in the catalog.
    hereditary = PropertyStatus("verified")
    for i, m in enumerate(catalog):
        for sub in _closed_subsets(m):
            if len(sub) == m.size:
                continue
            part, _ = induced_substructure(m, sub)
            if _iso_member(part, catalog) is None:
                hereditary = PropertyStatus("violated", (i, sub))
                break
        if hereditary.status == "violated":
            break

    def search(check) -> Optional[bool]:
        """True if some small member witnesses; None if only big ones remain."""
        for c in small:
            if check(c):
                return True
        return None if has_big else False

    # JEP over pairs whose disjoint union fits within the bound.
    jep = PropertyStatus("verified")
    for i, b1 in enumerate(catalog):
        for j in range(i, len(catalog)):
            b2 = catalog[j]
            if b1.size + b2.size > bound:
                continue
            got = search(lambda c: enumerate_embeddings(b1, c) and enumerate_embeddings(b2, c))
            if got is True:
                continue
            jep = PropertyStatus("unknown" if got is None else "violated", (i, j))
            break
        if jep.status != "verified":
            break

    # Amalgamation over all embedded-base triples within the bound.
    def amalgam_instances():
        for ia, a in enumerate(catalog):
            for i1, b1 in enumerate(catalog):
                for i2, b2 in enumerate(catalog):
                    if b1.size + b2.size - a.size > bound:
                        continue
                    e1s = enumerate_embeddings(a, b1)
                    if not e1s:
                        continue
                    e2s = enumerate_embeddings(a, b2)
                    if not e2s:
                        continue
                    for a1 in e1s:
                        for a2 in e2s:
                            yield ia, i1, i2, a1, a2

    def has_witness(a, b1, b2, a1, a2, strong: bool):
        def check(c):
            for e1 in enumerate_embeddings(b1, c):
                via1 = e1.compose(a1)
                for e2 in enumerate_embeddings(b2, c):
                    if e2.compose(a2) != via1:
                        continue
                    if strong and set(e1.map) & set(e2.map) != set(via1):
                        continue
                    return True
            return False

        return search(check)

    ap = PropertyStatus("verified")
    strong_ap = PropertyStatus("verified")
    free_ap = PropertyStatus("verified")
    for ia, i1, i2, a1, a2 in amalgam_instances():
        a, b1, b2 = catalog[ia], catalog[i1], catalog[i2]
        instance = (ia, i1, i2, a1.map, a2.map)
        if ap.status == "verified":
            got = has_witness(a, b1, b2, a1, a2, strong=False)
            if got is not True:
                ap = PropertyStatus("unknown" if got is None else "violated", instance)
        if strong_ap.status == "verified":
            got = has_witness(a, b1, b2, a1, a2, strong=True)
            if got is not True:
                strong_ap = PropertyStatus("unknown" if got is None else "violated", instance)
        if free_ap.status == "verified":
            c, _, _ = free_amalgam(AmalgamationProblem(a, b1, b2, a1, a2))
            if _iso_member(c, catalog) is None:
                free_ap = PropertyStatus("violated", instance)
        if "verified" not in (ap.status, strong_ap.status, free_ap.status):
            break

    return ClassPropertiesReport(hereditary, jep, ap, strong_ap, free_ap)


def forbidden_free(
    s: Structure,
    family: Sequence[Structure],
    mode: str = EMBEDDING,
) -> Optional[tuple[int, tuple[int, ...]]]:
    """First (family index, map) hitting s at the given strength, or None.

    None means s avoids every family member in the requested mode.
    """
    if mode not in (EMBEDDING, MONOMORPHISM, HOMOMORPHISM, HOM_EMBEDDING):
        raise InvalidInput(f"unsupported mode {mode!r}")
    for i, f in enumerate(family):
        if mode == EMBEDDING:
            embs = enumerate_embeddings(f, s)
            if embs:
                return i, embs[0].map
            continue
        for candidate in product(range(s.size), repeat=f.size):
            kind = classify_map(candidate, f, s)
            if kind is None:
                continue
            # Hom-embeddings need not be injective, so monomorphism is
            # a side condition rather than a rung below them.
            if mode == MONOMORPHISM and len(set(candidate)) != f.size:
                continue
            if mode == HOM_EMBEDDING and _KIND_RANK[kind] < _KIND_RANK[HOM_EMBEDDING]:
                continue
            return i, candidate
    return None
