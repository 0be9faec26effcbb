"""Plain-text files holding named languages and structures.

The format is line oriented and whitespace tolerant:

    language L
      rel E 2
      fun F 1
    end

    structure G over L
      vertices 3
      rel E: 0 1; 1 0
      fun F: (0) -> {1 2}; (1) -> {0}
    end

Blank lines and `#` comments are skipped.  Omitted relation lines mean the
relation is empty; omitted function entries mean the empty value set.  The
serializer emits a canonical form (two-space indent, sorted tuples, one blank
line between sections) and canonical files round-trip byte-identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InvalidInput
from .structures import Language, Structure

_NAME = re.compile(r"^[^\s(){}:;#]+$")
_FUN_ENTRY = re.compile(r"^\(([^()]*)\)\s*->\s*\{([^{}]*)\}$")


class ParseError(InvalidInput):
    """A structure-file syntax or consistency error, with its line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class StructureFile:
    """Named languages and structures, in declaration order."""

    languages: dict[str, Language] = field(default_factory=dict)
    structures: dict[str, Structure] = field(default_factory=dict)
    structure_language: dict[str, str] = field(default_factory=dict)
    order: tuple[tuple[str, str], ...] = ()

    def only_structure(self) -> tuple[str, Structure]:
        if len(self.structures) != 1:
            raise InvalidInput(
                f"expected exactly one structure, found {len(self.structures)}"
            )
        name = next(iter(self.structures))
        return name, self.structures[name]

    def add_language(self, name: str, lang: Language) -> None:
        if name in self.languages:
            raise InvalidInput(f"duplicate language {name!r}")
        self.languages[name] = lang
        self.order = self.order + (("language", name),)

    def add_structure(self, name: str, lang_name: str, s: Structure) -> None:
        if name in self.structures:
            raise InvalidInput(f"duplicate structure {name!r}")
        if lang_name not in self.languages:
            raise InvalidInput(f"unknown language {lang_name!r}")
        if self.languages[lang_name] != s.language:
            raise InvalidInput(
                f"structure {name!r} does not use language {lang_name!r}"
            )
        self.structures[name] = s
        self.structure_language[name] = lang_name
        self.order = self.order + (("structure", name),)


def _check_name(line_no: int, token: str, what: str) -> str:
    if not _NAME.match(token):
        raise ParseError(line_no, f"bad {what} name {token!r}")
    return token


def _int(line_no: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, f"bad {what} {token!r}") from None


def parse_structure_file(text: str) -> StructureFile:
    out = StructureFile()
    section = None  # None | ["language", name, rels, funs]
    #                      | ["structure", name, lang, n, rels, funs]
    last = 0
    for line_no, raw in enumerate(text.split("\n"), start=1):
        last = line_no
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]

        if section is None:
            if head == "language":
                if len(words) != 2:
                    raise ParseError(line_no, "expected: language NAME")
                name = _check_name(line_no, words[1], "language")
                if name in out.languages:
                    raise ParseError(line_no, f"duplicate language {name!r}")
                section = ["language", name, [], []]
            elif head == "structure":
                if len(words) != 4 or words[2] != "over":
                    raise ParseError(line_no, "expected: structure NAME over LANG")
                name = _check_name(line_no, words[1], "structure")
                if name in out.structures:
                    raise ParseError(line_no, f"duplicate structure {name!r}")
                lang = words[3]
                if lang not in out.languages:
                    raise ParseError(line_no, f"unknown language {lang!r}")
                section = ["structure", name, lang, None, {}, {}]
            else:
                raise ParseError(line_no, f"unexpected {head!r} outside a section")
            continue

        if section[0] == "language":
            _, name, rels, funs = section
            if head == "end":
                out.add_language(name, Language(tuple(rels), tuple(funs)))
                section = None
            elif head in ("rel", "fun"):
                if len(words) != 3:
                    raise ParseError(line_no, f"expected: {head} NAME ARITY")
                sym = _check_name(line_no, words[1], "symbol")
                if any(sym == r for r, _ in rels) or any(sym == f for f, _ in funs):
                    raise ParseError(line_no, f"duplicate symbol {sym!r}")
                arity = _int(line_no, words[2], "arity")
                if arity < 1:
                    raise ParseError(line_no, "arity must be positive")
                (rels if head == "rel" else funs).append((sym, arity))
            else:
                raise ParseError(line_no, f"unexpected {head!r} in a language section")
            continue

        _, name, lang_name, n, rels, funs = section
        lang = out.languages[lang_name]
        if head == "end":
            if n is None:
                raise ParseError(line_no, f"structure {name!r} has no vertices line")
            out.add_structure(name, lang_name, Structure(lang, n, rels, funs))
            section = None
        elif head == "vertices":
            if len(words) != 2:
                raise ParseError(line_no, "expected: vertices N")
            if n is not None:
                raise ParseError(line_no, "duplicate vertices line")
            count = _int(line_no, words[1], "vertex count")
            if count < 0:
                raise ParseError(line_no, "vertex count must be nonnegative")
            section[3] = count
        elif head in ("rel", "fun"):
            if n is None:
                raise ParseError(line_no, "vertices line must come first")
            stripped = line[len(head):].strip()
            if ":" not in stripped:
                raise ParseError(line_no, f"expected: {head} NAME: entries")
            sym, payload = (part.strip() for part in stripped.split(":", 1))
            if head == "rel":
                if not lang.is_relation(sym):
                    raise ParseError(line_no, f"unknown relation {sym!r}")
                if sym in rels:
                    raise ParseError(line_no, f"duplicate relation line for {sym!r}")
                arity = lang.arity(sym)
                tuples = []
                for part in payload.split(";"):
                    part = part.strip()
                    if not part:
                        continue
                    t = tuple(_int(line_no, w, "vertex id") for w in part.split())
                    if len(t) != arity:
                        raise ParseError(
                            line_no, f"relation {sym!r} has arity {arity}, got {t}"
                        )
                    if any(not 0 <= v < n for v in t):
                        raise ParseError(line_no, f"vertex out of range in {t}")
                    tuples.append(t)
                rels[sym] = tuples
            else:
                if not lang.is_function(sym):
                    raise ParseError(line_no, f"unknown function {sym!r}")
                if sym in funs:
                    raise ParseError(line_no, f"duplicate function line for {sym!r}")
                arity = lang.arity(sym)
                entries = {}
                for part in payload.split(";"):
                    part = part.strip()
                    if not part:
                        continue
                    m = _FUN_ENTRY.match(part)
                    if not m:
                        raise ParseError(
                            line_no, f"expected (args) -> {{ids}}, got {part!r}"
                        )
                    args = tuple(
                        _int(line_no, w, "vertex id") for w in m.group(1).split()
                    )
                    vals = [_int(line_no, w, "vertex id") for w in m.group(2).split()]
                    if len(args) != arity:
                        raise ParseError(
                            line_no, f"function {sym!r} has arity {arity}, got {args}"
                        )
                    if any(not 0 <= v < n for v in args + tuple(vals)):
                        raise ParseError(line_no, f"vertex out of range in {part!r}")
                    if args in entries:
                        raise ParseError(line_no, f"duplicate entry for {args}")
                    if vals:
                        entries[args] = vals
                funs[sym] = entries
        else:
            raise ParseError(line_no, f"unexpected {head!r} in a structure section")

    if section is not None:
        raise ParseError(last, f"unterminated {section[0]} section")
    return out


def serialize_structure_file(sf: StructureFile) -> str:
    blocks = []
    for kind, name in sf.order:
        if kind == "language":
            lang = sf.languages[name]
            lines = [f"language {name}"]
            lines += [f"  rel {r} {a}" for r, a in lang.relations]
            lines += [f"  fun {f} {a}" for f, a in lang.functions]
            lines.append("end")
        else:
            s = sf.structures[name]
            lines = [f"structure {name} over {sf.structure_language[name]}"]
            lines.append(f"  vertices {s.size}")
            for sym, _ in s.language.relations:
                tuples = sorted(s.rels[sym])
                if tuples:
                    body = "; ".join(" ".join(str(v) for v in t) for t in tuples)
                    lines.append(f"  rel {sym}: {body}")
            for sym, _ in s.language.functions:
                entries = [
                    (args, sorted(vals))
                    for args, vals in sorted(s.funs[sym].items())
                    if vals
                ]
                if entries:
                    body = "; ".join(
                        f"({' '.join(str(v) for v in args)})"
                        f" -> {{{' '.join(str(v) for v in vals)}}}"
                        for args, vals in entries
                    )
                    lines.append(f"  fun {sym}: {body}")
            lines.append("end")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def read_structure_file(path) -> StructureFile:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_structure_file(fh.read())


def write_structure_file(path, sf: StructureFile) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_structure_file(sf))


def file_for(structures: dict[str, Structure], lang_name: str = "L") -> StructureFile:
    """Bundle structures sharing one language into a file object."""
    langs = {s.language for s in structures.values()}
    if len(langs) != 1:
        raise InvalidInput("structures must share a language")
    sf = StructureFile()
    sf.add_language(lang_name, next(iter(langs)))
    for name, s in structures.items():
        sf.add_structure(name, lang_name, s)
    return sf
