"""Words, parameter words, combinatorial lines, and tiny Hales-Jewett searches.

True Hales-Jewett numbers are astronomically large; the searches here exist
to pin down the smallest cases exactly and to feed explicit exponents into
the partite constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .errors import DEFAULT_NODE_CAP, InvalidInput, SearchCapExceeded

LAMBDA = None  # the parameter symbol in a parameter word


class LetterNotInAlphabet(InvalidInput):
    def __init__(self, letter, alphabet):
        super().__init__(f"letter {letter!r} not in alphabet {list(alphabet)!r}")


@dataclass(frozen=True)
class Word:
    """A fixed-length word: alphabet of opaque letters, letters as indices."""

    alphabet: tuple
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "letters", tuple(int(i) for i in self.letters))
        if not self.alphabet:
            raise InvalidInput("empty alphabet")
        for i in self.letters:
            if not (0 <= i < len(self.alphabet)):
                raise InvalidInput(f"letter index {i} out of alphabet range")

    def __len__(self):
        return len(self.letters)

    def spelled(self) -> tuple:
        return tuple(self.alphabet[i] for i in self.letters)


@dataclass(frozen=True)
class ParameterWord:
    """A word over the alphabet plus the parameter symbol (stored as None)."""

    alphabet: tuple
    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        letters = tuple(None if i is None else int(i) for i in self.letters)
        object.__setattr__(self, "letters", letters)
        if not self.alphabet:
            raise InvalidInput("empty alphabet")
        if not any(i is None for i in letters):
            raise InvalidInput("parameter word needs at least one parameter position")
        for i in letters:
            if i is not None and not (0 <= i < len(self.alphabet)):
                raise InvalidInput(f"letter index {i} out of alphabet range")

    def __len__(self):
        return len(self.letters)


def substitute(w: ParameterWord, a) -> Word:
    """W(a): replace every parameter position with the letter a."""
    try:
        idx = w.alphabet.index(a)
    except ValueError:
        raise LetterNotInAlphabet(a, w.alphabet) from None
    return Word(w.alphabet, tuple(idx if i is None else i for i in w.letters))


def line_of(w: ParameterWord) -> tuple[Word, ...]:
    """The combinatorial line {W(a): a in alphabet}, in alphabet order."""
    return tuple(substitute(w, a) for a in w.alphabet)


def all_words(sigma_size: int, n: int) -> list[Word]:
    alphabet = tuple(range(sigma_size))
    return [Word(alphabet, t) for t in product(range(sigma_size), repeat=n)]


def enumerate_parameter_words(sigma_size: int, n: int) -> list[ParameterWord]:
    """All (sigma+1)^n - sigma^n parameter words; parameter sorts last."""
    if sigma_size < 1 or n < 1:
        raise InvalidInput("need sigma_size >= 1 and n >= 1")
    alphabet = tuple(range(sigma_size))
    symbols = list(range(sigma_size)) + [None]
    out = []
    for t in product(symbols, repeat=n):
        if any(i is None for i in t):
            out.append(ParameterWord(alphabet, t))
    return out


def enumerate_lines(sigma_size: int, n: int) -> list[tuple[ParameterWord, tuple[Word, ...]]]:
    return [(w, line_of(w)) for w in enumerate_parameter_words(sigma_size, n)]


def find_bad_coloring(
    sigma_size: int,
    n: int,
    colors: int,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Optional[tuple[int, ...]]:
    """Lexicographically least r-coloring of all words with no monochromatic
    line, or None when every coloring has one.

    Words are indexed in lexicographic order; the first word's color is
    pinned to 0, which preserves lex-least-ness up to color renaming.
    """
    if colors < 1:
        raise InvalidInput("need at least one color")
    if sigma_size < 1 or n < 1:
        raise InvalidInput("need sigma_size >= 1 and n >= 1")
    words = all_words(sigma_size, n)
    index = {w.letters: i for i, w in enumerate(words)}
    lines = []
    for pw in enumerate_parameter_words(sigma_size, n):
        lines.append(tuple(sorted(index[w.letters] for w in line_of(pw))))
    lines = sorted(set(lines))
    lines_by_last = {i: [] for i in range(len(words))}
    for line in lines:
        lines_by_last[line[-1]].append(line)

    coloring = [0] * len(words)
    nodes = 0

    def extend(i: int) -> bool:
        nonlocal nodes
        if i == len(words):
            return True
        first = range(1) if i == 0 else range(colors)
        for c in first:
            nodes += 1
            if nodes > node_cap:
                raise SearchCapExceeded("bad-coloring search budget exhausted", cap=node_cap)
            coloring[i] = c
            if all(
                any(coloring[j] != c for j in line[:-1])
                for line in lines_by_last[i]
            ):
                if extend(i + 1):
                    return True
        return False

    if extend(0):
        return tuple(coloring)
    return None


def hj_number(sigma_size: int, colors: int, cap: int = 6, node_cap: int = DEFAULT_NODE_CAP) -> Optional[int]:
    """Least n <= cap where every coloring has a monochromatic line; None if
    no such n within the cap."""
    if cap < 1:
        raise InvalidInput("cap must be >= 1")
    for n in range(1, cap + 1):
        if find_bad_coloring(sigma_size, n, colors, node_cap=node_cap) is None:
            return n
    return None
