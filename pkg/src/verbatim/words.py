"""Symbols with an involution, words over them, and the word-level involution.

Letters are stored as integer indices into an :class:`Alphabet`; the
alphabet order is the "symbol order" used everywhere for lexicographic
comparisons.  Starred partners are ordinary members of the alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError

Letters = tuple[int, ...]


@dataclass(frozen=True)
class Symbol:
    name: str
    adjoint_name: str

    @property
    def is_selfadjoint(self) -> bool:
        return self.name == self.adjoint_name


class Alphabet:
    """Ordered, involution-closed set of symbols."""

    __slots__ = ("symbols", "_index", "_adjoint", "_hash")

    def __init__(self, symbols: Iterable[Symbol]):
        symbols = tuple(symbols)
        index: dict[str, int] = {}
        for i, s in enumerate(symbols):
            if not s.name or any(c.isspace() for c in s.name):
                raise ParseError(f"invalid symbol name {s.name!r}")
            if s.name in index:
                raise ParseError(f"duplicate symbol name {s.name!r}")
            index[s.name] = i
        adjoint = []
        for s in symbols:
            partner = index.get(s.adjoint_name)
            if partner is None:
                raise ParseError(f"adjoint {s.adjoint_name!r} of {s.name!r} is not in the alphabet")
            if symbols[partner].adjoint_name != s.name:
                raise ParseError(f"involution is not an involution at {s.name!r}")
            adjoint.append(partner)
        self.symbols = symbols
        self._index = index
        self._adjoint = tuple(adjoint)
        self._hash = hash(symbols)

    @classmethod
    def from_pairs(cls, *pairs: tuple[str, str] | str) -> "Alphabet":
        """Build from ``(name, adjoint)`` pairs; a bare string is self-adjoint.

        Each analytic pair contributes both members, in the order given.

        >>> Alphabet.from_pairs(("z", "z*"), "x").names
        ('z', 'z*', 'x')
        """
        symbols: list[Symbol] = []
        for p in pairs:
            if isinstance(p, str):
                symbols.append(Symbol(p, p))
            else:
                a, b = p
                symbols.append(Symbol(a, b))
                if a != b:
                    symbols.append(Symbol(b, a))
        return cls(symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Alphabet({list(self.names)!r})"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.symbols)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ParseError(f"unknown symbol {name}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def adjoint(self, i: int) -> int:
        return self._adjoint[i]

    def is_selfadjoint(self, i: int) -> bool:
        return self._adjoint[i] == i

    def base_indices(self) -> list[int]:
        """Self-adjoint symbols plus the first-listed member of each analytic pair."""
        return [i for i, j in enumerate(self._adjoint) if i <= j]

    def involute_letters(self, letters: Sequence[int]) -> Letters:
        adj = self._adjoint
        return tuple(adj[i] for i in reversed(letters))

    def to_json(self) -> list[dict]:
        return [{"name": s.name, "adjoint": s.adjoint_name} for s in self.symbols]

    @classmethod
    def from_json(cls, data) -> "Alphabet":
        if not isinstance(data, list):
            raise ParseError("alphabet: expected a list of {name, adjoint} objects")
        symbols = []
        for k, entry in enumerate(data):
            if not isinstance(entry, dict) or "name" not in entry:
                raise ParseError(f"alphabet[{k}]: missing key 'name'")
            name = entry["name"]
            symbols.append(Symbol(name, entry.get("adjoint", name)))
        return cls(symbols)


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    letters: Letters

    def __post_init__(self):
        n = len(self.alphabet)
        for i in self.letters:
            if not 0 <= i < n:
                raise ParseError(f"letter index {i} is outside the alphabet")

    @classmethod
    def from_names(cls, alphabet: Alphabet, names: Iterable[str]) -> "Word":
        return cls(alphabet, tuple(alphabet.index(n) for n in names))

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def names(self) -> list[str]:
        syms = self.alphabet.symbols
        return [syms[i].name for i in self.letters]

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise ValueError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.letters + other.letters)

    def sort_key(self) -> tuple[int, Letters]:
        return (len(self.letters), self.letters)

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        names = self.names
        if all(len(n) == 1 for n in names):
            return "".join(names)
        return " ".join(names)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def to_json(self) -> list[str]:
        return self.names


def involute(w: Word) -> Word:
    """Reverse the word and replace every letter by its adjoint."""
    return Word(w.alphabet, w.alphabet.involute_letters(w.letters))


def is_selfadjoint_word(w: Word) -> bool:
    return w.alphabet.involute_letters(w.letters) == w.letters


def _split_chunk(chunk: str, alphabet: Alphabet) -> list[str]:
    if chunk in alphabet:
        return [chunk]
    # Greedy longest match; chunks like "xx" or "[[]]" are runs of glued names.
    names = sorted(alphabet.names, key=len, reverse=True)
    out, pos = [], 0
    while pos < len(chunk):
        for name in names:
            if chunk.startswith(name, pos):
                out.append(name)
                pos += len(name)
                break
        else:
            bad = chunk[pos:].split("[")[0].split("]")[0] or chunk[pos:]
            raise ParseError(f"unknown symbol {bad}")
    return out


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse whitespace-separated (or glued) symbol names into a word.

    >>> a = Alphabet.from_pairs(("z", "z_star"))
    >>> parse_word("z z_star", a).names
    ['z', 'z_star']
    """
    names: list[str] = []
    for chunk in text.split():
        names.extend(_split_chunk(chunk, alphabet))
    return Word.from_names(alphabet, names)
