"""Formal languages: explicit word sets, built-in lattice-path languages, graph languages.

All representations answer membership on letter tuples and enumerate their
words up to a length cutoff in length-then-lexicographic order.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import AmbiguousGraphError, OutOfRangeError, ParseError
from .graph import ChromaticGraph
from .words import Alphabet, Letters, Word, parse_word


class Language:
    """Base class.  Subclasses implement ``contains`` and ``_enumerate``."""

    alphabet: Alphabet
    #: Longest length for which membership is decidable; ``None`` means unbounded.
    degree_bound: int | None = None

    def contains(self, letters: Letters) -> bool:
        raise NotImplementedError

    def _enumerate(self, max_len: int) -> list[Letters]:
        raise NotImplementedError

    @property
    def longest_word(self) -> int | None:
        """Length of the longest word for finite languages, else ``None``."""
        return None

    def _check_range(self, n: int) -> None:
        if self.degree_bound is not None and n > self.degree_bound:
            raise OutOfRangeError(
                f"length {n} exceeds the language's degree bound {self.degree_bound}")

    def member(self, letters: Sequence[int]) -> bool:
        letters = tuple(letters)
        self._check_range(len(letters))
        return self.contains(letters)

    def words(self, max_len: int) -> list[Letters]:
        if max_len < 0:
            raise ValueError("max_len must be non-negative")
        self._check_range(max_len)
        return self._enumerate(max_len)

    def word(self, letters: Iterable[int]) -> Word:
        return Word(self.alphabet, tuple(letters))

    def parse(self, text: str) -> Word:
        return parse_word(text, self.alphabet)


def _length_lex(words: Iterable[Letters]) -> list[Letters]:
    return sorted(words, key=lambda w: (len(w), w))


class ExplicitLanguage(Language):
    """A finite list of words.

    Without a ``degree_bound`` the list is the whole language, so membership
    is decidable at every length.  With one, the list is only trusted up to
    that length and longer queries raise :class:`OutOfRangeError`.
    """

    def __init__(self, alphabet: Alphabet, words: Iterable[Sequence[int]],
                 degree_bound: int | None = None):
        self.alphabet = alphabet
        self.degree_bound = degree_bound
        ws = set()
        n = len(alphabet)
        for w in words:
            w = tuple(w)
            if any(not 0 <= i < n for i in w):
                raise ParseError(f"explicit word {w} is not over the alphabet")
            if degree_bound is not None and len(w) > degree_bound:
                raise ParseError(f"explicit word of length {len(w)} exceeds degree_bound {degree_bound}")
            ws.add(w)
        self.word_set = frozenset(ws)

    @classmethod
    def from_text(cls, alphabet: Alphabet, texts: Iterable[str], **kw) -> "ExplicitLanguage":
        return cls(alphabet, [parse_word(t, alphabet).letters for t in texts], **kw)

    @property
    def longest_word(self) -> int | None:
        if self.degree_bound is not None:
            return None
        return max((len(w) for w in self.word_set), default=0)

    def contains(self, letters: Letters) -> bool:
        return letters in self.word_set

    def _enumerate(self, max_len: int) -> list[Letters]:
        return _length_lex(w for w in self.word_set if len(w) <= max_len)

    def __repr__(self) -> str:
        return f"ExplicitLanguage({len(self.word_set)} words)"


# Automaton states shared by the built-ins; non-negative states are heights.
_START, _DONE, _MID = -1, -2, -3
_DEAD = math.inf


class _PathAutomaton:
    """One-counter automaton for the Dyck/Motzkin family and the Schur loop language."""

    def __init__(self, kind: str):
        self.kind = kind
        self.irreducible = kind in ("irreducible_dyck", "irreducible_motzkin", "amt_core")
        self.flats = kind in ("motzkin", "irreducible_motzkin", "amt_core")
        self.bare_flat = kind == "irreducible_motzkin"

    # letters: 0 = up "[", 1 = down "]", 2 = flat "x"; for schur_loop 0 = b, 1 = b*, 2 = d
    def step(self, s: int, c: int) -> int | None:
        if self.kind == "schur_loop":
            if s == _START:
                return _MID if c == 0 else None
            if s == _MID:
                return _MID if c == 2 else (_DONE if c == 1 else None)
            return None
        if s == _DONE:
            return None
        if s == _START:
            if c == 0:
                return 1
            if c == 2:
                if self.bare_flat:
                    return _DONE
                if self.flats and not self.irreducible:
                    return 0
            return None
        if c == 0:
            return s + 1
        if c == 2:
            return s if (self.flats and not (self.irreducible and s == 0)) else None
        if s == 0:
            return None
        if self.irreducible and s == 1:
            return _DONE
        return s - 1

    def accepts(self, s: int) -> bool:
        if self.kind == "schur_loop" or self.irreducible:
            return s == _DONE
        return s == 0

    def need(self, s: int) -> float:
        """Fewest further letters that reach an accepting state."""
        if s == _DONE:
            return 0
        if s == _MID:
            return 1
        if s == _START:
            if self.kind == "schur_loop":
                return 2
            return 1 if (self.bare_flat or (self.flats and not self.irreducible)) else 2
        return s


BUILTIN_NAMES = ("dyck", "irreducible_dyck", "motzkin", "irreducible_motzkin", "amt_core", "schur_loop")


def builtin_alphabet(name: str) -> Alphabet:
    if name in ("dyck", "irreducible_dyck"):
        return Alphabet.from_pairs(("[", "]"))
    if name in ("motzkin", "irreducible_motzkin", "amt_core"):
        return Alphabet.from_pairs(("[", "]"), "x")
    if name == "schur_loop":
        return Alphabet.from_pairs(("b", "b*"), "d")
    raise ParseError(f"unknown builtin language {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")


class BuiltinLanguage(Language):
    """Built-in lattice-path languages.

    ``alphabet`` may rename the canonical symbols (e.g. ``Z``/``Z*`` for
    ``[``/``]``) provided the involution structure matches position by position.
    """

    def __init__(self, name: str, alphabet: Alphabet | None = None):
        canonical = builtin_alphabet(name)
        if alphabet is None:
            alphabet = canonical
        elif [alphabet.adjoint(i) for i in range(len(alphabet))] != \
                [canonical.adjoint(i) for i in range(len(canonical))]:
            raise ParseError(
                f"alphabet does not match the structure of builtin {name!r} "
                f"(expected the shape of {list(canonical.names)})")
        self.name = name
        self.alphabet = alphabet
        self._auto = _PathAutomaton(name)

    def contains(self, letters: Letters) -> bool:
        s = _START
        step = self._auto.step
        for c in letters:
            s = step(s, c)
            if s is None:
                return False
        return bool(letters) and self._auto.accepts(s)

    def _enumerate(self, max_len: int) -> list[Letters]:
        auto = self._auto
        g = len(self.alphabet)
        frontier: list[tuple[Letters, int]] = [((), _START)]
        out: list[Letters] = []
        for k in range(1, max_len + 1):
            left = max_len - k
            nxt = []
            for prefix, s in frontier:
                for c in range(g):
                    t = auto.step(s, c)
                    if t is None or auto.need(t) > left:
                        continue
                    w = prefix + (c,)
                    if auto.accepts(t):
                        out.append(w)
                    nxt.append((w, t))
            frontier = nxt
        return out

    def __repr__(self) -> str:
        return f"BuiltinLanguage({self.name!r})"


class GraphLanguage(Language):
    """Words ``a_i* w a_j`` whose walk from the anchor of ``a_j`` to the anchor of ``a_i`` is unique.

    Letters act on vertex indicator vectors rightmost-first.
    """

    def __init__(self, graph: ChromaticGraph):
        self.graph = graph
        self.alphabet = graph.alphabet
        self._T = graph.transfer_matrices()
        self._anchor = graph.anchor_indices()
        self._n = len(graph.vertices)

    def walk_count(self, letters: Letters) -> int:
        if len(letters) < 2:
            return 0
        a_i = self.alphabet.adjoint(letters[0])
        src, dst = self._anchor[letters[-1]], self._anchor[a_i]
        if src is None or dst is None:
            return 0
        vec = np.zeros(self._n, dtype=np.int64)
        vec[src] = 1
        for c in reversed(letters[1:-1]):
            vec = self._T[c] @ vec
            if not vec.any():
                return 0
        return int(vec[dst])

    def contains(self, letters: Letters) -> bool:
        count = self.walk_count(letters)
        if count >= 2:
            raise AmbiguousGraphError(Word(self.alphabet, letters), count)
        return count == 1

    def _enumerate(self, max_len: int) -> list[Letters]:
        alphabet = self.alphabet
        g = len(alphabet)
        # suffixes a_j, then grow leftwards while some walk survives
        frontier = []
        for c in range(g):
            if self._anchor[c] is not None:
                vec = np.zeros(self._n, dtype=np.int64)
                vec[self._anchor[c]] = 1
                frontier.append(((c,), vec))
        out = []
        for k in range(1, max_len):
            for suffix, vec in frontier:
                for f in range(g):
                    dst = self._anchor[alphabet.adjoint(f)]
                    if dst is None or vec[dst] == 0:
                        continue
                    w = (f,) + suffix
                    if vec[dst] >= 2:
                        raise AmbiguousGraphError(Word(alphabet, w), int(vec[dst]))
                    out.append(w)
            if k == max_len - 1:
                break
            nxt = []
            for suffix, vec in frontier:
                for c in range(g):
                    v2 = self._T[c] @ vec
                    if v2.any():
                        nxt.append(((c,) + suffix, v2))
            frontier = nxt
        return _length_lex(out)

    def __repr__(self) -> str:
        return f"GraphLanguage({len(self.graph.vertices)} vertices)"


# ---------------------------------------------------------------------------
# operation-level API


def membership(L: Language, w: Word) -> bool:
    if w.alphabet != L.alphabet:
        raise ParseError("word and language use different alphabets")
    return L.member(w.letters)


def enumerate_words(L: Language, max_len: int) -> list[Word]:
    """All words of ``L`` of length at most ``max_len``, length-then-lexicographic."""
    return [Word(L.alphabet, w) for w in L.words(max_len)]


def counts_by_length(L: Language, max_len: int) -> list[int]:
    counts = [0] * (max_len + 1)
    for w in L.words(max_len):
        counts[len(w)] += 1
    return counts


def builtin(name: str) -> BuiltinLanguage:
    return BuiltinLanguage(name)


def load_language(data: dict) -> Language:
    """Build a language from the language-spec JSON object."""
    if not isinstance(data, dict):
        raise ParseError("spec: expected a JSON object")
    if "language" not in data:
        raise ParseError("spec.language: missing")
    lang = data["language"]
    kind = lang.get("kind") if isinstance(lang, dict) else None
    alphabet = Alphabet.from_json(data["alphabet"]) if "alphabet" in data else None
    if kind == "builtin":
        if "name" not in lang:
            raise ParseError("spec.language.name: missing")
        return BuiltinLanguage(lang["name"], alphabet)
    if alphabet is None:
        raise ParseError("spec.alphabet: missing")
    if kind == "explicit":
        if "words" not in lang:
            raise ParseError("spec.language.words: missing")
        words = []
        for k, w in enumerate(lang["words"]):
            try:
                if isinstance(w, str):
                    words.append(parse_word(w, alphabet).letters)
                else:
                    words.append(tuple(alphabet.index(n) for n in w))
            except ParseError as exc:
                raise ParseError(f"spec.language.words[{k}]: {exc}") from None
        return ExplicitLanguage(alphabet, words, lang.get("degree_bound"))
    if kind == "graph":
        return GraphLanguage(ChromaticGraph.from_json(alphabet, lang))
    raise ParseError(f"spec.language.kind: expected builtin, explicit or graph, got {kind!r}")


def language_to_json(L: Language) -> dict:
    if isinstance(L, BuiltinLanguage):
        return {"alphabet": L.alphabet.to_json(), "language": {"kind": "builtin", "name": L.name}}
    if isinstance(L, ExplicitLanguage):
        lang = {"kind": "explicit",
                "words": [Word(L.alphabet, w).names for w in _length_lex(L.word_set)]}
        if L.degree_bound is not None:
            lang["degree_bound"] = L.degree_bound
        return {"alphabet": L.alphabet.to_json(), "language": lang}
    if isinstance(L, GraphLanguage):
        return L.graph.to_json()
    raise TypeError(f"cannot serialize {type(L).__name__}")
