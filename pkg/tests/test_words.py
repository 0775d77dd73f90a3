import numpy as np
import pytest

from verbatim.errors import ParseError
from verbatim.words import Alphabet, Symbol, Word, involute, is_selfadjoint_word, parse_word

BRACKETS = Alphabet.from_pairs(("[", "]"), "x")
ABC = Alphabet.from_pairs(("a", "a*"), ("b", "b*"), ("c", "c*"))
Z = Alphabet.from_pairs(("z", "z_star"))


def random_word(alphabet, rng, max_len=8):
    n = int(rng.integers(0, max_len + 1))
    return Word(alphabet, tuple(int(i) for i in rng.integers(0, len(alphabet), n)))


def test_involute_reverses_and_stars():
    w = Word.from_names(ABC, ["a", "b", "c"])
    assert involute(w).names == ["c*", "b*", "a*"]


def test_involute_empty():
    assert involute(Word(ABC, ())) == Word(ABC, ())


def test_nested_brackets_fixed_by_involution():
    w = parse_word("[[]]", BRACKETS)
    assert involute(w) == w


@pytest.mark.parametrize("text, expected", [("x", True), ("[ ]", True), ("[ [", False), ("", True)])
def test_is_selfadjoint_word(text, expected):
    assert is_selfadjoint_word(parse_word(text, BRACKETS)) is expected


def test_parse_named_symbols():
    assert parse_word("z z_star", Z).names == ["z", "z_star"]
    assert len(parse_word("", Z)) == 0
    assert len(parse_word("   ", Z)) == 0


def test_parse_glued_brackets():
    assert parse_word("[xx[xx][]]", BRACKETS).names == list("[xx[xx][]]")


def test_parse_unknown_symbol():
    with pytest.raises(ParseError, match="unknown symbol q"):
        parse_word("z q", Z)


def test_alphabet_rejects_broken_involution():
    with pytest.raises(ParseError):
        Alphabet([Symbol("a", "b"), Symbol("b", "c"), Symbol("c", "a")])
    with pytest.raises(ParseError):
        Alphabet([Symbol("a", "a*")])
    with pytest.raises(ParseError):
        Alphabet([Symbol("a", "a"), Symbol("a", "a")])


def test_alphabet_json_round_trip():
    assert Alphabet.from_json(ABC.to_json()) == ABC
    assert ABC.adjoint(ABC.index("b*")) == ABC.index("b")
    assert BRACKETS.is_selfadjoint(BRACKETS.index("x"))


def test_word_rejects_foreign_letter():
    with pytest.raises(ParseError):
        Word(Z, (0, 5))


def test_str_and_order():
    assert str(parse_word("[ x ]", BRACKETS)) == "[x]"
    assert str(Word.from_names(ABC, ["a", "b*"])) == "a b*"
    short, long_ = parse_word("]", BRACKETS), parse_word("[ [", BRACKETS)
    assert short < long_


@pytest.mark.parametrize("seed", range(50))
def test_involution_laws(seed):
    rng = np.random.default_rng(seed)
    alphabet = [ABC, BRACKETS, Z][seed % 3]
    u, v = random_word(alphabet, rng), random_word(alphabet, rng)
    assert involute(involute(u)) == u
    assert len(involute(u)) == len(u)
    assert involute(u + v) == involute(v) + involute(u)
    assert is_selfadjoint_word(u + involute(u)) == (involute(u + involute(u)) == u + involute(u))
    assert is_selfadjoint_word(involute(u) + u)


@pytest.mark.parametrize("seed", range(50))
def test_parse_round_trip(seed):
    rng = np.random.default_rng(seed)
    w = random_word(ABC, rng)
    assert parse_word(" ".join(w.names), ABC) == w
    assert w.to_json() == w.names
