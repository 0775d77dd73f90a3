"""Shared generators for the test suites."""

import itertools

import numpy as np

from verbatim.language import ExplicitLanguage
from verbatim.words import Alphabet

PAIR = Alphabet.from_pairs(("a", "a*"))
TWO_SELFADJOINT = Alphabet.from_pairs("x", "y")


def word_orbits(alphabet, max_len):
    """Words of length 1..max_len grouped into ``{w, w*}`` orbits."""
    inv = alphabet.involute_letters
    seen, orbits = set(), []
    for k in range(1, max_len + 1):
        for w in itertools.product(range(len(alphabet)), repeat=k):
            if w not in seen:
                orbit = {w, inv(w)}
                seen |= orbit
                orbits.append(sorted(orbit))
    return orbits


def random_selfadjoint_language(rng, max_len=4):
    """Random self-adjoint finite language over a 2-symbol alphabet.

    Sparse draws are often Pythagorean and dense ones rarely are, so the
    inclusion probability itself is random.
    """
    alphabet = PAIR if rng.random() < 0.5 else TWO_SELFADJOINT
    orbits = word_orbits(alphabet, max_len)
    p = rng.uniform(0.0, 0.25) ** 1.5
    words = [w for orbit in orbits if rng.random() < p for w in orbit]
    if rng.random() < 0.3:
        # seed with squares a*a, which keeps more draws Pythagorean
        inv = alphabet.involute_letters
        for a in range(len(alphabet)):
            if rng.random() < 0.5:
                words.append(inv((a,)) + (a,))
    return ExplicitLanguage(alphabet, words)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# acceptance verdicts, printed by the terminal-summary hook in conftest.py
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def report(criterion, part, ok, detail):
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(ok), detail))
    print(f"criterion {criterion} [{part}]: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok
