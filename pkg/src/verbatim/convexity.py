"""Verbatim series evaluation, the Hankel coefficient matrix, midpoint convexity
sampling, and butterfly realizations built from chromatic graphs.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousGraphError, NotPythagoreanError, OutOfRangeError, ParameterError, ParseError
from .graph import ChromaticGraph
from .language import GraphLanguage, Language
from .linalg import MatrixTuple, is_psd, solve, tuple_norm
from .structure import check_pythagorean
from .words import Alphabet, Word


def worker_count() -> int:
    """Thread cap from ``VERBATIM_THREADS`` (unset or 0 = one per CPU)."""
    raw = os.environ.get("VERBATIM_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"VERBATIM_THREADS must be an integer, got {raw!r}") from None
    return n if n > 0 else (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# series


class SeriesEvaluator:
    """Sum of every word of ``L`` up to length ``N``, evaluated on matrix tuples.

    Enumerates once; each evaluation multiplies all words of a given length
    as one batched product.
    """

    def __init__(self, L: Language, N: int):
        if N < 1:
            raise ValueError("degree N must be at least 1")
        self.language = L
        self.N = N
        by_len: dict[int, list] = {}
        for w in L.words(N):
            by_len.setdefault(len(w), []).append(w)
        self.empty = by_len.pop(0, None) is not None
        self.blocks = {k: np.array(ws, dtype=np.intp) for k, ws in sorted(by_len.items())}

    def __call__(self, X: MatrixTuple) -> np.ndarray:
        if X.alphabet != self.language.alphabet:
            raise ParseError("tuple and language use different alphabets")
        n = X.dim
        stack = X.stack()
        out = np.eye(n, dtype=np.complex128) if self.empty else np.zeros((n, n), np.complex128)
        for k, words in self.blocks.items():
            P = stack[words[:, 0]]
            for j in range(1, k):
                P = P @ stack[words[:, j]]
            out += P.sum(axis=0)
        return out


def eval_series(L: Language, N: int, X: MatrixTuple) -> np.ndarray:
    return SeriesEvaluator(L, N)(X)


def truncation_bound(L: Language, N: int, r: float) -> float:
    """Bound on the tail beyond degree ``N`` over the ball of radius ``r``: ``3 (gr)^(N+1) / (1 - gr)``.

    Zero for a finite language whose longest word fits in ``N``.
    """
    longest = L.longest_word
    if longest is not None and longest <= N:
        return 0.0
    gr = len(L.alphabet) * r
    if gr >= 1:
        raise ParameterError(f"alphabet size times radius is {gr:g}; need < 1 for the tail bound")
    return 3 * gr ** (N + 1) / (1 - gr)


# ---------------------------------------------------------------------------
# Hankel matrix


@dataclass
class HankelMatrix:
    """``entries[a, b] = 1`` iff ``index[b]* index[a]`` is in the language."""

    index: list[Word]
    entries: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries.astype(float))

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0]) if len(self.index) else 0.0

    def is_psd(self, tol: float = 1e-9):
        return is_psd(self.entries.astype(float), tol)

    def to_csv(self) -> str:
        labels = [" ".join(w.names) for w in self.index]
        lines = [",".join([""] + [_csv_field(s) for s in labels])]
        for lab, row in zip(labels, self.entries):
            lines.append(",".join([_csv_field(lab)] + [str(int(v)) for v in row]))
        return "\n".join(lines) + "\n"


def _csv_field(s: str) -> str:
    if any(c in s for c in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def all_words(alphabet: Alphabet, K: int) -> list[Word]:
    """Every nonempty word of length at most ``K``, length-then-lexicographic."""
    g = len(alphabet)
    return [Word(alphabet, w) for k in range(1, K + 1) for w in itertools.product(range(g), repeat=k)]


def hankel(L: Language, K: int) -> HankelMatrix:
    if K < 1:
        raise ValueError("K must be at least 1")
    index = all_words(L.alphabet, K)
    inv = L.alphabet.involute_letters
    n = len(index)
    C = np.zeros((n, n), dtype=np.int8)
    for b, beta in enumerate(index):
        left = inv(beta.letters)
        for a, alpha in enumerate(index):
            if L.member(left + alpha.letters):
                C[a, b] = 1
    return HankelMatrix(index, C)


# ---------------------------------------------------------------------------
# midpoint convexity


@dataclass
class ConvexityReport:
    verdict: str
    samples: int
    worst_min_eig: float
    truncation_bound: float
    witness: tuple[MatrixTuple, MatrixTuple] | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "samples": self.samples,
               "worst_min_eig": self.worst_min_eig, "truncation_bound": self.truncation_bound,
               "witness": None}
        if self.witness is not None:
            out["witness"] = {"A": self.witness[0].to_json(), "B": self.witness[1].to_json()}
        return out


def midpoint_gap(f, A: MatrixTuple, B: MatrixTuple) -> np.ndarray:
    """``(f(A) + f(B))/2 - f((A + B)/2)``, which is PSD for matrix convex ``f``."""
    names = A.alphabet.names
    mid = MatrixTuple(A.alphabet, {names[i]: (M + B.given[i]) / 2 for i, M in A.given.items()})
    return (f(A) + f(B)) / 2 - f(mid)


def random_tuple(alphabet: Alphabet, dim: int, r: float, rng: np.random.Generator) -> MatrixTuple:
    """Complex Gaussian entries, Hermitized in self-adjoint slots, rescaled to a uniform norm in (0, r]."""
    mats = {}
    for i in alphabet.base_indices():
        M = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        if alphabet.is_selfadjoint(i):
            M = (M + M.conj().T) / 2
        mats[alphabet.symbols[i].name] = M
    X = MatrixTuple(alphabet, mats)
    target = r * (1.0 - rng.random())
    norm = tuple_norm(X)
    return X.map(lambda M: M * (target / norm))


def midpoint_convexity_test(L: Language, N: int, dim: int, samples: int, r: float, seed: int,
                            witnesses=()) -> ConvexityReport:
    """Sample tuple pairs in the ball of radius ``r`` and test midpoint convexity in Löwner order.

    ``witnesses`` are extra ``(A, B)`` pairs checked before the random draws;
    their count is included in ``samples`` of the report.
    """
    if dim < 1 or dim > 4:
        raise ParameterError("dim must be between 1 and 4")
    eps = truncation_bound(L, N, r)
    tol = eps + 1e-9
    f = SeriesEvaluator(L, N)
    rng = np.random.default_rng(seed)
    pairs = list(witnesses)
    pairs += [(random_tuple(L.alphabet, dim, r, rng), random_tuple(L.alphabet, dim, r, rng))
              for _ in range(samples)]

    def check(pair):
        return is_psd(midpoint_gap(f, *pair), tol)

    workers = min(worker_count(), max(1, len(pairs)))
    if workers > 1 and len(pairs) > 16:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(check, pairs))
    else:
        results = [check(p) for p in pairs]
    worst = min((res.min_eig for res in results), default=0.0)
    for pair, res in zip(pairs, results):
        if not res.is_psd:
            return ConvexityReport("fail", len(pairs), worst, eps, pair)
    return ConvexityReport("pass", len(pairs), worst, eps, None)


# ---------------------------------------------------------------------------
# butterfly realizations


@dataclass
class Realization:
    """Constant, linear part, anchor vectors and transfer matrices of a butterfly realization.

    ``T`` holds one 0/1 matrix per base symbol (self-adjoint symbols and the
    first-listed member of each analytic pair); the partner acts as the
    transpose.  ``T[a][v, u] = 1`` encodes an ``a``-edge ``u -> v``.
    """

    alphabet: Alphabet
    vertices: tuple[str, ...]
    a0: float
    linear: dict[str, float]
    Q: dict[str, np.ndarray]
    T: dict[str, np.ndarray]
    #: truncation depth of the vertex set; None for an exact (untruncated) graph
    depth: int | None
    _int_T: list = field(default=None, repr=False)

    def transfer(self, i: int) -> np.ndarray:
        """Transfer matrix of letter ``i``, transposing for the non-base member of a pair."""
        A = self.alphabet
        name = A.symbols[i].name
        if name in self.T:
            return self.T[name]
        return self.T[A.symbols[A.adjoint(i)].name].T

    def anchor(self, i: int) -> np.ndarray:
        return self.Q[self.alphabet.symbols[i].name]

    def to_json(self) -> dict:
        names = self.alphabet.names
        return {
            "alphabet": self.alphabet.to_json(),
            "vertices": list(self.vertices),
            "depth": self.depth,
            "a0": self.a0,
            "linear": {n: self.linear.get(n, 0.0) for n in names},
            "Q": {n: (self.vertices[int(np.argmax(q))] if q.any() else None)
                  for n, q in self.Q.items()},
            "T": {a: [{"from": self.vertices[u], "to": self.vertices[v]}
                      for u in range(len(self.vertices)) for v in range(len(self.vertices)) if M[v, u]]
                  for a, M in self.T.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Realization":
        for key in ("alphabet", "vertices", "T", "Q"):
            if key not in data:
                raise ParseError(f"realization.{key}: missing")
        alphabet = Alphabet.from_json(data["alphabet"])
        vertices = tuple(str(v) for v in data["vertices"])
        idx = {v: k for k, v in enumerate(vertices)}
        n = len(vertices)
        Q = {}
        for s in alphabet.names:
            q = np.zeros(n)
            v = data["Q"].get(s)
            if v is not None:
                if v not in idx:
                    raise ParseError(f"realization.Q.{s}: unknown vertex {v!r}")
                q[idx[v]] = 1.0
            Q[s] = q
        T = {}
        for i in alphabet.base_indices():
            s = alphabet.symbols[i].name
            M = np.zeros((n, n))
            for k, e in enumerate(data["T"].get(s, [])):
                try:
                    M[idx[str(e["to"])], idx[str(e["from"])]] = 1.0
                except KeyError:
                    raise ParseError(f"realization.T.{s}[{k}]: bad edge") from None
            T[s] = M
        linear = {s: float(data.get("linear", {}).get(s, 0.0)) for s in alphabet.names}
        return cls(alphabet, vertices, float(data.get("a0", 0.0)), linear, Q, T,
                   None if data.get("depth") is None else int(data["depth"]))


# Cutoff for the refusal check in build_realization; enumeration cost grows
# exponentially and deep path graphs are only ever realized from sound sources.
GUARD_LENGTH = 8


def build_realization(G: ChromaticGraph, L: Language | None = None) -> Realization:
    """Butterfly realization whose transfer matrices are the adjacency of ``G``.

    ``L`` supplies the constant and linear terms (words of length 0 and 1)
    and must be Pythagorean; it defaults to the language of ``G``.
    """
    if L is None:
        L = GraphLanguage(G)
    guard = G.depth if G.depth is not None else 2 * len(G.vertices) + 2
    report = check_pythagorean(L, min(max(2, guard), GUARD_LENGTH))
    if not report.passed:
        raise NotPythagoreanError(report)
    A = G.alphabet
    mats = G.transfer_matrices()
    anchors = G.anchor_indices()
    n = len(G.vertices)
    T = {A.symbols[i].name: mats[i].astype(float) for i in A.base_indices()}
    Q = {}
    for i, s in enumerate(A.symbols):
        q = np.zeros(n)
        if anchors[i] is not None:
            q[anchors[i]] = 1.0
        Q[s.name] = q
    linear = {s.name: (1.0 if L.member((i,)) else 0.0) for i, s in enumerate(A.symbols)}
    a0 = 1.0 if L.member(()) else 0.0
    return Realization(A, G.vertices, a0, linear, Q, T, G.depth)


def eval_realization(R: Realization, X: MatrixTuple) -> np.ndarray:
    """``a0 I + sum linear_a X_a + (sum Q_a (x) X_a)* (I - sum T_a (x) X_a)^-1 (sum Q_a (x) X_a)``.

    Sums run over every letter; starred letters carry the transposed
    transfer matrix and the conjugate-transposed tuple entry.
    """
    if X.alphabet != R.alphabet:
        raise ParseError("tuple and realization use different alphabets")
    n = X.dim
    V = len(R.vertices)
    out = R.a0 * np.eye(n, dtype=np.complex128)
    big = np.eye(V * n, dtype=np.complex128)
    col = np.zeros((V * n, n), dtype=np.complex128)
    for i in range(len(R.alphabet)):
        Xi = X.letter(i)
        c = R.linear.get(R.alphabet.symbols[i].name, 0.0)
        if c:
            out = out + c * Xi
        Ti = R.transfer(i)
        if Ti.any():
            big -= np.kron(Ti, Xi)
        q = R.anchor(i)
        if q.any():
            col += np.kron(q.reshape(-1, 1), Xi)
    if V == 0 or not col.any():
        return out
    return out + col.conj().T @ solve(big, col)


def coefficient(R: Realization, w: Word) -> int:
    """``Q_i^T T^w' Q_j`` for ``w = a_i* w' a_j``, applied rightmost letter first."""
    if w.alphabet != R.alphabet:
        raise ParseError("word and realization use different alphabets")
    if len(w) < 2:
        raise ValueError("coefficient needs a word of length at least 2")
    if R.depth is not None and len(w) > 2 * R.depth:
        raise OutOfRangeError(f"word length {len(w)} exceeds twice the realization depth {R.depth}")
    if R._int_T is None:
        R._int_T = [np.rint(R.transfer(i)).astype(np.int64) for i in range(len(R.alphabet))]
    A = R.alphabet
    letters = w.letters
    vec = np.rint(R.anchor(letters[-1])).astype(np.int64)
    for c in reversed(letters[1:-1]):
        if not vec.any():
            return 0
        vec = R._int_T[c] @ vec
    count = int(np.rint(R.anchor(A.adjoint(letters[0]))).astype(np.int64) @ vec)
    if count >= 2:
        raise AmbiguousGraphError(w, count)
    return count
