"""Dense complex matrix primitives and log-scaled matrices.

Matrices are plain ``numpy`` complex arrays.  :class:`ScaledMatrix` keeps a
unit-norm factor and a natural-log scale so products of thousands of
factors neither overflow nor underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .errors import DimensionError, ParseError, SingularMatrixError, SymmetryError
from .words import Alphabet

HERMITIAN_TOL = 1e-10
TUPLE_HERMITIAN_TOL = 1e-12
MAX_CONDITION = 1e12


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {M.shape}")
    return M


def _require_square(M: np.ndarray) -> None:
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"matrix must be square, got {M.shape[0]}x{M.shape[1]}")


def spectral_norm(M) -> float:
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def hermitian_eigenvalues(M) -> np.ndarray:
    """Ascending eigenvalues of the Hermitian part of a (numerically) Hermitian matrix."""
    M = as_matrix(M)
    _require_square(M)
    scale = 1.0 + spectral_norm(M)
    skew = spectral_norm(M - M.conj().T)
    if skew > HERMITIAN_TOL * scale:
        raise SymmetryError(f"matrix is not Hermitian: ||M - M*|| = {skew:.3e}")
    return np.linalg.eigvalsh((M + M.conj().T) / 2)


class PSDResult(NamedTuple):
    is_psd: bool
    min_eig: float

    def __bool__(self) -> bool:
        return self.is_psd


def is_psd(M, tol: float = 1e-9) -> PSDResult:
    """PSD test relative to the top eigenvalue, with a floor of 1."""
    ev = hermitian_eigenvalues(M)
    if ev.size == 0:
        return PSDResult(True, 0.0)
    lo, hi = float(ev[0]), float(ev[-1])
    return PSDResult(lo >= -tol * max(1.0, hi), lo)


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def solve(A, B) -> np.ndarray:
    """Solve ``A X = B``; raises ``SingularMatrixError`` above condition 1e12."""
    A = as_matrix(A)
    _require_square(A)
    B = np.asarray(B, dtype=np.complex128)
    if B.shape[0] != A.shape[0]:
        raise DimensionError(f"right-hand side has {B.shape[0]} rows, expected {A.shape[0]}")
    cond = float(np.linalg.cond(A)) if A.size else 1.0
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularMatrixError(cond)
    return np.linalg.solve(A, B)


def hermitian_power(M, power: float, cutoff: float = 1e-12) -> np.ndarray:
    """Spectral power of a Hermitian PSD matrix; negative powers act as pseudo-inverses."""
    w, U = np.linalg.eigh((as_matrix(M) + as_matrix(M).conj().T) / 2)
    top = max(float(np.abs(w).max(initial=0.0)), 1.0)
    keep = w > cutoff * top
    d = np.zeros_like(w)
    d[keep] = w[keep] ** power
    return (U * d) @ U.conj().T


# ---------------------------------------------------------------------------
# tuples


class MatrixTuple:
    """Matrices substituted for the symbols of an alphabet.

    Give one matrix per analytic pair (either member) and one per
    self-adjoint symbol; the partner resolves to the conjugate transpose.
    Self-adjoint slots must hold Hermitian matrices.
    """

    def __init__(self, alphabet: Alphabet, mats: Mapping[str, object]):
        self.alphabet = alphabet
        given: dict[int, np.ndarray] = {}
        dim = None
        for name, M in mats.items():
            i = alphabet.index(name)
            M = as_matrix(M)
            _require_square(M)
            if dim is None:
                dim = M.shape[0]
            elif M.shape[0] != dim:
                raise DimensionError(f"tuple entry {name} has dimension {M.shape[0]}, expected {dim}")
            j = alphabet.adjoint(i)
            if i == j:
                if spectral_norm(M - M.conj().T) > TUPLE_HERMITIAN_TOL * max(1.0, spectral_norm(M)):
                    raise SymmetryError(f"self-adjoint symbol {name} needs a Hermitian matrix")
            elif j in given:
                raise ParseError(f"tuple gives both {name} and its adjoint")
            given[i] = M
        missing = [s.name for k, s in enumerate(alphabet.symbols)
                   if k not in given and alphabet.adjoint(k) not in given]
        if missing:
            raise ParseError(f"tuple is missing a matrix for {', '.join(missing)}")
        self.dim = dim if dim is not None else 0
        self.given = given
        self._all = []
        for k in range(len(alphabet)):
            if k in given:
                self._all.append(given[k])
            else:
                self._all.append(given[alphabet.adjoint(k)].conj().T)

    def __getitem__(self, name: str) -> np.ndarray:
        return self._all[self.alphabet.index(name)]

    def letter(self, i: int) -> np.ndarray:
        return self._all[i]

    def stack(self) -> np.ndarray:
        """``(|alphabet|, n, n)`` array of every letter's matrix."""
        return np.stack(self._all)

    def map(self, fn) -> "MatrixTuple":
        names = self.alphabet.names
        return MatrixTuple(self.alphabet, {names[i]: fn(M) for i, M in self.given.items()})

    def to_json(self) -> dict:
        names = self.alphabet.names
        return {names[i]: matrix_to_json(M) for i, M in sorted(self.given.items())}


def tuple_norm(X: MatrixTuple) -> float:
    """Operator norm of the row ``[X_1 ... X_d]`` over the given symbols."""
    if not X.given:
        return 0.0
    return spectral_norm(np.hstack([X.given[i] for i in sorted(X.given)]))


@dataclass(frozen=True)
class DomainBall:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def __contains__(self, X: MatrixTuple) -> bool:
        return tuple_norm(X) <= self.radius


# ---------------------------------------------------------------------------
# log-scaled matrices


@dataclass(frozen=True)
class ScaledMatrix:
    """Value ``exp(log_scale) * unit`` with ``||unit||`` in [0.5, 2] (or zero, ``log_scale = -inf``)."""

    unit: np.ndarray
    log_scale: float

    @classmethod
    def from_parts(cls, unit, log_scale: float = 0.0) -> "ScaledMatrix":
        unit = as_matrix(unit)
        if log_scale == -math.inf:
            return cls(np.zeros_like(unit), -math.inf)
        n = spectral_norm(unit)
        if n == 0.0 or not np.isfinite(n):
            if n == 0.0:
                return cls(np.zeros_like(unit), -math.inf)
            raise ValueError("non-finite matrix")
        if 0.5 <= n <= 2.0:
            return cls(unit, float(log_scale))
        return cls(unit / n, float(log_scale) + math.log(n))

    @classmethod
    def identity(cls, n: int) -> "ScaledMatrix":
        return cls(np.eye(n, dtype=np.complex128), 0.0)

    @property
    def is_zero(self) -> bool:
        return self.log_scale == -math.inf

    def value(self) -> np.ndarray:
        if self.is_zero:
            return np.zeros_like(self.unit)
        return self.unit * math.exp(self.log_scale)


def normalize(M) -> ScaledMatrix:
    return ScaledMatrix.from_parts(M, 0.0)


def scaled_mul(P: ScaledMatrix, Q: ScaledMatrix) -> ScaledMatrix:
    if P.is_zero or Q.is_zero:
        return ScaledMatrix(np.zeros((P.unit.shape[0], Q.unit.shape[1]), np.complex128), -math.inf)
    return ScaledMatrix.from_parts(P.unit @ Q.unit, P.log_scale + Q.log_scale)


def scaled_add(P: ScaledMatrix, Q: ScaledMatrix) -> ScaledMatrix:
    if P.is_zero:
        return Q
    if Q.is_zero:
        return P
    top = max(P.log_scale, Q.log_scale)
    S = P.unit * math.exp(P.log_scale - top) + Q.unit * math.exp(Q.log_scale - top)
    return ScaledMatrix.from_parts(S, top)


def scaled_log_norm(P: ScaledMatrix) -> float:
    if P.is_zero:
        return -math.inf
    return P.log_scale + math.log(spectral_norm(P.unit))


def scaled_sum_of_products(units_a, logs_a, units_b, logs_b) -> ScaledMatrix:
    """``sum_k A_k B_k`` for stacked scaled factors, computed in one batched product."""
    logs = np.asarray(logs_a) + np.asarray(logs_b)
    top = float(logs.max(initial=-math.inf))
    if top == -math.inf:
        return ScaledMatrix(np.zeros(units_a.shape[1:], np.complex128), -math.inf)
    weights = np.exp(logs - top)
    S = np.einsum("k,kij->ij", weights, units_a @ units_b)
    return ScaledMatrix.from_parts(S, top)


# ---------------------------------------------------------------------------
# JSON


def matrix_to_json(M) -> dict:
    M = as_matrix(M)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "entries": [[float(z.real), float(z.imag)] for z in M.ravel()]}


def matrix_from_json(data, where: str = "matrix") -> np.ndarray:
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object with rows, cols, entries")
    for key in ("rows", "cols", "entries"):
        if key not in data:
            raise ParseError(f"{where}.{key}: missing")
    rows, cols, entries = data["rows"], data["cols"], data["entries"]
    if len(entries) != rows * cols:
        raise ParseError(f"{where}.entries: expected {rows * cols} entries, got {len(entries)}")
    vals = []
    for k, e in enumerate(entries):
        if isinstance(e, (int, float)):
            vals.append(complex(e))
        elif isinstance(e, list) and len(e) == 2:
            vals.append(complex(e[0], e[1]))
        else:
            raise ParseError(f"{where}.entries[{k}]: expected [re, im]")
    return np.array(vals, dtype=np.complex128).reshape(rows, cols)


def tuple_from_json(alphabet: Alphabet, data, where: str = "tuple") -> MatrixTuple:
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected an object mapping symbols to matrices")
    return MatrixTuple(alphabet, {k: matrix_from_json(v, f"{where}.{k}") for k, v in data.items()})
