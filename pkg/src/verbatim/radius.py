"""Numerical radius: the irreducible-Dyck polynomial estimate, a field-of-values
oracle, and the Ando / Anderson-Morley-Trapp fixed-point certificates.

Polynomials are indexed by semilength ``m``; ``p[m]`` has degree ``2m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .linalg import (
    ScaledMatrix,
    as_matrix,
    hermitian_power,
    is_psd,
    matrix_to_json,
    scaled_log_norm,
    scaled_mul,
    scaled_sum_of_products,
    solve,
    spectral_norm,
)

GRID_POINTS = 4096
_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass
class DyckPolySequence:
    """Log-scaled ``q[j]`` (all Dyck words of semilength ``j``) and ``p[m]`` (irreducible ones).

    ``q[m] = sum_j A q[j] A* q[m-1-j]`` and ``p[m] = A q[m-1] A*``.
    """

    m_max: int
    p_units: np.ndarray
    p_logs: np.ndarray
    q_units: np.ndarray
    q_logs: np.ndarray

    def p(self, m: int) -> ScaledMatrix:
        if not 1 <= m <= self.m_max:
            raise IndexError(f"p is defined for 1 <= m <= {self.m_max}")
        return ScaledMatrix(self.p_units[m], float(self.p_logs[m]))

    def q(self, j: int) -> ScaledMatrix:
        if not 0 <= j <= self.m_max:
            raise IndexError(f"q is defined for 0 <= j <= {self.m_max}")
        return ScaledMatrix(self.q_units[j], float(self.q_logs[j]))

    def p_log_norm(self, m: int) -> float:
        return scaled_log_norm(self.p(m))


def dyck_polys(A, m_max: int) -> DyckPolySequence:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    n = A.shape[0]
    Ah = A.conj().T
    a = ScaledMatrix.from_parts(A, 0.0)
    ah = ScaledMatrix.from_parts(Ah, 0.0)
    p_units = np.zeros((m_max + 1, n, n), np.complex128)
    q_units = np.zeros((m_max + 1, n, n), np.complex128)
    p_logs = np.full(m_max + 1, -math.inf)
    q_logs = np.full(m_max + 1, -math.inf)
    q_units[0] = np.eye(n)
    q_logs[0] = 0.0
    for m in range(1, m_max + 1):
        pm = scaled_mul(scaled_mul(a, ScaledMatrix(q_units[m - 1], q_logs[m - 1])), ah)
        p_units[m], p_logs[m] = pm.unit, pm.log_scale
        # first-return decomposition: q[m] = sum_{k=1..m} p[k] q[m-k]
        qm = scaled_sum_of_products(p_units[1:m + 1], p_logs[1:m + 1],
                                    q_units[m - 1::-1], q_logs[m - 1::-1])
        q_units[m], q_logs[m] = qm.unit, qm.log_scale
    return DyckPolySequence(m_max, p_units, p_logs, q_units, q_logs)


@dataclass
class ConvergenceSeries:
    m: np.ndarray
    log_norm: np.ndarray
    estimate: np.ndarray

    @property
    def degree(self) -> np.ndarray:
        return 2 * self.m

    @property
    def final(self) -> float:
        return float(self.estimate[-1])

    @property
    def tail_max(self) -> float:
        k = max(1, math.ceil(0.1 * len(self.m)))
        return float(self.estimate[-k:].max())

    def to_csv(self) -> str:
        lines = ["m,degree,log_norm,estimate"]
        for m, ln, e in zip(self.m, self.log_norm, self.estimate):
            lines.append(f"{int(m)},{2 * int(m)},{float(ln)!r},{float(e)!r}")
        return "\n".join(lines) + "\n"

    def to_json(self, rows: bool = False) -> dict:
        out = {"m_max": int(self.m[-1]), "final": self.final, "tail_max": self.tail_max}
        if rows:
            out["rows"] = [{"m": int(m), "degree": 2 * int(m), "log_norm": float(ln), "estimate": float(e)}
                           for m, ln, e in zip(self.m, self.log_norm, self.estimate)]
        return out


def gelfand_estimate(A, m_max: int) -> ConvergenceSeries:
    """``e_m = (1/2) ||p_m(A, A*)||^(1/2m)`` for ``m = 1..m_max``.

    The recursion runs on ``A / (2 ||A||)`` and is scaled back exactly in log space.
    """
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    A = as_matrix(A)
    ms = np.arange(1, m_max + 1)
    s = spectral_norm(A)
    if s == 0.0:
        return ConvergenceSeries(ms, np.full(m_max, -math.inf), np.zeros(m_max))
    seq = dyck_polys(A / (2 * s), m_max)
    scaled = np.array([seq.p_log_norm(m) for m in ms])
    log_norm = scaled + 2 * ms * math.log(2 * s)
    with np.errstate(under="ignore"):
        estimate = s * np.exp(scaled / (2 * ms))
    return ConvergenceSeries(ms, log_norm, estimate)


def _top_eigs(A: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    phase = np.exp(1j * np.asarray(thetas))[:, None, None]
    H = (phase * A + phase.conj() * A.conj().T) / 2
    return np.linalg.eigvalsh(H)[:, -1]


def numerical_radius(A, tol: float = 1e-10) -> float:
    """``max_theta lambda_max((e^{i theta} A + e^{-i theta} A*) / 2)``.

    A 4096-point grid locates the best bracket, then golden-section search
    narrows it to width ``tol``.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if not A.any():
        return 0.0
    step = 2 * math.pi / GRID_POINTS
    grid = np.arange(GRID_POINTS) * step
    vals = _top_eigs(A, grid)
    k = int(np.argmax(vals))
    best = float(vals[k])
    lo, hi = grid[k] - step, grid[k] + step

    def f(t):
        return float(_top_eigs(A, [t])[0])

    x1, x2 = hi - _GOLDEN * (hi - lo), lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
    return max(best, f1, f2)


# ---------------------------------------------------------------------------
# fixed points


@dataclass
class FixedPointCertificate:
    """Result of iterating ``Y <- Z (I - Y - X)^-1 Z*`` from zero.

    ``block_min_eig`` is the smallest eigenvalue of ``[[I-Y-X, Z], [Z*, Y]]``;
    ``adjoint_block_min_eig`` that of ``[[I-Y-X, Z*], [Z, Y]]``, which the
    fixed point makes PSD with a zero Schur complement.  ``V``,
    ``v_norm`` and ``isometry_defect`` are filled for the Ando case only.
    """

    Y: np.ndarray
    residual: float
    block_min_eig: float
    adjoint_block_min_eig: float
    iterations: int
    status: str
    iterates: list | None = None
    V: np.ndarray | None = None
    v_norm: float | None = None
    isometry_defect: float | None = None

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "iterations": self.iterations,
            "residual": self.residual,
            "block_min_eig": self.block_min_eig,
            "adjoint_block_min_eig": self.adjoint_block_min_eig,
            "Y": matrix_to_json(self.Y),
        }
        if self.V is not None or self.v_norm is not None:
            out["V"] = None if self.V is None else matrix_to_json(self.V)
            out["v_norm"] = self.v_norm
            out["isometry_defect"] = self.isometry_defect
        return out


def _block_min(TL, TR, BR) -> float:
    B = np.block([[TL, TR], [TR.conj().T, BR]])
    return float(np.linalg.eigvalsh((B + B.conj().T) / 2)[0])


def _iterate(Z: np.ndarray, X: np.ndarray, max_iters: int, tol: float, keep: bool):
    n = Z.shape[0]
    I = np.eye(n)
    Zh = Z.conj().T
    Y = np.zeros((n, n), np.complex128)
    iterates = [Y] if keep else None
    status = "max-iters"
    k = 0
    while k < max_iters:
        Y_next = Z @ solve(I - Y - X, Zh)
        Y_next = (Y_next + Y_next.conj().T) / 2
        k += 1
        step = spectral_norm(Y_next - Y)
        Y = Y_next
        if keep:
            iterates.append(Y)
        if step < tol:
            status = "converged"
            break
    residual = spectral_norm(Y - Z @ solve(I - Y - X, Zh))
    return Y, residual, k, status, iterates


def ando_fixed_point(Z, max_iters: int = 10000, tol: float = 1e-13,
                     keep_iterates: bool = False) -> FixedPointCertificate:
    """Series branch of ``Y = Z (I - Y)^-1 Z*`` with the unitarization factor ``V``.

    Refuses ``Z`` whose numerical radius exceeds 1/2.
    """
    Z = as_matrix(Z)
    w = numerical_radius(Z)
    if w > 0.5 + 1e-9:
        raise PreconditionError(f"numerical radius {w:.6g} exceeds 1/2", measured=w)
    n = Z.shape[0]
    I = np.eye(n)
    X = np.zeros((n, n))
    Y, residual, k, status, iterates = _iterate(Z, X, max_iters, tol, keep_iterates)
    cert = FixedPointCertificate(
        Y, residual,
        _block_min(I - Y, Z, Y),
        _block_min(I - Y, Z.conj().T, Y),
        k, status, iterates)
    ev = np.linalg.eigvalsh(Y)
    if ev.size and ev[-1] > 1e-12:
        V = hermitian_power(Y, -0.5) @ Z @ hermitian_power(I - Y, -0.5)
        cert.V = V
        cert.v_norm = spectral_norm(V)
        if ev[0] > 1e-6 and 1 - ev[-1] > 1e-6:
            cert.isometry_defect = spectral_norm(V.conj().T @ V - I)
    return cert


def amt_fixed_point(Z, X, max_iters: int = 10000, tol: float = 1e-13,
                    keep_iterates: bool = False) -> FixedPointCertificate:
    """Series branch of ``Y = Z (I - Y - X)^-1 Z*`` for PSD ``X``.

    Requires ``||X|| <= 1/4`` and numerical radius of ``Z`` at most 1/4.
    """
    Z = as_matrix(Z)
    X = as_matrix(X)
    if X.shape != Z.shape:
        raise PreconditionError(f"X has shape {X.shape}, Z has shape {Z.shape}")
    psd = is_psd(X, 1e-12)
    if not psd:
        raise PreconditionError(f"X is not PSD (min eigenvalue {psd.min_eig:.3e})", measured=psd.min_eig)
    xn = spectral_norm(X)
    if xn > 0.25 + 1e-12:
        raise PreconditionError(f"||X|| = {xn:.6g} exceeds 1/4", measured=xn)
    w = numerical_radius(Z)
    if w > 0.25 + 1e-9:
        raise PreconditionError(f"numerical radius {w:.6g} exceeds 1/4", measured=w)
    I = np.eye(Z.shape[0])
    Y, residual, k, status, iterates = _iterate(Z, X, max_iters, tol, keep_iterates)
    return FixedPointCertificate(
        Y, residual,
        _block_min(I - Y - X, Z, Y),
        _block_min(I - Y - X, Z.conj().T, Y),
        k, status, iterates)
