import math

import numpy as np
import pytest

from helpers import crandn
from verbatim.errors import PreconditionError
from verbatim.language import BuiltinLanguage
from verbatim.linalg import MatrixTuple, is_psd, spectral_norm
from verbatim.radius import (
    amt_fixed_point,
    ando_fixed_point,
    dyck_polys,
    gelfand_estimate,
    numerical_radius,
)
from verbatim.words import Alphabet

ZZ = Alphabet.from_pairs(("Z", "Z*"))
IRREDUCIBLE = BuiltinLanguage("irreducible_dyck", ZZ)


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


def monomial_sum(A, words):
    Ah = A.conj().T
    out = np.zeros_like(A)
    for w in words:
        P = np.eye(A.shape[0], dtype=complex)
        for name in w:
            P = P @ (A if name == "Z" else Ah)
        out += P
    return out


def semilength_words(m):
    return [IRREDUCIBLE.word(w).names for w in IRREDUCIBLE.words(2 * m) if len(w) == 2 * m]


def random_matrix(rng, n=None):
    n = n or int(rng.integers(1, 5))
    return crandn(rng, n, n)


def scaled_to_radius(Z, w):
    return Z * (w / numerical_radius(Z))


# ---------------------------------------------------------------------------
# the irreducible-Dyck polynomials


LISTED = {
    1: [["Z", "Z*"]],
    2: [["Z", "Z", "Z*", "Z*"]],
    3: [["Z", "Z", "Z", "Z*", "Z*", "Z*"], ["Z", "Z", "Z*", "Z", "Z*", "Z*"]],
    4: [["Z", "Z", "Z", "Z", "Z*", "Z*", "Z*", "Z*"],
        ["Z", "Z", "Z", "Z*", "Z", "Z*", "Z*", "Z*"],
        ["Z", "Z", "Z", "Z*", "Z*", "Z", "Z*", "Z*"],
        ["Z", "Z", "Z*", "Z", "Z", "Z*", "Z*", "Z*"],
        ["Z", "Z", "Z*", "Z", "Z*", "Z", "Z*", "Z*"]],
}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_listed_monomials(m):
    assert sorted(semilength_words(m)) == sorted(LISTED[m])
    rng = np.random.default_rng(m)
    A = random_matrix(rng, 3)
    assert np.allclose(dyck_polys(A, m).p(m).value(), monomial_sum(A, LISTED[m]), atol=1e-12)


@pytest.mark.parametrize("m", range(1, 7))
def test_monomial_counts_are_catalan(m):
    assert len(semilength_words(m)) == catalan(m - 1)
    # at A = 1 every monomial evaluates to 1
    assert dyck_polys([[1.0]], 6).p(m).value()[0, 0].real == pytest.approx(catalan(m - 1))


@pytest.mark.parametrize("seed", range(10))
def test_polys_match_enumeration(seed):
    rng = np.random.default_rng(seed)
    A = random_matrix(rng)
    seq = dyck_polys(A, 5)
    X = MatrixTuple(ZZ, {"Z": A})
    for m in range(1, 6):
        direct = monomial_sum(A, semilength_words(m))
        assert np.allclose(seq.p(m).value(), direct, atol=1e-10)
        P = seq.p(m).value()
        assert is_psd(P, 1e-9)
        assert np.allclose(P, P.conj().T, atol=1e-10)
    # and the first-return decomposition of the full Dyck sums
    for m in range(1, 6):
        q = sum(A @ seq.q(j).value() @ A.conj().T @ seq.q(m - 1 - j).value() for j in range(m))
        assert np.allclose(seq.q(m).value(), q, atol=1e-10)
    assert X.dim == A.shape[0]


def test_poly_index_errors():
    seq = dyck_polys(np.eye(2), 3)
    with pytest.raises(IndexError):
        seq.p(0)
    with pytest.raises(IndexError):
        seq.q(4)
    with pytest.raises(ValueError):
        dyck_polys(np.eye(2), 0)


# ---------------------------------------------------------------------------
# the estimate


def test_hermitian_estimate_matches_closed_form():
    # p_m(A) = Catalan(m-1) A^(2m) for Hermitian A, so e_m = Catalan(m-1)^(1/2m)
    series = gelfand_estimate(np.diag([1.0, -2.0]), 500)
    m = series.m
    log_cat = np.array([math.lgamma(2 * k - 1) - math.lgamma(k) - math.lgamma(k + 1) for k in m])
    assert np.allclose(series.estimate, np.exp(log_cat / (2 * m)) * 1.0, rtol=1e-10)
    assert series.final == pytest.approx(1.9775671, abs=1e-7)
    assert np.all(np.diff(series.estimate[1:]) > 0) and series.final < 2


def test_zero_matrix_estimate():
    series = gelfand_estimate(np.zeros((3, 3)), 10)
    assert not series.estimate.any()
    assert np.all(series.log_norm == -np.inf)


def test_estimate_needs_two_terms():
    with pytest.raises(ValueError):
        gelfand_estimate(np.eye(2), 1)


def test_scalar_estimate_is_half_modulus_times_catalan_root():
    series = gelfand_estimate([[0.3j]], 40)
    cat = np.array([float(catalan(int(k) - 1)) for k in series.m])
    assert np.allclose(series.estimate, 0.15 * cat ** (1 / (2 * series.m)), rtol=1e-12)


def test_series_csv_and_json():
    series = gelfand_estimate([[0, 2, 2], [3, 1, 0], [1, 0, 1]], 20)
    lines = series.to_csv().splitlines()
    assert lines[0] == "m,degree,log_norm,estimate"
    assert len(lines) == 21
    m, deg, ln, e = lines[-1].split(",")
    assert (int(m), int(deg)) == (20, 40)
    assert float(e) == series.final
    out = series.to_json(rows=True)
    assert out["final"] == series.final and out["tail_max"] == series.estimate[-2:].max()
    assert len(out["rows"]) == 20


@pytest.mark.parametrize("seed", range(50))
def test_scaling_covariance(seed):
    rng = np.random.default_rng(seed)
    A = random_matrix(rng)
    c = complex(*rng.standard_normal(2)) * 10.0 ** rng.uniform(-3, 3)
    e1 = gelfand_estimate(A, 60).estimate
    e2 = gelfand_estimate(c * A, 60).estimate
    assert np.allclose(e2, abs(c) * e1, rtol=1e-8, atol=0)


@pytest.mark.parametrize("seed", range(10))
def test_gelfand_consistency(seed):
    A = random_matrix(np.random.default_rng(seed), 3)
    w = numerical_radius(A)
    series = gelfand_estimate(A, 1500)
    assert abs(series.tail_max - w) <= 0.02 * w


# ---------------------------------------------------------------------------
# the oracle


def test_oracle_examples():
    assert numerical_radius([[0, 1], [0, 0]]) == pytest.approx(0.5, abs=1e-12)
    assert numerical_radius(np.diag([1.0, -3.0])) == pytest.approx(3.0, abs=1e-10)
    assert numerical_radius(np.zeros((2, 2))) == 0.0
    assert numerical_radius([[0, 2, 2], [3, 1, 0], [1, 0, 1]]) == pytest.approx(3.458, abs=0.005)


@pytest.mark.parametrize("seed", range(50))
def test_oracle_sandwich(seed):
    A = random_matrix(np.random.default_rng(seed))
    w = numerical_radius(A)
    rho = max(abs(np.linalg.eigvals(A)))
    s = spectral_norm(A)
    assert rho <= w + 1e-8
    assert w <= s + 1e-8
    assert w >= s / 2 - 1e-8


@pytest.mark.parametrize("seed", range(50))
def test_oracle_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    A = random_matrix(rng)
    U, _ = np.linalg.qr(crandn(rng, *A.shape))
    assert abs(numerical_radius(U @ A @ U.conj().T) - numerical_radius(A)) <= 1e-7


@pytest.mark.parametrize("seed", range(50))
def test_oracle_attained_by_a_vector(seed):
    """The oracle value is an upper bound on |<Av, v>| for random unit vectors."""
    rng = np.random.default_rng(seed)
    A = random_matrix(rng)
    w = numerical_radius(A)
    v = crandn(rng, A.shape[0], 200)
    v /= np.linalg.norm(v, axis=0)
    assert np.abs(np.einsum("ik,ij,jk->k", v.conj(), A, v)).max() <= w + 1e-10


# ---------------------------------------------------------------------------
# fixed points


def test_ando_scalar_boundary():
    cert = ando_fixed_point([[0.5]])
    assert cert.status == "max-iters"
    assert cert.Y[0, 0].real == pytest.approx(0.5, abs=1e-3)
    assert is_psd([[1 - cert.Y[0, 0], 0.5], [0.5, cert.Y[0, 0]]], 1e-3)
    assert cert.v_norm == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("z", [0.1, 0.3 + 0.2j, -0.45j])
def test_ando_scalar_minimal_root(z):
    cert = ando_fixed_point([[z]])
    assert cert.converged
    assert cert.Y[0, 0].real == pytest.approx((1 - math.sqrt(1 - 4 * abs(z) ** 2)) / 2, abs=1e-12)
    assert cert.isometry_defect <= 1e-10


def test_ando_zero():
    cert = ando_fixed_point(np.zeros((2, 2)))
    assert not cert.Y.any()
    assert cert.V is None and cert.isometry_defect is None
    assert cert.block_min_eig == 0.0


def test_ando_refuses_large_radius():
    with pytest.raises(PreconditionError) as exc:
        ando_fixed_point([[0, 1.2], [0, 0]])
    assert exc.value.measured == pytest.approx(0.6)


@pytest.mark.parametrize("seed", range(50))
def test_ando_certificate(seed):
    rng = np.random.default_rng(seed)
    Z = scaled_to_radius(random_matrix(rng, int(rng.integers(2, 5))), 0.4)
    cert = ando_fixed_point(Z)
    n = Z.shape[0]
    assert cert.converged and cert.residual <= 1e-8
    assert cert.adjoint_block_min_eig >= -1e-8
    assert cert.v_norm <= 1 + 1e-6
    assert cert.isometry_defect <= 1e-6
    Y = cert.Y
    assert is_psd(Y, 1e-10) and is_psd(np.eye(n) - Y, 1e-10)
    # Z = Y^(1/2) V (I - Y)^(1/2)
    from verbatim.linalg import hermitian_power
    assert np.allclose(hermitian_power(Y, 0.5) @ cert.V @ hermitian_power(np.eye(n) - Y, 0.5), Z, atol=1e-8)


def test_amt_scalar():
    cert = amt_fixed_point([[0.2]], [[0.2]])
    assert cert.converged
    assert cert.Y[0, 0].real == pytest.approx(0.4 - math.sqrt(0.12), abs=1e-12)
    assert cert.Y[0, 0].real == pytest.approx(0.0536, abs=1e-4)


def test_amt_zero():
    X = np.diag([0.25, 0.1])
    cert = amt_fixed_point(np.zeros((2, 2)), X)
    assert not cert.Y.any()
    assert cert.block_min_eig == 0.0


def test_amt_refusals():
    with pytest.raises(PreconditionError, match="PSD"):
        amt_fixed_point(np.zeros((2, 2)), np.diag([0.1, -0.1]))
    with pytest.raises(PreconditionError, match="exceeds 1/4"):
        amt_fixed_point(np.zeros((2, 2)), np.diag([0.3, 0.1]))
    with pytest.raises(PreconditionError, match="numerical radius"):
        amt_fixed_point([[0.3]], [[0.0]])


@pytest.mark.parametrize("seed", range(20))
def test_amt_with_zero_x_is_ando(seed):
    rng = np.random.default_rng(seed)
    Z = scaled_to_radius(random_matrix(rng, int(rng.integers(2, 5))), 0.25)
    a = ando_fixed_point(Z, keep_iterates=True)
    b = amt_fixed_point(Z, np.zeros(Z.shape), keep_iterates=True)
    assert len(a.iterates) == len(b.iterates)
    assert all(np.array_equal(x, y) for x, y in zip(a.iterates, b.iterates))


@pytest.mark.parametrize("seed", range(50))
def test_amt_certificate(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    Z = scaled_to_radius(random_matrix(rng, n), 0.25)
    G = crandn(rng, n, n)
    X = G @ G.conj().T
    X *= rng.uniform(0, 0.25) / spectral_norm(X)
    cert = amt_fixed_point(Z, X)
    assert cert.converged and cert.residual <= 1e-8
    assert cert.adjoint_block_min_eig >= -1e-8
