"""Special-function layer against independent references.

scipy.special and math.gamma serve as oracles here only; the library
itself never imports them for Bessel/Gamma evaluation.
"""

import math

import numpy as np
import pytest
import scipy.special as sps

from hankelc import (
    DomainError,
    MuVector,
    bessel_j,
    c_k_mu,
    c_mu,
    gamma_fn,
    reduced_bessel,
)
from fractions import Fraction


def test_gamma_against_math():
    xs = np.geomspace(0.05, 170.0, 400)
    rel = [abs(gamma_fn(float(x)) - math.gamma(float(x))) / math.gamma(float(x)) for x in xs]
    assert max(rel) < 1e-12


def test_gamma_recurrence():
    for x in np.linspace(0.2, 80.0, 101):
        x = float(x)
        assert abs(gamma_fn(x + 1.0) - x * gamma_fn(x)) <= 1e-12 * gamma_fn(x + 1.0)


def test_gamma_half_integer():
    assert abs(gamma_fn(0.5) - math.sqrt(math.pi)) < 1e-13
    assert abs(gamma_fn(1.5) - 0.5 * math.sqrt(math.pi)) < 1e-13


def test_gamma_domain():
    with pytest.raises(DomainError):
        gamma_fn(0.0)
    with pytest.raises(DomainError):
        gamma_fn(-1.0)
    with pytest.raises(DomainError):
        gamma_fn(200.0)


@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 1.5, 2.5, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0])
def test_bessel_vs_scipy(nu):
    z = np.concatenate([np.linspace(1e-6, 11.9, 150), np.linspace(12.0, 60.0, 200), np.linspace(61.0, 199.0, 120)])
    ours = bessel_j(nu, z)
    ref = sps.jv(nu, z)
    assert float(np.max(np.abs(ours - ref))) < 1e-10


def test_bessel_half_order_closed_forms():
    z = np.linspace(0.01, 150.0, 700)
    sin_form = np.sqrt(2.0 / (math.pi * z)) * np.sin(z)
    cos_form = np.sqrt(2.0 / (math.pi * z)) * np.cos(z)
    assert float(np.max(np.abs(bessel_j(0.5, z) - sin_form))) < 1e-10
    assert float(np.max(np.abs(bessel_j(-0.5, z) - cos_form))) < 1e-10


def test_bessel_three_halves_closed_form():
    z = np.linspace(0.1, 100.0, 500)
    form = np.sqrt(2.0 / (math.pi * z)) * (np.sin(z) / z - np.cos(z))
    assert float(np.max(np.abs(bessel_j(1.5, z) - form))) < 1e-10


def test_bessel_derivative_identity():
    # 2 J_nu' = J_{nu-1} - J_{nu+1}, checked against central differences
    h = 1e-5
    for nu in (0.5, 1.0, 2.5, 4.0):
        z = np.linspace(0.3, 80.0, 300)
        fd = (bessel_j(nu, z + h) - bessel_j(nu, z - h)) / (2 * h)
        exact = 0.5 * (bessel_j(nu - 1.0, z) - bessel_j(nu + 1.0, z))
        assert float(np.max(np.abs(fd - exact))) < 1e-6


def test_bessel_at_zero():
    # J_0(0) = 1 up to the gamma kernel's last-ulp rounding; J_nu(0) = 0 exactly
    assert bessel_j(0.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert bessel_j(1.0, 0.0) == 0.0
    assert bessel_j(0.5, 0.0) == 0.0


def test_bessel_domain():
    with pytest.raises(DomainError):
        bessel_j(-1.0, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0.5, -0.1)
    with pytest.raises(DomainError):
        bessel_j(0.5, 250.0)
    assert bessel_j(0.5, 250.0, z_max=300.0) == pytest.approx(sps.jv(0.5, 250.0), abs=1e-10)


def test_reduced_bessel_finite_at_zero():
    for nu in (-0.5, 0.0, 0.5, 2.0):
        want = 1.0 / (2.0**nu * math.gamma(nu + 1.0))
        assert reduced_bessel(nu, 0.0) == pytest.approx(want, rel=1e-13)


def test_reduced_bessel_matches_quotient():
    z = np.linspace(0.5, 40.0, 100)
    for nu in (0.5, 1.5, 3.0):
        assert float(
            np.max(np.abs(reduced_bessel(nu, z) - sps.jv(nu, z) / z**nu))
        ) < 1e-12


def test_mu_vector_validation():
    mu = MuVector(["1/2", "3/4"])
    assert mu.is_rational
    assert mu.dim == 2
    with pytest.raises(DomainError):
        MuVector(["-3/4"])
    assert not MuVector([0.25]).is_rational


def test_mu_shifted():
    mu = MuVector(["1/2"])
    assert tuple(mu.shifted((2,))) == (Fraction(5, 2),)


def test_c_mu_value():
    # 2^(1/2) Gamma(3/2) = sqrt(2) sqrt(pi)/2 = sqrt(pi/2)
    assert c_mu(MuVector(["1/2"])) == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-13)


def test_c_k_mu_exact_fraction():
    mu = MuVector(["1/2"])
    # (-1) / (2 (mu+1)) = -1/3
    assert c_k_mu(mu, (1,)) == Fraction(-1, 3)
    # k=2: 1 / (4 (mu+1)(mu+2)) = 1/15
    assert c_k_mu(mu, (2,)) == Fraction(1, 15)
    mu2 = MuVector(["1/2", "1/2"])
    assert c_k_mu(mu2, (1, 1)) == Fraction(1, 9)


def test_c_k_mu_matches_gamma_ratio():
    mu = MuVector(["3/4", "1/2"])
    k = (2, 1)
    exact = float(c_k_mu(mu, k))
    ratio = -c_mu(mu) / c_mu(mu.shifted(k))
    assert exact == pytest.approx(ratio, rel=1e-12)
