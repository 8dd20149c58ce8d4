"""Delta pairings, Taylor germs, functional reconstruction, multipliers."""

import math
from fractions import Fraction

import numpy as np
import pytest

from hankelc import (
    CutoffSpec,
    DeltaCombination,
    DomainError,
    EvenPolynomial,
    ExtrapolationDiverged,
    HypothesisFailed,
    MultiIndex,
    MultiplierForm,
    MuVector,
    OuterWindow,
    SupportViolation,
    SymbolicHFunction,
    WindowedHFunction,
    c_k_mu,
    c_mu,
    hankel_delta,
    multiplier_check,
    pair_delta,
    pair_delta_transform,
    pair_s_delta,
    reconstruct_point_supported,
    richardson_limit,
    taylor_coeffs,
)
from hankelc.multiindex import mi_below, mi_graded_enumerate

HALF = Fraction(1, 2)
SQRT_PI_2 = math.sqrt(math.pi / 2)


def _gauss(mu, poly=None, decay=HALF):
    mu = MuVector(mu)
    poly = poly if poly is not None else EvenPolynomial.constant(mu.dim, 1)
    return SymbolicHFunction(mu, poly, decay)


def _series_coeff(poly, decay, k):
    """Taylor coefficient of v^k for Q(v) e^{-decay (v_1+..+v_n)}, exactly."""
    k = MultiIndex(k)
    total = Fraction(0)
    for j in mi_below(k):
        q = poly.coefficient(j)
        if q == 0:
            continue
        piece = Fraction(q)
        for a in range(len(k)):
            r = k[a] - j[a]
            piece *= (-Fraction(decay)) ** r / math.factorial(r)
        total += piece
    return total


# ---------------------------------------------------------------------------
# extrapolation


def test_richardson_geometric_sequence():
    # v_j = 3 + 4^-j + 0.2 * 16^-j
    vals = [3 + 4.0**-j + 0.2 * 16.0**-j for j in range(7)]
    est, err = richardson_limit(vals)
    assert est == pytest.approx(3.0, abs=1e-12)
    assert err < 1e-10


def test_richardson_divergence():
    with pytest.raises(ExtrapolationDiverged):
        richardson_limit([1.0, 2.0, 4.0, 8.0, 16.0, 32.0])
    with pytest.raises(ExtrapolationDiverged):
        richardson_limit([1.0, 1.1, math.nan, 1.0, 1.0])
    with pytest.raises(DomainError):
        richardson_limit([1.0, 1.0])  # too short for the default levels


# ---------------------------------------------------------------------------
# delta pairings


def test_pair_delta_plain():
    # (delta, x e^{-x^2/2}) = C_mu * 1 = sqrt(pi/2) at mu = 1/2
    phi = _gauss(["1/2"])
    assert pair_delta((0,), ["1/2"], phi) == pytest.approx(SQRT_PI_2, rel=1e-12)
    # T u = -u at the origin
    assert pair_delta((1,), ["1/2"], phi) == pytest.approx(-SQRT_PI_2, rel=1e-12)


def test_pair_delta_methods_agree():
    phi = _gauss(["1/2", "3/4"], EvenPolynomial(2, {(0, 0): 1, (1, 1): -HALF}))
    for k in mi_graded_enumerate(2, 2):
        exact = pair_delta(k, phi.mu, phi, method="exact")
        extr = pair_delta(k, phi.mu, phi, method="extrapolate")
        assert extr == pytest.approx(exact, abs=1e-8 * max(1, abs(exact)))


def test_pair_delta_windowed():
    phi = _gauss(["1/2"])
    plateau = WindowedHFunction(phi, CutoffSpec(1.0, 2.0))
    far = WindowedHFunction(phi, OuterWindow(1.0, 2.0))
    want = pair_delta((1,), ["1/2"], phi)
    assert pair_delta((1,), ["1/2"], plateau) == want
    assert pair_delta((1,), ["1/2"], far) == 0.0


def test_pair_delta_validation():
    phi = _gauss(["1/2"])
    with pytest.raises(DomainError):
        pair_delta((0, 0), ["1/2", "1/2"], phi)  # wrong orders for phi
    with pytest.raises(DomainError):
        pair_delta((0, 0), ["1/2"], phi)  # index dimension
    with pytest.raises(DomainError):
        pair_delta((0,), ["1/2"], phi, method="mystery")


def test_pair_s_delta_scaling():
    # only the l = 0 term of the normal-ordered expansion survives at 0:
    # (S^k delta, phi) = prod_i 2^{k_i} (mu_i+1)..(mu_i+k_i) (T^k delta, phi)
    mu = MuVector(["1/2", "0"])
    phi = _gauss(mu, EvenPolynomial(2, {(0, 0): 1, (1, 0): HALF}))
    for k in [(1, 0), (1, 1), (2, 1)]:
        ratio = Fraction(1)
        for a in range(2):
            for j in range(1, k[a] + 1):
                ratio *= 2 * (mu[a] + j)
        got = pair_s_delta(k, mu, phi)
        want = float(ratio) * pair_delta(k, mu, phi)
        assert got == pytest.approx(want, rel=1e-10)


# ---------------------------------------------------------------------------
# Taylor germs


def test_taylor_exact_matches_series_oracle():
    poly = EvenPolynomial(1, {(0,): 1, (1,): -HALF})
    phi = _gauss(["1/2"], poly)
    report = taylor_coeffs(phi.mu, phi, 4, method="exact")
    assert report.method == "exact"
    for k, got in report.coefficients.items():
        assert got == _series_coeff(poly, HALF, k)


def test_taylor_exact_matches_series_oracle_2d():
    poly = EvenPolynomial(2, {(0, 0): 2, (1, 1): Fraction(1, 3)})
    phi = _gauss(["1/2", "3/2"], poly)
    report = taylor_coeffs(phi.mu, phi, 3, method="exact")
    for k, got in report.coefficients.items():
        assert got == _series_coeff(poly, HALF, k)


def test_taylor_extrapolated_close_to_exact():
    poly = EvenPolynomial(1, {(0,): 1, (1,): 1})
    phi = _gauss(["1/2"], poly)
    exact = taylor_coeffs(phi.mu, phi, 3, method="exact").coefficients
    extr = taylor_coeffs(phi.mu, phi, 3, method="extrapolate").coefficients
    for k in exact:
        assert float(extr[k]) == pytest.approx(float(exact[k]), abs=1e-8)


def test_taylor_remainder_decays():
    phi = _gauss(["1/2"])
    report = taylor_coeffs(phi.mu, phi, 3)
    assert report.remainder_nonincreasing()
    assert abs(report.remainder_samples[-1][1]) < 1e-6
    assert report.tk_final_max() < 1e-6
    data = report.to_json()
    assert data["order"] == 3 and len(data["coefficients"]) == 4


def test_taylor_validation():
    phi = _gauss(["1/2"])
    with pytest.raises(DomainError):
        taylor_coeffs(["1/2"], phi, -1)
    with pytest.raises(DomainError):
        taylor_coeffs(["3/2"], phi, 2)


# ---------------------------------------------------------------------------
# transforms of deltas


def test_hankel_delta_structure():
    mu = MuVector(["1/2"])
    g = hankel_delta((1,), mu)
    assert g.decay == 0
    assert g.poly.coefficient((1,)) == c_k_mu(mu, (1,))
    assert g.poly.coefficient((1,)) == Fraction(-1, 3)


def test_pair_delta_transform_closed_value():
    # (T delta, h phi) = -sqrt(pi/2) for phi = x e^{-x^2/2} at mu = 1/2
    phi = _gauss(["1/2"])
    out = pair_delta_transform((1,), ["1/2"], phi)
    assert out["lhs"] == pytest.approx(-SQRT_PI_2, abs=1e-6)
    assert out["rhs"] == pytest.approx(-SQRT_PI_2, abs=1e-9)
    assert abs(out["lhs"] - out["rhs"]) <= 1e-5 * abs(out["rhs"])
    assert out["ladder_error"] < 1e-6


def test_pair_delta_transform_2d():
    mu = MuVector(["1/2", "0"])
    phi = _gauss(mu, EvenPolynomial(2, {(0, 0): 1, (1, 0): -HALF}))
    for k in [(0, 0), (1, 1)]:
        out = pair_delta_transform(k, mu, phi)
        assert abs(out["lhs"] - out["rhs"]) <= 1e-5 * max(abs(out["rhs"]), 1e-12)


# ---------------------------------------------------------------------------
# combinations and reconstruction


def test_delta_combination_roundtrip():
    comb = DeltaCombination(["1/2", "0"], {(0, 0): 2.0, (1, 1): -0.25})
    back = DeltaCombination.from_json(comb.to_json())
    assert back == comb
    assert back.dim == 2


def test_delta_combination_drops_zero_terms():
    comb = DeltaCombination(["1/2"], {(0,): 1.0, (1,): 0.0})
    assert list(comb.terms) == [MultiIndex((0,))]


def test_delta_combination_pair_linear():
    phi = _gauss(["1/2"])
    comb = DeltaCombination(["1/2"], {(0,): 2.0, (1,): 3.0})
    want = 2.0 * pair_delta((0,), ["1/2"], phi) + 3.0 * pair_delta((1,), ["1/2"], phi)
    assert comb.pair(phi) == pytest.approx(want, rel=1e-12)


def test_delta_combination_transform():
    mu = MuVector(["1/2"])
    comb = DeltaCombination(mu, {(0,): 1.0, (1,): -2.0})
    g = comb.transform()
    assert g.poly.coefficient((0,)) == c_k_mu(mu, (0,))
    assert g.poly.coefficient((1,)) == -2.0 * c_k_mu(mu, (1,))


def test_reconstruct_recovers_coefficients():
    mu = MuVector(["1/2", "0"])
    truth = DeltaCombination(mu, {(0, 0): 1.5, (1, 0): -0.5, (0, 2): Fraction(1, 3)})
    got = reconstruct_point_supported(truth.as_functional(), mu, 2, CutoffSpec(1.0, 2.0))
    assert set(got.terms) == set(truth.terms)
    for k, c in truth.terms.items():
        assert got.terms[k] == pytest.approx(float(c), abs=1e-12)


def test_reconstruct_rejects_spread_out_functional():
    mu = MuVector(["1/2"])

    def point_mass_away_from_zero(phi):
        return float(phi.evaluate([np.array(3.0)]))

    with pytest.raises(SupportViolation):
        reconstruct_point_supported(
            point_mass_away_from_zero, mu, 1, CutoffSpec(1.0, 2.0)
        )


# ---------------------------------------------------------------------------
# multipliers


def test_multiplier_polynomial():
    form = MultiplierForm.polynomial(EvenPolynomial.monomial((1,)))  # x^2
    report = multiplier_check(form, 2)
    assert report.bounded
    assert report.entries[MultiIndex((0,))]["exponent"] == -1
    assert report.entries[MultiIndex((1,))]["exponent"] == 0
    assert report.entries[MultiIndex((1,))]["bound"] == pytest.approx(2.0, rel=1e-6)
    assert report.entries[MultiIndex((2,))]["bound"] == 0.0


def test_multiplier_quotient_bounds():
    # 1/(1+v): T -> -2/(1+v)^2, T^2 -> 8/(1+v)^3; suprema 1, 2, 8 at v -> 0
    one = EvenPolynomial.constant(1, 1)
    denom = EvenPolynomial(1, {(0,): 1, (1,): 1})
    report = multiplier_check(MultiplierForm.quotient(one, denom), 2)
    assert report.bounded
    for k, want in [((0,), 1.0), ((1,), 2.0), ((2,), 8.0)]:
        entry = report.entries[MultiIndex(k)]
        assert entry["exponent"] == 0
        assert entry["bound"] == pytest.approx(want, rel=1e-4)
    data = report.to_json()
    assert data["bounded"] is True and len(data["entries"]) == 3


def test_multiplier_gate_rejects_vanishing_denominator():
    one = EvenPolynomial.constant(1, 1)
    s = EvenPolynomial.monomial((1,))
    with pytest.raises(HypothesisFailed):
        multiplier_check(MultiplierForm.quotient(one, s), 1)


def test_multiplier_gate_rejects_sign_change():
    one = EvenPolynomial.constant(1, 1)
    denom = EvenPolynomial(1, {(0,): 1, (1,): -1})  # 1 - x^2 vanishes at x = 1
    with pytest.raises(HypothesisFailed):
        multiplier_check(MultiplierForm.quotient(one, denom), 0)


def test_multiplier_windowed_inverse_power():
    # 1/x^2 is fine once a far-field window removes the origin
    one = EvenPolynomial.constant(1, 1)
    s = EvenPolynomial.monomial((1,))
    form = MultiplierForm.windowed_quotient(one, s, OuterWindow(1.0, 2.0))
    report = multiplier_check(form, 2)
    assert report.bounded
    assert all(e["exponent"] == 0 for e in report.entries.values())


def test_multiplier_window_only():
    form = MultiplierForm.window_only(CutoffSpec(1.0, 3.0), 1)
    report = multiplier_check(form, 2)
    assert report.bounded
    assert report.entries[MultiIndex((0,))]["bound"] == pytest.approx(1.0, rel=1e-9)


def test_multiplier_order_cap_for_windows():
    form = MultiplierForm.window_only(CutoffSpec(1.0, 3.0), 1)
    with pytest.raises(DomainError):
        multiplier_check(form, 5)


def test_multiplier_evaluate():
    one = EvenPolynomial.constant(1, 1)
    denom = EvenPolynomial(1, {(0,): 1, (1,): 1})
    form = MultiplierForm.quotient(one, denom)
    x = np.array([2.0])
    assert form.evaluate([x])[0] == pytest.approx(1 / 5)
    wform = MultiplierForm.windowed_quotient(one, denom, OuterWindow(3.0, 4.0))
    assert wform.evaluate([x])[0] == 0.0
