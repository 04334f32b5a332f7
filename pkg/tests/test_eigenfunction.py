import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from degenerate_rabi.eigenfunction import (EigenFunction, GaussianPolynomial, beta_coeffs,
                                           build_eigenfunction, default_radii, degenerate_solution,
                                           growth_order_type, hermite, hermite_coefficients,
                                           log_max_modulus, max_modulus, ode_residual_second_order,
                                           ode_residual_system, psi2_from_psi1)
from degenerate_rabi.model import DomainError, ModelParams
from degenerate_rabi.spectrum import Branch, SpectralPoint, solve_level
from degenerate_rabi.verify import residual_grid

P_REF = ModelParams.uplus(1.0, 0.5, 1.0)
P_LOW = ModelParams.uplus(1.0, 0.5, 0.3)


def level(p, n, branch):
    return solve_level(p, n, branch)[0]


def test_hermite_base_cases():
    z = np.array([0.3, 1 + 1j, -2.0])
    assert np.allclose(hermite(0, z), 1)
    assert np.allclose(hermite(1, z), 2 * z)
    assert np.allclose(hermite(2, z), 4 * z * z - 2)
    assert hermite(3, 1.0) == -4
    assert hermite(4, 1j) == pytest.approx(76)
    with pytest.raises(ValueError):
        hermite(-1, 0.0)


def test_hermite_recurrence_matches_monomials():
    rng = np.random.default_rng(3)
    z = 3 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    for n in range(16):
        direct = np.polynomial.polynomial.polyval(z, hermite_coefficients(n))
        rec = hermite(n, z)
        assert np.all(np.abs(rec - direct) <= 1e-10 * np.maximum(np.abs(direct), 1.0))


def test_beta_coeffs_examples():
    assert beta_coeffs(1.0) == (0.5, 0.5)
    assert beta_coeffs(1.25) == pytest.approx((1.0, 0.25))
    assert beta_coeffs(-1.25) == pytest.approx((-0.25, -1.0))
    with pytest.raises(DomainError):
        beta_coeffs(0.5)


@given(st.floats(1e-8, 1e6), st.sampled_from([-1, 1]))
def test_beta_identities(d, sign):
    x = sign * (1 + d)
    bp, bm = beta_coeffs(x)
    assert 4 * bp * bm == pytest.approx(1.0, rel=1e-12)
    assert bp + bm == pytest.approx(x, rel=1e-12)


def test_branch_conventions():
    up = build_eigenfunction(P_REF, level(P_REF, 2, Branch.UPPER))
    low = build_eigenfunction(P_LOW, level(P_LOW, 2, Branch.LOWER))
    bp, bm = beta_coeffs(up.x)
    assert up.beta == bm and up.scale.real == 0 and up.scale.imag > 0
    bp, bm = beta_coeffs(low.x)
    assert low.beta == bp and low.scale.imag == 0
    assert up.scale.imag == pytest.approx((up.x**2 - 1) ** 0.25)


def test_lower_ground_state_is_gaussian():
    pt = level(P_LOW, 0, Branch.LOWER)
    ef = build_eigenfunction(P_LOW, pt)
    z = residual_grid()
    assert np.allclose(ef.psi1(z), np.exp(-ef.beta * z * z))
    expected = P_LOW.omega / (P_LOW.g * (pt.x - 1)) * (1 - 2 * ef.beta) * z * ef.psi1(z)
    assert np.allclose(ef.psi2(z), expected, rtol=1e-12, atol=1e-14)


def test_upper_n1_real_on_real_axis():
    ef = build_eigenfunction(P_REF, level(P_REF, 1, Branch.UPPER))
    t = np.linspace(-3, 3, 61)
    assert np.all(ef.psi1(t).imag == 0)
    # leading Taylor coefficient is 1: psi_1 ~ z near 0
    assert ef.psi1(1e-8) == pytest.approx(1e-8, rel=1e-9)


def test_real_on_real_axis_and_unit_leading_coefficient():
    for p, branch in ((P_REF, Branch.UPPER), (P_LOW, Branch.LOWER)):
        for n in range(7):
            ef = build_eigenfunction(p, level(p, n, branch))
            t = np.linspace(-2, 2, 41)
            v = ef.psi1(t)
            assert np.max(np.abs(v.imag)) <= 1e-12 * max(1.0, np.max(np.abs(v)))
            h = 1e-3
            assert ef.psi1(h).real / h ** (n % 2) == pytest.approx(1.0, rel=1e-4 * (n + 1))


def test_build_rejects_non_roots():
    pt = level(P_REF, 1, Branch.UPPER)
    with pytest.raises(ValueError):
        build_eigenfunction(P_REF, SpectralPoint(1, Branch.UPPER, pt.x + 1e-3, pt.energy))


def test_psi2_formula_and_singularity():
    ef = build_eigenfunction(P_REF, level(P_REF, 2, Branch.UPPER))
    z = residual_grid()
    assert np.allclose(psi2_from_psi1(P_REF, ef.x, ef.psi1, z), ef.psi2(z))
    with pytest.raises(ZeroDivisionError):
        psi2_from_psi1(P_REF, 1.0, ef.psi1, z)


def test_first_equation_at_sample_points():
    pt = level(P_REF, 3, Branch.UPPER)
    ef = build_eigenfunction(P_REF, pt)
    z = np.array([0.3, 1 + 1j, -2.0])
    r1, _ = ode_residual_system(P_REF, pt.energy, ef.psi1, ef.psi2, z)
    assert np.max(np.abs(r1)) <= 1e-12


def test_derivatives_against_finite_differences():
    ef = build_eigenfunction(P_LOW, level(P_LOW, 4, Branch.LOWER))
    z = np.array([0.4 + 0.2j, -1.1 + 0.7j])
    h = 1e-5
    d1 = (ef.psi1(z + h) - ef.psi1(z - h)) / (2 * h)
    d2 = (ef.psi1(z + h) - 2 * ef.psi1(z) + ef.psi1(z - h)) / h**2
    d2b = (ef.psi2(z + h) - ef.psi2(z - h)) / (2 * h)
    assert np.allclose(ef.psi1(z, 1), d1, rtol=1e-8)
    assert np.allclose(ef.psi1(z, 2), d2, rtol=1e-4)
    assert np.allclose(ef.psi2(z, 1), d2b, rtol=1e-8)


def test_residuals_small_and_sensitive():
    for p, branch in ((P_REF, Branch.UPPER), (P_LOW, Branch.LOWER)):
        for n in range(6):
            pt = level(p, n, branch)
            ef = build_eigenfunction(p, pt)
            z = residual_grid()
            r1, r2 = ode_residual_system(p, pt.energy, ef.psi1, ef.psi2, z)
            assert max(np.max(np.abs(r1)), np.max(np.abs(r2))) <= 1e-10
            assert np.max(np.abs(ode_residual_second_order(p, pt.x, ef.psi1, z))) <= 1e-10
            # the same functions fail at a shifted energy
            s1, s2 = ode_residual_system(p, pt.energy + 1e-3, ef.psi1, ef.psi2, z)
            assert max(np.max(np.abs(s1)), np.max(np.abs(s2))) >= 1e-5


def test_zero_function_residual():
    zero = GaussianPolynomial(0.0, (0.0,))
    z = residual_grid()
    r1, r2 = ode_residual_system(P_REF, 0.3, zero, zero, z)
    assert np.all(r1 == 0) and np.all(r2 == 0)
    assert np.all(ode_residual_second_order(P_REF, 2.0, zero, z) == 0)


def test_gaussian_trial_leaves_m_minus_one():
    x = 3.0
    _, bm = beta_coeffs(x)
    w = GaussianPolynomial(bm, (1.0,))
    z = residual_grid()
    r = ode_residual_second_order(P_REF, x, w, z)
    assert np.max(np.abs(r)) > 1e-3
    with pytest.raises(DomainError):
        ode_residual_second_order(P_REF, 0.5, w, z)


def test_degenerate_solution():
    psi1, psi2 = degenerate_solution(P_REF, c=2.0)
    assert psi1(0.0) == 2.0 and psi2(0.0) == 0.0
    z = residual_grid()
    r1, r2 = ode_residual_system(P_REF, -0.25, psi1, psi2, z)
    assert max(np.max(np.abs(r1)), np.max(np.abs(r2))) <= 1e-13
    est = growth_order_type(psi1, default_radii(psi1.beta))
    assert est.order_hat == pytest.approx(2.0, abs=0.05)
    assert est.type_hat == pytest.approx(0.5, rel=0.02)


def test_independent_constants_do_not_solve_system():
    psi1, _ = degenerate_solution(P_REF, c=1.0)
    _, psi2 = degenerate_solution(P_REF, c=3.0)
    r1, r2 = ode_residual_system(P_REF, -0.25, psi1, psi2, residual_grid())
    assert max(np.max(np.abs(r1)), np.max(np.abs(r2))) > 1e-2


def test_max_modulus_examples():
    gauss = GaussianPolynomial(0.25, (1.0,))
    assert max_modulus(gauss, 2.0) == pytest.approx(math.e, rel=1e-12)
    cube = lambda z, order=0: np.asarray(z, dtype=complex) ** 3
    assert max_modulus(cube, 1.7) == pytest.approx(1.7**3, rel=1e-12)
    with pytest.raises(ValueError):
        max_modulus(gauss, 1.0, k_samples=10)


def test_max_modulus_against_dense_scan():
    x = -1.3
    bp, _ = beta_coeffs(x)
    ef = EigenFunction(complex(bp), 1, complex((x * x - 1) ** 0.25), 1.0, False, x, 1.0)
    phi = np.linspace(0, 2 * np.pi, 10_000, endpoint=False)
    dense = np.max(np.abs(ef.psi1(3.0 * np.exp(1j * phi))))
    assert max_modulus(ef, 3.0) == pytest.approx(dense, rel=1e-6)
    assert max_modulus(ef, 3.0) >= dense


def test_growth_examples():
    gauss = GaussianPolynomial(0.25, (1.0,))
    est = growth_order_type(gauss, np.geomspace(5, 200, 10))
    assert est.order_hat == pytest.approx(2, rel=0.05) and est.type_hat == pytest.approx(0.25, rel=0.05)
    poly = GaussianPolynomial(0.0, (1.0, 2.0, 0.0, 1.0))
    est = growth_order_type(poly, np.geomspace(10, 1e6, 10))
    # log log M / log r tends to 0 only like 1 / log r
    assert est.order_hat < 0.1 and est.type_hat == 0.0
    assert est.r_grid[0] == 10
    with pytest.raises(ValueError):
        growth_order_type(gauss, [1, 2, 3])


def test_growth_at_x_five_quarters():
    # x = 5/4 on the Upper branch: beta_- = 1/4 exactly
    ef = EigenFunction(0.25 + 0j, 2, 1j * math.sqrt(0.75), 1.0, False, 1.25, 1.0)
    est = growth_order_type(ef, default_radii(ef.beta))
    assert est.order_hat == pytest.approx(2.0, abs=0.1)
    assert est.type_hat == pytest.approx(0.25, rel=0.05)


def test_log_modulus_beyond_overflow():
    gauss = GaussianPolynomial(0.25, (1.0,))
    assert log_max_modulus(gauss, 1e3) == pytest.approx(0.25e6, rel=1e-12)
    plain = lambda z, order=0: np.exp(-0.25 * np.asarray(z, dtype=complex) ** 2)
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(OverflowError):
            growth_order_type(plain, np.geomspace(10, 1e3, 6))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 2), st.floats(-1, 0.9), st.floats(0.1, 2), st.integers(0, 10),
       st.sampled_from(list(Branch)))
def test_residual_property(w, r, f, n, branch):
    p = ModelParams.uplus(w, w * r, math.sqrt(f * w * w * (1 - r) / 2))
    for pt in solve_level(p, n, branch):
        ef = build_eigenfunction(p, pt)
        z = residual_grid()
        r1, r2 = ode_residual_system(p, pt.energy, ef.psi1, ef.psi2, z)
        assert max(np.max(np.abs(r1)), np.max(np.abs(r2))) <= 1e-10
        assert np.max(np.abs(ode_residual_second_order(p, pt.x, ef.psi1, z))) <= 1e-10
