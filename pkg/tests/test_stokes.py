import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from degenerate_rabi.eigenfunction import beta_coeffs
from degenerate_rabi.model import DomainError, ModelParams
from degenerate_rabi.spectrum import Branch, m_value, rho_value, solve_level
from degenerate_rabi.stokes import (WhittakerParams, characteristic_exponents, continuum_directions,
                                    equivalence_check, equivalence_grid, exponent_predicate,
                                    is_half_natural, multiplier_predicate, multiplier_vanishes,
                                    normalizable_saddle_exists, quantization_predicate, saddle_points,
                                    stokes_line_angles, whittaker_params)
from degenerate_rabi.verify import whittaker_grid

P_REF = ModelParams.uplus(1.0, 0.5, 1.0)


def test_saddle_examples():
    pair = saddle_points(1.25)
    assert pair.alpha1 == pytest.approx(-0.25) and pair.alpha2 == pytest.approx(-1.0)
    pair = saddle_points(1.0)
    assert pair.alpha1 == pair.alpha2 == -0.5
    pair = saddle_points(0.0)
    assert {pair.alpha1, pair.alpha2} == {0.5j, -0.5j}
    assert abs(pair.alpha1) == 0.5
    assert sorted(pair.thetas) == pytest.approx([-math.pi / 2, math.pi / 2])


def test_normalizable_saddle():
    assert normalizable_saddle_exists(1.25)
    assert normalizable_saddle_exists(-3.0)
    assert not normalizable_saddle_exists(0.3)
    assert not normalizable_saddle_exists(-1.0)
    assert not normalizable_saddle_exists(1.0)


@given(st.floats(-1e4, 1e4))
def test_saddle_identities(x):
    pair = saddle_points(x)
    assert abs(4 * pair.alpha1 * pair.alpha2 - 1) <= 1e-12
    assert abs(pair.alpha1 + pair.alpha2 + x) <= 1e-12 * max(1.0, abs(x))
    if abs(x) < 1:
        assert abs(pair.alpha1) == pytest.approx(0.5, rel=1e-12)


@given(st.floats(1e-6, 1e4), st.sampled_from([-1, 1]))
def test_saddles_are_minus_betas(d, sign):
    x = sign * (1 + d)
    pair = saddle_points(x)
    bp, bm = beta_coeffs(x)
    got = sorted([pair.alpha1.real, pair.alpha2.real])
    want = sorted([-bp, -bm])
    assert got == pytest.approx(want, rel=1e-12)


def test_continuum_directions():
    dirs = continuum_directions(0.0)
    # theta = +-pi/2, so phi = -+pi/4 and the opposite rays
    assert sorted(dirs) == pytest.approx([-3 * math.pi / 4, -math.pi / 4, math.pi / 4, 3 * math.pi / 4])
    for x in (-0.7, 0.3):
        pair = saddle_points(x)
        for phi in continuum_directions(x):
            # along these rays alpha_j z^2 is real and positive for one saddle
            vals = [a * cmath.exp(2j * phi) for a in (pair.alpha1, pair.alpha2)]
            assert any(abs(v.imag) < 1e-12 and v.real > 0 for v in vals)
    with pytest.raises(DomainError):
        continuum_directions(1.5)


def test_exponent_examples():
    table = characteristic_exponents(Fraction(-3, 4))
    assert Fraction(0) in table.at_alpha2
    assert table.natural_entries()["alpha2"] == [True, False]
    zero = characteristic_exponents(Fraction(0))
    flags = zero.natural_entries()
    assert not any(flags["alpha1"]) and not any(flags["alpha2"])
    assert zero.at_alpha1 == (Fraction(-3, 4), Fraction(-1, 4))
    assert flags["infinity"] == [False, False]


@given(st.fractions())
def test_exponent_pair_sums_exact(rho):
    assert characteristic_exponents(rho).pair_sums() == (Fraction(-3, 2), Fraction(-1, 2))


def test_stokes_lines():
    angles = stokes_line_angles()
    assert angles == pytest.approx([-math.pi / 4, math.pi / 4])
    for phi in angles:
        assert abs(cmath.exp(2j * phi).real) < 1e-15
    for theta in (0.3, -1.1, 2.0):
        diff = cmath.exp(1j * theta)
        for phi in stokes_line_angles(diff):
            assert abs((cmath.exp(2j * phi) * diff).real) < 1e-12
            assert -math.pi / 2 < phi <= math.pi / 2


def test_whittaker_params_examples():
    r2 = math.sqrt(2)
    wp = whittaker_params(P_REF, r2)
    assert wp.mu == 0.25
    assert wp.kappa == pytest.approx(-0.0947, abs=1e-4)
    assert wp.kappa == pytest.approx(rho_value(P_REF, r2), rel=1e-15)
    with pytest.raises(DomainError):
        whittaker_params(P_REF, 0.5)


def test_multiplier_examples():
    assert multiplier_vanishes(WhittakerParams(-0.75)) == (False, True)
    assert multiplier_vanishes(WhittakerParams(-0.5)) == (False, False)
    assert multiplier_vanishes(WhittakerParams(0.25)) == (True, True)
    assert is_half_natural(1.5) and is_half_natural(0.0) and not is_half_natural(-0.5)
    assert is_half_natural(1.0 + 4e-10) and not is_half_natural(1.0 + 1e-8)


def test_predicates_at_roots():
    for p, branch in ((P_REF, Branch.UPPER), (ModelParams.uplus(1.0, 0.5, 0.3), Branch.LOWER)):
        for n in range(11):
            for pt in solve_level(p, n, branch):
                assert multiplier_predicate(p, pt.x)
                assert quantization_predicate(p, pt.x)
                assert exponent_predicate(p, pt.x)
                assert equivalence_check(p, pt.x)


def test_non_eigenvalue_agreement():
    from scipy.optimize import brentq

    x = brentq(lambda t: m_value(P_REF, t) - 2.5, 1.0001, 100)
    assert not multiplier_predicate(P_REF, x) and not quantization_predicate(P_REF, x)
    assert equivalence_check(P_REF, x)
    x = brentq(lambda t: m_value(P_REF, t) - 2.0, 1.0001, 100)
    assert multiplier_vanishes(whittaker_params(P_REF, x)) == (False, False)
    assert equivalence_check(P_REF, x)
    with pytest.raises(DomainError):
        equivalence_check(P_REF, 0.2)


def test_equivalence_grids():
    rng = np.random.default_rng(7)
    for _ in range(5):
        w = rng.uniform(0.5, 2)
        p = ModelParams.uplus(w, rng.uniform(-w, 0.9 * w), rng.uniform(0.1, 1.5))
        for branch in Branch:
            assert np.all(equivalence_grid(p, whittaker_grid(branch, 1000)))


@given(st.floats(1e-6, 1e3), st.sampled_from([-1, 1]))
def test_kappa_is_rho(d, sign):
    x = sign * (1 + d)
    assert whittaker_params(P_REF, x).kappa == pytest.approx(rho_value(P_REF, x), rel=1e-12)
