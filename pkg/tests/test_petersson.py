import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmvalues.arith import DiscriminantError, ideal_count, is_fundamental, is_prime, kronecker
from cmvalues.cyclo import Cyclotomic, cyclotomic_polynomial
from cmvalues.petersson import (
    characters,
    cusp_characters,
    default_theta_order,
    eta_cm_value,
    gamma0_coset_reps,
    petersson_norm_eta,
    petersson_quadrature,
    theta_psi,
)
from cmvalues.precision import PrecisionContext
from cmvalues.qforms import BinaryQuadraticForm as F
from cmvalues.qforms import class_group
from cmvalues.qseries import QExpansion, eta_product

CTX = PrecisionContext(200)
PRIME_D = [-p for p in range(3, 101) if is_prime(p) and p % 4 == 3]


def test_cyclotomic_basics():
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    z = Cyclotomic.zeta(3)
    assert z * z * z == Cyclotomic.rational(3, 1)
    assert 1 + z + z * z == Cyclotomic.rational(3, 0)
    assert (z * z.conjugate()).to_rational() == 1


def test_characters_d23():
    chars = characters(class_group(-23))
    assert len(chars) == 3
    assert chars[0].is_trivial()
    assert {c.order for c in chars[1:]} == {3}
    assert chars[1].conjugate().exponents == chars[2].exponents


@pytest.mark.parametrize("D", [D for D in range(-3, -501, -1) if is_fundamental(D)])
def test_characters_complete_and_orthogonal(D):
    G = class_group(D)
    chars = characters(G)
    assert len(chars) == G.h
    assert len({c.exponents for c in chars}) == G.h
    e = 1
    for c in chars:
        e = math.lcm(e, c.order)
    vals = [[c.value(i, e) for i in range(G.h)] for c in chars]
    for a, c in enumerate(chars):
        # multiplicative on the composition table
        for i in range(G.h):
            for j in range(G.h):
                assert c.exponents[G.mul(i, j)] == (c.exponents[i] + c.exponents[j]) % 1
        for b in range(a, len(chars)):
            s = Cyclotomic.rational(e, 0)
            for i in range(G.h):
                s = s + vals[a][i] * vals[b][i].conjugate()
            assert s.to_rational() == (G.h if a == b else 0)


def test_theta_psi_is_eta_product_d23():
    G = class_group(-23)
    chi = [c for c in characters(G) if c.order == 3][0]
    th = theta_psi(G, chi, 50)
    eta23 = eta_product([1, 23], 50)
    for n in range(51):
        c = th[n]
        assert c.is_rational() and c.to_rational() == eta23[n]


@pytest.mark.parametrize("D", [-7, -23, -47])
def test_theta_psi_trivial_is_ideal_count(D):
    G = class_group(D)
    th = theta_psi(G, characters(G)[0], 60)
    assert th[0].to_rational() == Fraction(G.h, G.w)
    for n in range(1, 61):
        assert th[n].to_rational() == ideal_count(n, D)


@pytest.mark.parametrize("D", PRIME_D)
def test_theta_psi_inert_vanishing(D):
    G = class_group(D)
    for psi in characters(G):
        th = theta_psi(G, psi, 100)
        if not psi.is_trivial():
            assert th[0] == Cyclotomic.rational(psi.order, 0)
        if psi.square().is_trivial():
            continue
        for n in range(1, 101):
            if kronecker(D, n) == -1:
                assert th[n] == Cyclotomic.rational(psi.order, 0)


def test_eta_cm_value_closed_form():
    with CTX.workprec():
        expected = mpmath.gamma(0.25) ** 2 / (4 * mpmath.pi ** 1.5)
        assert abs(eta_cm_value(F(1, 0, 1), CTX) - expected) < mpmath.ldexp(1, -190)
        # an equivalent non-reduced form gives the same value
        assert eta_cm_value(F(2, 3, 2), CTX) == eta_cm_value(F(1, 1, 2), CTX)


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_eta_cm_value_invariant_under_sl2(x, y):
    # [1,1,6] moved by (1 x; 0 1) and then by S (y times alternating)
    a, b, c = 2, 1, 3
    b, c = b + 2 * a * x, a * x * x + b * x + c
    a, b, c = c, -b, a
    b, c = b + 2 * a * y, a * y * y + b * y + c
    ctx = PrecisionContext(100)
    with ctx.workprec():
        assert abs(eta_cm_value(F(a, b, c), ctx) - eta_cm_value(F(2, 1, 3), ctx)) < mpmath.ldexp(1, -90)


@pytest.mark.parametrize("D", PRIME_D)
def test_eta_formula_real_and_positive(D):
    for chi in cusp_characters(D):
        v = petersson_norm_eta(D, chi, CTX)
        assert v.imag_residual < mpmath.ldexp(1, -CTX.bits // 2)
        assert v.numeric > 0


def test_eta_formula_rejections():
    G = class_group(-23)
    with pytest.raises(ValueError):
        petersson_norm_eta(-23, characters(G)[0], CTX)
    G = class_group(-39)
    with pytest.raises(DiscriminantError):
        petersson_norm_eta(-39, characters(G)[-1], CTX)


def test_gamma0_cosets():
    assert len(gamma0_coset_reps(23)) == 24
    with pytest.raises(ValueError):
        gamma0_coset_reps(21)


@pytest.fixture(scope="module")
def eta23():
    return eta_product([1, 23], default_theta_order(23))


def test_quadrature_matches_eta_formula_d23(eta23):
    q = petersson_quadrature(eta23, -23)
    chi = cusp_characters(-23)[0]
    v = float(petersson_norm_eta(-23, chi, CTX).numeric)
    assert abs(q.value - v) / v < 0.01
    assert abs(q.area - q.expected_area) < 1e-8 * q.expected_area
    assert q.fricke_residual < 1e-10


def test_quadrature_scaling_and_zero(eta23):
    q1 = petersson_quadrature(eta23, -23).value
    two = QExpansion(eta23.leading_exponent, tuple(2 * c for c in eta23.coefficients))
    assert petersson_quadrature(two, -23).value == pytest.approx(4 * q1, rel=1e-12)
    zero = QExpansion(1, (0,) * 200)
    assert petersson_quadrature(zero, -23).value == 0


def test_quadrature_rejections(eta23):
    with pytest.raises(ValueError, match="cuspidal"):
        petersson_quadrature(QExpansion(0, (1,) + eta23.coefficients), -23)
    with pytest.raises(ValueError, match="too short"):
        petersson_quadrature(eta23.truncate(40), -23)
