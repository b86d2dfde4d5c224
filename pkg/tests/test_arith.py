import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from cmvalues.arith import (
    INFINITY,
    DiscriminantError,
    check_fundamental,
    divisors,
    factorize,
    hilbert,
    ideal_count,
    is_fundamental,
    kronecker,
    prime_divisors,
    primes_up_to,
    sturm_condition,
    valuation,
)

nonzero = st.integers(-10**6, 10**6).filter(bool)


def test_kronecker_examples():
    assert kronecker(-7, 2) == 1
    assert kronecker(-7, 3) == -1
    assert kronecker(-7, 7) == 0
    assert kronecker(-4, -1) == -1
    assert kronecker(5, 0) == 0 and kronecker(1, 0) == 1
    assert kronecker(-3, 2) == -1


@given(st.integers(-10**5, 10**5), st.integers(1, 10**5).filter(lambda n: n % 2))
def test_kronecker_is_jacobi_for_odd_n(D, n):
    assert kronecker(D, n) == sympy.jacobi_symbol(D % n, n)


@given(st.integers(-10**4, 10**4), st.integers(-500, 500).filter(bool), st.integers(-500, 500).filter(bool))
def test_kronecker_multiplicative_in_n(D, m, n):
    assert kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n)


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4), st.integers(1, 10**4))
def test_kronecker_multiplicative_in_D(a, b, n):
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


def test_fundamental():
    fund = [D for D in range(-1, -40, -1) if is_fundamental(D)]
    assert fund == [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24, -31, -35, -39]
    assert not is_fundamental(5)
    with pytest.raises(DiscriminantError, match="negative"):
        check_fundamental(5)
    with pytest.raises(DiscriminantError, match="0 or 1 mod 4"):
        check_fundamental(-6)
    with pytest.raises(DiscriminantError, match="squarefree"):
        check_fundamental(-27)


def test_hilbert_examples():
    assert hilbert(-1, -1, 2) == -1
    assert hilbert(-1, -1, 3) == 1
    assert hilbert(-1, -1, INFINITY) == -1
    assert hilbert(-7, -3, 3) == -1
    assert hilbert(2, 5, 5) == -1
    assert hilbert(Fraction(1, 3), -1, 3) == hilbert(3, -1, 3)
    with pytest.raises(ValueError):
        hilbert(2, 3, 4)
    with pytest.raises(ValueError):
        hilbert(0, 3, 3)


def _places(a, b):
    return sorted(set(prime_divisors(2 * a * b))) + [INFINITY]


@given(nonzero, nonzero)
def test_hilbert_product_formula(a, b):
    prod = 1
    for p in _places(a, b):
        prod *= hilbert(a, b, p)
    assert prod == 1


@given(nonzero, nonzero, nonzero, st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_hilbert_bimultiplicative_and_symmetric(a, b, c, p):
    assert hilbert(a, b, p) == hilbert(b, a, p)
    assert hilbert(a, b * c, p) == hilbert(a, b, p) * hilbert(a, c, p)


@given(nonzero.filter(lambda a: a != 1), st.sampled_from([2, 3, 5, 7, INFINITY]))
def test_hilbert_steinberg(a, p):
    assert hilbert(a, 1 - a, p) == 1
    assert hilbert(a, -a, p) == 1


def test_hilbert_matches_norm_solvability_odd_prime():
    # for odd p and units u, v: (u, p v)_p = (u / p); brute force over residues
    for p in (3, 5, 7, 11):
        for u in range(1, p):
            squares = {x * x % p for x in range(1, p)}
            expected = 1 if u in squares else -1
            assert hilbert(u, p, p) == expected


def test_factorize():
    assert factorize(50625) == ((3, 4), (5, 4))
    assert factorize(1) == ()
    assert factorize(97) == ((97, 1),)
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(101 * 103, bound=50)


@given(st.integers(1, 10**9))
def test_factorize_matches_sympy(n):
    assert dict(factorize(n)) == sympy.factorint(n)


def test_ideal_count_examples():
    assert ideal_count(2, -7) == 2
    assert ideal_count(3, -7) == 0
    assert ideal_count(9, -7) == 1
    assert ideal_count(7, -7) == 1


@given(st.integers(1, 3000), st.sampled_from([-3, -4, -7, -8, -15, -23, -163, -231]))
def test_ideal_count_is_divisor_sum(n, D):
    assert ideal_count(n, D) == sum(kronecker(D, m) for m in divisors(n))


def test_valuation_and_divisors():
    assert valuation(Fraction(9, 4), 2) == -2
    assert valuation(-48, 2) == 4
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert primes_up_to(20) == (2, 3, 5, 7, 11, 13, 17, 19)


def test_sturm_condition():
    assert sturm_condition(-7)
    assert sturm_condition(-231)  # (4/3)(8/7)(12/11) = 1.66...
    assert not sturm_condition(-961380175077106319535)  # product of the odd primes up to 59
    with pytest.raises(DiscriminantError):
        sturm_condition(-8)


def test_sturm_condition_is_exact():
    for D in range(-3, -3000, -1):
        if is_fundamental(D) and D % 2:
            prod = math.prod(Fraction(p + 1, p) for p in prime_divisors(D))
            assert sturm_condition(D) == (prod <= 3)
