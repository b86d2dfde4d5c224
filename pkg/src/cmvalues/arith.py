"""Exact integer arithmetic: quadratic symbols, local Hilbert symbols,
factorization, ideal counts and discriminant predicates.

Everything here works on Python integers and ``fractions.Fraction``; no
floating point is involved.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

INFINITY = math.inf

PrimeFactorization = tuple  # tuple[tuple[int, int], ...], sorted by prime


class DiscriminantError(ValueError):
    """Raised when an integer violates a required discriminant invariant."""


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for arbitrary integers D and n."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n) for odd positive n
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental(D: int) -> bool:
    """True iff D is a negative fundamental discriminant."""
    if D >= 0:
        return False
    if D % 4 == 1:
        return is_squarefree(-D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(-m)
    return False


def check_fundamental(D: int) -> int:
    """Return D unchanged, or raise DiscriminantError naming the failed invariant."""
    if not isinstance(D, int) or isinstance(D, bool):
        raise DiscriminantError(f"discriminant must be an integer, got {D!r}")
    if D >= 0:
        raise DiscriminantError(f"D={D}: discriminant must be negative")
    if D % 4 not in (0, 1):
        raise DiscriminantError(f"D={D}: discriminant must be 0 or 1 mod 4")
    if not is_fundamental(D):
        if D % 4 == 1:
            raise DiscriminantError(f"D={D}: D = 1 mod 4 but not squarefree")
        raise DiscriminantError(
            f"D={D}: D/4 must be squarefree and 2 or 3 mod 4 (not fundamental)"
        )
    return D


def check_odd_fundamental(D: int) -> int:
    check_fundamental(D)
    if D % 2 == 0:
        raise DiscriminantError(f"D={D}: an odd discriminant is required")
    return D


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(abs(n))) if n else False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return False
        p += 2
    return True


@lru_cache(maxsize=64)
def primes_up_to(bound: int) -> tuple:
    """Sieve of Eratosthenes; primes p <= bound."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def factorize(n: int, bound: int | None = None) -> PrimeFactorization:
    """Factor ``n >= 1`` by trial division.

    With ``bound`` given, trial division stops at ``bound`` and a ValueError is
    raised if an unfactored cofactor larger than one remains. This keeps the
    cost predictable for large integers that are known to be smooth.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"factorize needs a positive integer, got {n!r}")
    factors = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            factors.append((p, e))
    p, step = 5, 2
    while p * p <= n:
        if bound is not None and p > bound:
            raise ValueError(f"cofactor {n} has no prime factor <= {bound}")
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        if bound is not None and n > bound:
            raise ValueError(f"cofactor {n} has no prime factor <= {bound}")
        factors.append((n, 1))
    return tuple(factors)


def prime_divisors(n: int) -> tuple:
    return tuple(p for p, _ in factorize(abs(n))) if n else ()


def valuation(n, p: int) -> int:
    """p-adic valuation of a nonzero integer or Fraction."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    n = Fraction(n)
    v = 0
    num, den = abs(n.numerator), n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def divisors(n: int) -> list:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def ideal_count(n: int, D: int) -> int:
    """Number of integral ideals of norm n in the quadratic order of discriminant D."""
    if n <= 0:
        raise ValueError(f"ideal_count needs n >= 1, got {n}")
    count = 1
    for p, k in factorize(n):
        chi = kronecker(D, p)
        if chi == 1:
            count *= k + 1
        elif chi == -1:
            if k % 2:
                return 0
    return count


def _split_off(x: int, p: int) -> tuple:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert(a, b, p) -> int:
    """Local Hilbert symbol (a, b)_p for nonzero rationals a, b.

    ``p`` is a prime or ``INFINITY`` (``math.inf``) for the real place.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if p == INFINITY:
        return -1 if (a < 0 and b < 0) else 1
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"Hilbert symbol place must be a prime or infinity, got {p!r}")
    # squares do not change the symbol: replace a = r/s by r*s
    a = a.numerator * a.denominator
    b = b.numerator * b.denominator
    alpha, u = _split_off(a, p)
    beta, v = _split_off(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * kronecker(u, p) ** beta * kronecker(v, p) ** alpha


def sturm_condition(D: int) -> bool:
    """Whether the product of (1 + 1/p) over primes p | D is at most 3.

    Evaluated exactly; D must be an odd fundamental discriminant.
    """
    check_fundamental(D)
    if D % 2 == 0:
        raise DiscriminantError(f"D={D}: the Sturm condition is stated for odd D")
    prod = Fraction(1)
    for p in prime_divisors(D):
        prod *= Fraction(p + 1, p)
    return prod <= 3


def roots_of_unity(D: int) -> int:
    return 6 if D == -3 else 4 if D == -4 else 2
