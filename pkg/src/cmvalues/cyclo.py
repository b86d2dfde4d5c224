"""Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are stored as rational coefficient vectors in the power basis
1, zeta, ..., zeta^{phi(n)-1}, i.e. reduced modulo the cyclotomic polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    # x^n - 1 divided by Phi_d for all proper divisors d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _poly_exact_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert not any(num), "inexact polynomial division"
    return out


def _reduce(coeffs, n):
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            # phi is monic: x^deg = -sum_{j<deg} phi_j x^j
            for j in range(deg):
                c[i - deg + j] -= t * phi[j]
        c[i] = 0
    c = c[:deg] + [0] * max(0, deg - len(c))
    return tuple(Fraction(x) for x in c)


class Cyclotomic:
    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        self.n = n
        self.coeffs = _reduce(coeffs, n)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "Cyclotomic":
        k %= n
        return cls(n, [0] * k + [1])

    @classmethod
    def rational(cls, n: int, r) -> "Cyclotomic":
        return cls(n, [Fraction(r)])

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.n != self.n:
                raise ValueError(f"mixing Q(zeta_{self.n}) and Q(zeta_{other.n})")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.rational(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return Cyclotomic(self.n, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [a / Fraction(other) for a in self.coeffs])
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def conjugate(self) -> "Cyclotomic":
        out = [Fraction(0)] * self.n
        for k, a in enumerate(self.coeffs):
            out[(-k) % self.n] += a
        return Cyclotomic(self.n, out)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def to_mpc(self):
        z = mpmath.expjpi(mpmath.mpf(2) / self.n)
        total = mpmath.mpc(0)
        zk = mpmath.mpc(1)
        for a in self.coeffs:
            if a:
                total += mpmath.mpf(a.numerator) / a.denominator * zk
            zk *= z
        return total

    def to_json(self):
        if self.is_rational():
            r = self.coeffs[0]
            return r.numerator if r.denominator == 1 else str(r)
        return {"cyclotomic_order": self.n, "coefficients": [str(a) for a in self.coeffs]}

    def __repr__(self):
        terms = [f"{a}*z^{k}" for k, a in enumerate(self.coeffs) if a]
        return f"Cyclotomic({self.n}: {' + '.join(terms) or '0'})"
