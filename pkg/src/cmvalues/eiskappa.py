"""Fourier coefficients kappa(n) of the holomorphic part of the derivative of
the weight one incoherent Eisenstein series, and the constant term
kappa(0) = -2 Lambda'(chi_D, 0) / Lambda(chi_D, 0).

The coefficients are finite rational combinations of logarithms of primes and
are returned exactly (``terms``) together with a numeric realization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .arith import (
    check_fundamental,
    hilbert,
    ideal_count,
    kronecker,
    prime_divisors,
    valuation,
)
from .precision import PrecisionContext
from .qforms import class_group


@dataclass(frozen=True)
class DiffSet:
    finite_primes: frozenset
    includes_infinity: bool = False

    def __len__(self):
        return len(self.finite_primes) + int(self.includes_infinity)

    def to_json(self) -> list:
        out = sorted(self.finite_primes)
        return out + ["inf"] if self.includes_infinity else out


@dataclass(frozen=True)
class KappaValue:
    """kappa = sum r * log p, or a special (non-logarithmic) value."""

    n: Fraction
    D: int
    terms: tuple = ()
    numeric: mpmath.mpf = field(default=None, compare=False)
    diff: DiffSet | None = None
    special: str | None = None

    @property
    def is_zero(self) -> bool:
        return not self.terms and self.special is None

    def to_json(self) -> dict:
        return {
            "n": str(self.n),
            "diff": self.diff.to_json() if self.diff is not None else None,
            "terms": [[str(r), p] for r, p in self.terms],
            "numeric": self.numeric,
            "special": self.special,
        }


def _as_integer_index(n) -> int:
    q = Fraction(n)
    if q.denominator != 1:
        raise ValueError(
            f"index n={q} is not integral; the scalar-valued coefficients live on integers"
        )
    return q.numerator


def diff_set(n, D: int, norm_a: int = 1) -> DiffSet:
    """Primes p with (D, -n N(a))_p = -1; for n < 0 the real place is added."""
    check_fundamental(D)
    n = _as_integer_index(n)
    if n == 0:
        raise ValueError("Diff(n) is undefined for n = 0")
    if norm_a < 1:
        raise ValueError(f"norm_a must be a positive integer, got {norm_a}")
    t = -n * norm_a
    candidates = set(prime_divisors(2 * n * norm_a * D))
    primes = frozenset(p for p in candidates if hilbert(D, t, p) == -1)
    return DiffSet(primes, includes_infinity=n < 0)


def _log_combination(terms, ctx: PrecisionContext):
    with ctx.workprec():
        s = mpmath.mpf(0)
        for r, p in terms:
            s += mpmath.mpf(r.numerator) / r.denominator * mpmath.log(p)
        return s


def o_exponent(n: int, D: int) -> int:
    """Exponent o in the factor 2^o of kappa(n).

    Equal to the number of primes dividing D when n shares at least
    omega(D) - 1 of them, and to 1 + #{q | D : q | n} otherwise. For prime
    |D| it is always 1.
    """
    qs = prime_divisors(D)
    shared = sum(1 for q in qs if n % q == 0)
    return min(len(qs), 1 + shared)


def kappa(n, D: int, norm_a: int = 1, ctx: PrecisionContext | None = None) -> KappaValue:
    """Coefficient kappa(n) for n > 0."""
    ctx = ctx or PrecisionContext()
    check_fundamental(D)
    N = _as_integer_index(n)
    if N <= 0:
        raise ValueError(f"kappa(n) needs n > 0, got {N}; use kappa_constant for n = 0")
    diff = diff_set(N, D, norm_a)
    zero = KappaValue(Fraction(N), D, (), mpmath.mpf(0), diff)
    if len(diff) != 1 or diff.includes_infinity:
        return zero
    (p,) = diff.finite_primes
    chi = kronecker(D, p)
    assert chi != 1, f"Diff prime {p} splits in Q(sqrt({D}))"
    v = valuation(N, p)
    if chi == -1:
        X = (v + 1) * ideal_count(N // p, D) if v else 0
    else:
        X = v * ideal_count(N, D)
    if X == 0:
        return zero
    lam = lambda_completed_at_0(D)
    r = -Fraction(2 ** o_exponent(N, D) * X) / lam
    terms = ((r, p),)
    return KappaValue(Fraction(N), D, terms, _log_combination(terms, ctx), diff)


def lambda_completed_at_0(D: int) -> Fraction:
    """Lambda(chi_D, 0) = 2 h_D / w_D, exactly."""
    G = class_group(D)
    return Fraction(2 * G.h, G.w)


def _chi_terms(D: int):
    m = -D
    return [(a, kronecker(D, a)) for a in range(1, m) if kronecker(D, a)]


def l_value_at_0(D: int, ctx: PrecisionContext | None = None):
    """L(chi_D, 0) = sum_a chi(a) zeta(0, a/|D|)."""
    ctx = ctx or PrecisionContext()
    check_fundamental(D)
    m = -D
    with ctx.workprec():
        return sum(c * mpmath.zeta(0, mpmath.mpf(a) / m) for a, c in _chi_terms(D))


def l_derivative_at_0(D: int, ctx: PrecisionContext | None = None):
    """L'(chi_D, 0) from L(s) = |D|^-s sum_a chi(a) zeta(s, a/|D|)."""
    ctx = ctx or PrecisionContext()
    check_fundamental(D)
    m = -D
    with ctx.workprec():
        s0 = mpmath.mpf(0)
        s1 = mpmath.mpf(0)
        for a, c in _chi_terms(D):
            x = mpmath.mpf(a) / m
            s0 += c * mpmath.zeta(0, x)
            s1 += c * mpmath.zeta(0, x, 1)
        return -mpmath.log(m) * s0 + s1


def log_derivative_lambda_at_0(D: int, ctx: PrecisionContext | None = None):
    """Lambda'/Lambda at s = 0 for Lambda(s) = (|D|/pi)^{s/2} Gamma((s+1)/2) L(chi_D, s)."""
    ctx = ctx or PrecisionContext()
    with ctx.workprec():
        psi_half = -mpmath.euler - 2 * mpmath.log(2)
        ratio = l_derivative_at_0(D, ctx) / l_value_at_0(D, ctx)
        return (mpmath.log(-D) - mpmath.log(mpmath.pi) + psi_half) / 2 + ratio


def kappa_constant(D: int, ctx: PrecisionContext | None = None):
    """kappa(0) = -2 Lambda'(chi_D, 0) / Lambda(chi_D, 0)."""
    ctx = ctx or PrecisionContext()
    with ctx.workprec():
        return -2 * log_derivative_lambda_at_0(D, ctx)


def kappa_zero_value(D: int, ctx: PrecisionContext | None = None) -> KappaValue:
    ctx = ctx or PrecisionContext()
    return KappaValue(Fraction(0), D, (), kappa_constant(D, ctx), None, special="-2 Lambda'/Lambda(0)")
