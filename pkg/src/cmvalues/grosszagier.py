"""Singular moduli: Psi(z, d) = prod_Q (j(z) - j(alpha_Q))^{4/w_d}, its CM
values, and the Gross-Zagier factorization of the norm over Cl(D)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .arith import check_fundamental, divisors, factorize, kronecker, roots_of_unity
from .precision import PrecisionContext
from .qforms import BinaryQuadraticForm, class_group, cm_point, reduce
from .qseries import j_invariant


class CMCollisionError(ArithmeticError):
    """z coincides (to working precision) with a CM point of discriminant d."""


@dataclass(frozen=True)
class GZFactorization:
    factors: tuple  # ((p, e), ...) sorted by p, all e != 0
    value: int

    def to_json(self) -> dict:
        return {"factors": [list(pe) for pe in self.factors], "value": self.value}


@dataclass(frozen=True)
class RecognizedInteger:
    numeric: mpmath.mpf
    rounded: int
    residual: mpmath.mpf
    tolerance: mpmath.mpf
    confirmed: bool  # same integer at doubled precision
    bits: int

    @property
    def ok(self) -> bool:
        return self.residual < self.tolerance and self.confirmed


def _check_pair(D: int, d: int) -> None:
    check_fundamental(D)
    check_fundamental(d)
    if math.gcd(D, d) != 1:
        raise ValueError(f"D={D} and d={d} must be coprime")


def _magnitude_bits(*discs) -> int:
    # |j(alpha)| <= e^{pi sqrt|d|} + 744 + O(1); bits lost to cancellation
    return int(math.pi * math.sqrt(max(abs(x) for x in discs)) / math.log(2)) + 16


@lru_cache(maxsize=512)
def _j_values(d: int, bits: int) -> tuple:
    ctx = PrecisionContext(bits)
    with ctx.workprec():
        return tuple(j_invariant(cm_point(f, ctx).alpha, ctx) for f in class_group(d).classes)


def singular_moduli(d: int, ctx: PrecisionContext | None = None) -> tuple:
    """j(alpha_Q) for the reduced forms Q of discriminant d, in class order."""
    ctx = ctx or PrecisionContext()
    check_fundamental(d)
    return _j_values(d, ctx.bits)


def psi_value(z, d: int, ctx: PrecisionContext | None = None):
    """Psi(z, d), principal branch of the power 4/w_d."""
    ctx = ctx or PrecisionContext()
    check_fundamental(d)
    extra = _magnitude_bits(d)
    lifted = ctx.with_bits(ctx.bits + extra)
    with lifted.workprec():
        jz = j_invariant(z, lifted)
        prod = mpmath.mpc(1)
        tol = mpmath.ldexp(1, -ctx.bits // 2) * max(1, abs(jz))
        for jq in singular_moduli(d, lifted):
            diff = jz - jq
            if abs(diff) < tol:
                raise CMCollisionError(f"z is a CM point of discriminant {d}: Psi has a zero")
            prod *= diff
        val = prod ** (mpmath.mpf(4) / roots_of_unity(d))
    with ctx.workprec():
        return +val


def log_abs_psi(Q: BinaryQuadraticForm, d: int, ctx: PrecisionContext | None = None):
    """log |Psi(alpha_Q, d)|, computed in the log domain."""
    ctx = ctx or PrecisionContext()
    D = Q.discriminant
    _check_pair(D, d)
    extra = _magnitude_bits(D, d)
    lifted = ctx.with_bits(ctx.bits + extra)
    Q = reduce(Q)
    with lifted.workprec():
        jz = j_invariant(cm_point(Q, lifted).alpha, lifted)
        s = mpmath.mpf(0)
        for jq in singular_moduli(d, lifted):
            diff = jz - jq
            if diff == 0:
                raise CMCollisionError(f"alpha_Q is a CM point of discriminant {d}")
            s += mpmath.log(abs(diff))
        val = s * 4 / roots_of_unity(d)
    with ctx.workprec():
        return +val


def epsilon(ell: int, d: int, D: int) -> int:
    """epsilon(l) = (D/l) if l does not divide D, else (d/l).

    For l dividing neither d nor D both symbols are defined; they agree whenever l
    can divide some n' with 4nn' = dD - x^2, and a ValueError is raised otherwise.
    """
    if math.gcd(d, D) != 1:
        raise ValueError(f"epsilon needs coprime discriminants, got d={d}, D={D}")
    if D % ell == 0:
        return kronecker(d, ell)
    val = kronecker(D, ell)
    if d % ell and kronecker(d, ell) != val:
        raise ValueError(f"l={ell} is not admissible for (d, D)=({d}, {D}): (dD/l) = -1")
    return val


def epsilon_n(n: int, d: int, D: int) -> int:
    r = 1
    for ell, e in factorize(n):
        r *= epsilon(ell, d, D) ** e
    return r


def gz_rhs_factorization(D: int, d: int) -> GZFactorization:
    """prod over x, 4nn' = dD - x^2, of n^{epsilon(n')}, as an exact factorization."""
    _check_pair(D, d)
    if D == d:
        raise ValueError("D and d must differ")
    dD = d * D
    exps: dict = {}
    x = dD % 2
    while x * x < dD:
        M = (dD - x * x) // 4
        mult = 1 if x == 0 else 2  # +x and -x
        for n in divisors(M):
            s = epsilon_n(M // n, d, D)
            for p, e in factorize(n):
                assert M % p == 0
                exps[p] = exps.get(p, 0) + mult * s * e
        x += 2
    factors = tuple((p, e) for p, e in sorted(exps.items()) if e)
    value = 1
    for p, e in factors:
        if e < 0:
            raise ArithmeticError(f"negative exponent {e} at p={p} in the Gross-Zagier norm")
        value *= p**e
    return GZFactorization(factors, value)


def log_norm_product(D: int, d: int, ctx: PrecisionContext | None = None):
    """(2/w_D) sum_Q log |Psi(alpha_Q, d)|."""
    ctx = ctx or PrecisionContext()
    _check_pair(D, d)
    G = class_group(D)
    with ctx.workprec():
        s = sum(log_abs_psi(f, d, ctx) for f in G.classes)
        return s * 2 / G.w


def _recognize_at(D, d, ctx):
    L = log_norm_product(D, d, ctx)
    # enough bits for the integer part plus the requested fractional accuracy
    mag = int(L / mpmath.log(2)) + 1 if L > 0 else 0
    lifted = ctx.with_bits(ctx.bits + mag)
    L = log_norm_product(D, d, lifted)
    with lifted.workprec():
        V = mpmath.exp(L)
        n = int(mpmath.nint(V))
        res = abs(V - n)
    return V, n, res, lifted.bits


def norm_product(D: int, d: int, ctx: PrecisionContext | None = None) -> RecognizedInteger:
    """|prod_Q Psi(alpha_Q, d)|^{2/w_D} with integer recognition.

    The integer is re-derived at doubled precision; a mismatch or a residual
    above 10^-guard_digits is reported through ``ok`` rather than rounded away.
    """
    ctx = ctx or PrecisionContext()
    V, n, res, bits = _recognize_at(D, d, ctx)
    _, n2, _, _ = _recognize_at(D, d, ctx.doubled())
    tol = mpmath.mpf(10) ** (-ctx.guard_digits)
    return RecognizedInteger(V, n, res, tol, n == n2, bits)
