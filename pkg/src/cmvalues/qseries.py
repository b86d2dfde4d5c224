"""Classical q-series at high precision (eta, Delta, E4, E6, j) and exact
integer expansions (theta series of binary forms, Eisenstein series, eta
products)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .precision import PrecisionContext
from .qforms import BinaryQuadraticForm

__all__ = [
    "PrecisionContext",
    "QExpansion",
    "ThetaExpansion",
    "delta",
    "eisenstein_series",
    "eisenstein_value",
    "eta",
    "eta_product",
    "j_invariant",
    "reduce_to_fundamental_domain",
    "theta_form",
]


# ----------------------------------------------------------------------------
# exact expansions


@dataclass(frozen=True)
class QExpansion:
    """Truncated Laurent series sum_{n >= n0} c(n) q^n, known for n < n0 + len(c).

    Coefficients may be ints, Fractions, or any ring elements supporting + and *
    with ints (e.g. cyclotomic numbers).
    """

    leading_exponent: int
    coefficients: tuple

    @property
    def order(self) -> int:
        """First exponent that is NOT known."""
        return self.leading_exponent + len(self.coefficients)

    def __getitem__(self, n: int):
        if n < self.leading_exponent:
            return 0
        if n >= self.order:
            raise IndexError(f"coefficient q^{n} is beyond the truncation order {self.order}")
        return self.coefficients[n - self.leading_exponent]

    def truncate(self, order: int) -> "QExpansion":
        k = max(0, order - self.leading_exponent)
        return QExpansion(self.leading_exponent, self.coefficients[:k])

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        lo = min(self.leading_exponent, other.leading_exponent)
        hi = min(self.order, other.order)
        return QExpansion(lo, tuple(self[n] + other[n] for n in range(lo, hi)))

    def __neg__(self):
        return QExpansion(self.leading_exponent, tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "QExpansion":
        return QExpansion(self.leading_exponent, tuple(s * c for c in self.coefficients))

    def __mul__(self, other):
        if not isinstance(other, QExpansion):
            return self.scale(other)
        lo = self.leading_exponent + other.leading_exponent
        # relative precision is the smaller of the two
        length = min(len(self.coefficients), len(other.coefficients))
        out = [0] * length
        a, b = self.coefficients, other.coefficients
        for i in range(length):
            if a[i] == 0:
                continue
            for j in range(length - i):
                if b[j] != 0:
                    out[i + j] = out[i + j] + a[i] * b[j]
        return QExpansion(lo, tuple(out))

    __rmul__ = scale

    def evaluate(self, tau, ctx: PrecisionContext | None = None):
        """Numeric value of the truncated series at tau (no tail estimate)."""
        ctx = ctx or PrecisionContext()
        with ctx.workprec():
            q = mpmath.expjpi(2 * mpmath.mpmathify(tau))
            total = mpmath.mpc(0)
            qn = q ** self.leading_exponent
            for c in self.coefficients:
                if c != 0:
                    total += _numeric(c) * qn
                qn *= q
            return total

    def to_json(self) -> dict:
        return {
            "leading_exponent": self.leading_exponent,
            "coefficients": [_coeff_json(c) for c in self.coefficients],
        }


def _numeric(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    if hasattr(c, "to_mpc"):
        return c.to_mpc()
    return mpmath.mpmathify(c)


def _coeff_json(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return str(c)
    if hasattr(c, "to_json"):
        return c.to_json()
    return str(c)


@dataclass(frozen=True)
class ThetaExpansion:
    """theta_Q = sum_{x,y} q^{Q(x,y)}; r[n] = #{(x,y) : Q(x,y) = n}, r[0] = 1."""

    form: BinaryQuadraticForm
    r: tuple

    @property
    def order(self) -> int:
        return len(self.r) - 1

    def as_qexpansion(self) -> QExpansion:
        return QExpansion(0, self.r)

    def to_json(self) -> dict:
        return {"form": self.form.to_json(), "r": list(self.r)}


def theta_form(f: BinaryQuadraticForm, order: int) -> ThetaExpansion:
    """Representation numbers r_f(n), 0 <= n <= order, by lattice-point enumeration."""
    if not f.is_positive_definite():
        raise ValueError(f"{f} is not positive definite")
    if order < 0:
        raise ValueError("order must be >= 0")
    a, b, c = f.a, f.b, f.c
    D = -f.discriminant
    r = [0] * (order + 1)
    # 4a Q(x,y) = (2ax + by)^2 + D y^2, so D y^2 <= 4a*order
    ymax = math.isqrt(4 * a * order // D)
    for y in range(-ymax, ymax + 1):
        rest = 4 * a * order - D * y * y
        s = math.isqrt(rest)
        # -s <= 2ax + by <= s
        xlo = -((s + b * y) // (2 * a)) - 1
        xhi = (s - b * y) // (2 * a) + 1
        for x in range(xlo, xhi + 1):
            n = a * x * x + b * x * y + c * y * y
            if n <= order:
                r[n] += 1
    return ThetaExpansion(f, tuple(r))


def _sigma(k: int, order: int) -> list:
    s = [0] * (order + 1)
    for d in range(1, order + 1):
        dk = d**k
        for m in range(d, order + 1, d):
            s[m] += dk
    return s


def eisenstein_series(which: str, order: int) -> QExpansion:
    """E4 = 1 + 240 sum sigma_3(n) q^n or E6 = 1 - 504 sum sigma_5(n) q^n, exactly to q^order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    which = which.upper()
    if which == "E4":
        k, scale = 3, 240
    elif which == "E6":
        k, scale = 5, -504
    else:
        raise ValueError(f"unknown Eisenstein series {which!r}; expected E4 or E6")
    s = _sigma(k, order)
    return QExpansion(0, tuple([1] + [scale * s[n] for n in range(1, order + 1)]))


def _pentagonal(order: int) -> list:
    """Coefficients of prod (1 - q^n) up to q^order."""
    c = [0] * (order + 1)
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e <= order:
                c[e] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return c


def eta_product(levels, order: int) -> QExpansion:
    """prod_m eta(m tau) as an exact integer q-expansion, to q^order.

    sum(levels) must be divisible by 24 so the expansion is integral.
    """
    levels = list(levels)
    total = sum(levels)
    if total % 24:
        raise ValueError(f"sum of levels {total} is not divisible by 24")
    lead = total // 24
    length = max(0, order - lead + 1)
    out = QExpansion(0, tuple([1] + [0] * (length - 1))) if length else QExpansion(0, ())
    base = _pentagonal(length)
    for m in levels:
        c = [0] * length
        for e, v in enumerate(base):
            if v and e * m < length:
                c[e * m] = v
        out = out * QExpansion(0, tuple(c))
    return QExpansion(lead, out.coefficients)


# ----------------------------------------------------------------------------
# analytic evaluation


def _check_upper(tau):
    if mpmath.im(tau) <= 0:
        raise ValueError(f"tau must lie in the upper half-plane, got {tau}")


def reduce_to_fundamental_domain(tau, max_steps: int = 10_000):
    """Return (tau', (a,b,c,d)) with tau' = (a tau + b)/(c tau + d) in the standard domain."""
    tau = mpmath.mpmathify(tau)
    _check_upper(tau)
    a, b, c, d = 1, 0, 0, 1
    for _ in range(max_steps):
        n = int(mpmath.nint(mpmath.re(tau)))
        if n:
            tau -= n
            a, b = a - n * c, b - n * d
        if abs(tau) < 1:
            tau = -1 / tau
            a, b, c, d = -c, -d, a, b
        else:
            return tau, (a, b, c, d)
    raise RuntimeError("fundamental-domain reduction did not terminate")


def _terms_needed(absq, bits: int, growth: int = 0) -> int:
    """Smallest N with N^growth |q|^N / (1 - |q|) below 2^-bits (crude geometric bound)."""
    lq = -float(mpmath.log(absq, 2))
    if lq <= 0:
        raise ValueError("|q| must be < 1")
    n = max(1, int(bits / lq) + 1)
    while growth * math.log2(n) - n * lq - math.log2(1 - 2.0**-lq) > -bits:
        n += 1
    return n


def _pentagonal_sum(q, bits: int):
    """sum_k (-1)^k q^{k(3k-1)/2} until terms drop below 2^-bits."""
    absq = abs(q)
    total = mpmath.mpf(1)
    k = 1
    lq = -float(mpmath.log(absq, 2))
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 * lq > bits + 8:
            break
        sgn = -1 if k % 2 else 1
        total += sgn * (q**e1 + q ** (e1 + k))
        k += 1
    return total


def eta(tau, ctx: PrecisionContext | None = None):
    """Dedekind eta(tau) = q^{1/24} prod (1 - q^n)."""
    ctx = ctx or PrecisionContext()
    with ctx.workprec():
        tau = mpmath.mpmathify(tau)
        _check_upper(tau)
        mult = mpmath.mpc(1)
        for _ in range(10_000):
            n = int(mpmath.nint(mpmath.re(tau)))
            if n:
                tau -= n
                mult *= mpmath.expjpi(mpmath.mpf(n) / 12)
            if abs(tau) < 1:
                mult /= mpmath.sqrt(-1j * tau)
                tau = -1 / tau
            else:
                break
        q = mpmath.expjpi(2 * tau)
        val = mult * mpmath.expjpi(tau / 12) * _pentagonal_sum(q, ctx.working_bits)
    return +val


def _series_sum(coeff, q, n_terms):
    total = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    for n in range(n_terms + 1):
        c = coeff[n]
        if c:
            total += c * qn
        qn *= q
    return total


def eisenstein_value(which: str, tau, ctx: PrecisionContext | None = None):
    """E4(tau) or E6(tau) by direct summation with a tail-bound truncation.

    No reduction is applied: E4 and E6 are not invariant, so tau is used as given.
    """
    ctx = ctx or PrecisionContext()
    with ctx.workprec():
        tau = mpmath.mpmathify(tau)
        _check_upper(tau)
        q = mpmath.expjpi(2 * tau)
        growth = 4 if which.upper() == "E4" else 6
        n = _terms_needed(abs(q), ctx.working_bits + 12, growth)
        n = max(n, ctx.q_order or 0)
        coeff = eisenstein_series(which, n).coefficients
        return _series_sum(coeff, q, n)


def delta(tau, ctx: PrecisionContext | None = None):
    """Discriminant function Delta = eta^24."""
    ctx = ctx or PrecisionContext()
    with ctx.workprec():
        return eta(tau, ctx) ** 24


def j_invariant(tau, ctx: PrecisionContext | None = None):
    """j(tau) = E4^3 / eta^24, evaluated at the reduced point."""
    ctx = ctx or PrecisionContext()
    with ctx.workprec():
        tau, _ = reduce_to_fundamental_domain(tau)
        q = mpmath.expjpi(2 * tau)
        e4 = eisenstein_value("E4", tau, ctx)
        d = q * _pentagonal_sum(q, ctx.working_bits) ** 24
        return e4**3 / d
