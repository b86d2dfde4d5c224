"""Finite quadratic modules and the Weil representation rho(T), rho(S).

    rho(T) phi_mu = e(q(mu)) phi_mu
    rho(S) phi_mu = e(-sgn/8) / sqrt|A| * sum_nu e(-(mu, nu)) phi_nu

Matrices are dense over arbitrary-precision complex balls (python-flint acb_mat).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import flint
import mpmath

from .arith import check_odd_fundamental
from .precision import PrecisionContext


@dataclass(frozen=True)
class FiniteQuadraticModule:
    """Orthogonal sum of cyclic modules Z/n_i with q(x) = sum c_i x_i^2 mod 1."""

    orders: tuple
    coeffs: tuple  # Fractions c_i
    sgn: int = 0  # signature used in the S-matrix prefactor, recorded not inferred
    _elements: list = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.orders) != len(self.coeffs):
            raise ValueError("orders and coeffs must have the same length")
        for n, c in zip(self.orders, self.coeffs):
            c = Fraction(c)
            # q(x + n) = q(x) mod 1 for all x
            if (c * (2 * n)).denominator != 1 or (c * n * n).denominator != 1:
                raise ValueError(f"q = {c} x^2 is not well defined on Z/{n}")
        object.__setattr__(self, "_elements", list(itertools.product(*(range(n) for n in self.orders))))

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def level(self) -> int:
        L = 1
        for c in self.coeffs:
            L = math.lcm(L, Fraction(c).denominator)
        return L

    @property
    def elements(self) -> list:
        return self._elements

    def index(self, x) -> int:
        i = 0
        for xi, n in zip(x, self.orders):
            i = i * n + xi % n
        return i

    def q(self, x) -> Fraction:
        return sum((Fraction(c) * xi * xi for c, xi in zip(self.coeffs, x)), Fraction(0)) % 1

    def bilinear(self, x, y) -> Fraction:
        return sum((2 * Fraction(c) * a * b for c, a, b in zip(self.coeffs, x, y)), Fraction(0)) % 1

    def neg(self, x) -> tuple:
        return tuple((-xi) % n for xi, n in zip(x, self.orders))

    def is_nondegenerate(self) -> bool:
        # for a diagonal module, each cyclic piece must pair perfectly with itself
        return all((2 * Fraction(c)).denominator == n for n, c in zip(self.orders, self.coeffs))

    def gauss_sum(self, ctx: PrecisionContext | None = None):
        """sum_x e(q(x)), as a product over the cyclic components."""
        ctx = ctx or PrecisionContext()
        with ctx.workprec():
            total = mpmath.mpc(1)
            for n, c in zip(self.orders, self.coeffs):
                c = Fraction(c)
                total *= mpmath.fsum(mpmath.expjpi(2 * _frac_mpf((c * x * x) % 1)) for x in range(n))
            return total

    def signature_mod_8(self, ctx: PrecisionContext | None = None) -> tuple:
        """(signature mod 8, residual) from the Milgram formula."""
        ctx = ctx or PrecisionContext()
        with ctx.workprec():
            g = self.gauss_sum(ctx) / mpmath.sqrt(self.size)
            k = int(mpmath.nint(8 * mpmath.arg(g) / (2 * mpmath.pi))) % 8
            res = abs(g - mpmath.expjpi(mpmath.mpf(k) / 4))
        return k, res


def _frac_mpf(r: Fraction):
    return mpmath.mpf(r.numerator) / r.denominator


def fqm_for_gz(D: int) -> FiniteQuadraticModule:
    """Z/|D| + Z/2|D| with q(x, y) = x^2/|D| - y^2/(4|D|), sgn = 1."""
    check_odd_fundamental(D)
    m = -D
    return FiniteQuadraticModule((m, 2 * m), (Fraction(1, m), Fraction(-1, 4 * m)), sgn=1)


@dataclass
class WeilMatrices:
    module: FiniteQuadraticModule
    sgn: int
    rho_T: flint.acb_mat
    rho_S: flint.acb_mat
    prec: int


class _flint_prec:
    def __init__(self, bits):
        self.bits = bits

    def __enter__(self):
        self.old = flint.ctx.prec
        flint.ctx.prec = self.bits

    def __exit__(self, *exc):
        flint.ctx.prec = self.old


def _epi(num: int, den: int):
    """exp(pi i num/den) as an acb."""
    x = flint.arb(flint.fmpq(num, den))
    return flint.acb(x.cos_pi(), x.sin_pi())


def weil_matrices(A: FiniteQuadraticModule, sgn: int | None = None,
                  ctx: PrecisionContext | None = None) -> WeilMatrices:
    ctx = ctx or PrecisionContext()
    sgn = A.sgn if sgn is None else sgn
    if not A.is_nondegenerate():
        raise ValueError("the Weil representation needs a nondegenerate module")
    L = A.level
    els = A.elements
    N = len(els)
    prec = ctx.working_bits
    with _flint_prec(prec):
        e = [_epi(2 * k, L) for k in range(L)]
        pref = _epi(-sgn, 4) / flint.arb(N).sqrt()
        T = flint.acb_mat(N, N)
        for i, x in enumerate(els):
            T[i, i] = e[int(A.q(x) * L)]
        # (x, y) * L as integers, built per component and summed
        comp = []
        for n, c in zip(A.orders, A.coeffs):
            t = 2 * Fraction(c) * L
            assert t.denominator == 1
            comp.append(int(t))
        S = flint.acb_mat(N, N)
        for i, x in enumerate(els):
            for j, y in enumerate(els):
                k = sum(ci * a * b for ci, a, b in zip(comp, x, y))
                S[i, j] = pref * e[(-k) % L]
    return WeilMatrices(A, sgn, T, S, prec)


def _max_abs(M: flint.acb_mat) -> mpmath.mpf:
    """Largest upper bound |z| over the entries (ball radius included)."""
    best = max((float(z.abs_upper()) for z in M.entries()), default=0.0)
    return mpmath.mpf(best)


def _identity(N):
    I = flint.acb_mat(N, N)
    for i in range(N):
        I[i, i] = 1
    return I


def _conj_transpose(M):
    return M.transpose().conjugate()


@dataclass
class WeilReport:
    size: int
    sgn: int
    signature_mod_8: int
    milgram_residual: mpmath.mpf
    unitarity_T: mpmath.mpf
    unitarity_S: mpmath.mpf
    braid: mpmath.mpf
    s_squared: mpmath.mpf
    s_squared_phase: str
    tolerance: mpmath.mpf

    @property
    def max_residual(self):
        return max(self.unitarity_T, self.unitarity_S, self.braid, self.s_squared, self.milgram_residual)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance and self.signature_mod_8 == self.sgn % 8

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in (
            "size", "sgn", "signature_mod_8", "milgram_residual", "unitarity_T",
            "unitarity_S", "braid", "s_squared", "s_squared_phase", "tolerance")}


def verify_relations(W: WeilMatrices, ctx: PrecisionContext | None = None) -> WeilReport:
    """Unitarity, (S T)^3 = S^2, and S^2 phi_mu = e(-sgn/4) phi_{-mu}.

    The measured phase of S^2 (the coefficient c in S^2 = c * negation) is
    recorded as a fraction of a full turn.
    """
    ctx = ctx or PrecisionContext()
    A = W.module
    N = A.size
    sig, milgram = A.signature_mod_8(ctx)
    with _flint_prec(W.prec):
        I = _identity(N)
        S, T = W.rho_S, W.rho_T
        # T is diagonal by construction, so T T^* - I is diagonal too
        uT = mpmath.mpf(max(float((T[i, i] * T[i, i].conjugate() - 1).abs_upper()) for i in range(N)))
        uS = _max_abs(S * _conj_transpose(S) - I)
        ST = flint.acb_mat(N, N)
        for i in range(N):
            for j in range(N):
                ST[i, j] = S[i, j] * T[j, j]
        ST2 = ST * ST
        S2 = S * S
        braid = _max_abs(ST2 * ST - S2)
        Z = flint.acb_mat(N, N)
        c = _epi(-W.sgn, 2)
        for i, x in enumerate(A.elements):
            Z[A.index(A.neg(x)), i] = c
        s2 = _max_abs(S2 - Z)
        measured = S2[0, 0]
        turn = measured.arg() / (2 * flint.arb.pi())
    phase = mpmath.mpf(turn.mid().str(30, radius=False))
    tol = mpmath.ldexp(mpmath.mpf(1), -ctx.bits + 20)
    return WeilReport(N, W.sgn, sig, milgram, uT, uS, braid, s2, mpmath.nstr(phase, 20), tol)


def scalar_coset_map(D: int, y: int) -> tuple:
    """Element y * (t, 1) of Z/|D| + Z/2|D| with 2t = 1 mod |D|.

    q of the image is y^2/4 mod 1, matching the scalar index bookkeeping.
    """
    check_odd_fundamental(D)
    m = -D
    t = (m + 1) // 2
    return ((y * t) % m, y % (2 * m))
