"""Class group characters, the theta series theta_psi, and Petersson norms of
weight one theta series of prime level via CM values of eta.

The eta formula

    (theta_chi, theta_chi) = -(4 h / w^2) sum_Q psi(Q) log(sqrt(y_Q) |eta(alpha_Q)|^2),
    psi = chi^2,

is cross-checked by direct numerical integration over a fundamental domain
of Gamma0(p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from numpy.polynomial.legendre import leggauss

from .arith import DiscriminantError, check_fundamental, is_prime
from .cyclo import Cyclotomic
from .precision import PrecisionContext
from .qforms import BinaryQuadraticForm, FormClassGroup, class_group, cm_point, reduce
from .qseries import QExpansion, eta, theta_form


@dataclass(frozen=True)
class ClassCharacter:
    """psi(class i) = e(exponents[i]) with exact rational exponents in [0, 1)."""

    group: FormClassGroup
    exponents: tuple

    @property
    def order(self) -> int:
        o = 1
        for e in self.exponents:
            o = o * e.denominator // math.gcd(o, e.denominator)
        return o

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def value(self, i: int, n: int | None = None) -> Cyclotomic:
        """psi(class i) in Q(zeta_n), n defaulting to the character order."""
        n = n or self.order
        e = self.exponents[i]
        if (e * n).denominator != 1:
            raise ValueError(f"value e({e}) does not lie in Q(zeta_{n})")
        return Cyclotomic.zeta(n, int(e * n))

    def numeric(self, i: int):
        return mpmath.expjpi(2 * mpmath.mpf(self.exponents[i].numerator) / self.exponents[i].denominator)

    def __mul__(self, other: "ClassCharacter") -> "ClassCharacter":
        return ClassCharacter(self.group, tuple((a + b) % 1 for a, b in zip(self.exponents, other.exponents)))

    def conjugate(self) -> "ClassCharacter":
        return ClassCharacter(self.group, tuple((-a) % 1 for a in self.exponents))

    def square(self) -> "ClassCharacter":
        return self * self

    def to_json(self) -> dict:
        return {"order": self.order, "exponents": [str(e) for e in self.exponents]}


def characters(G: FormClassGroup) -> list:
    """All h characters of Cl(D), by extending characters one generator at a time."""
    e = G.identity
    chars = [{e: Fraction(0)}]
    H = [e]
    for g in range(G.h):
        if g in chars[0]:
            continue
        # smallest k with g^k in H
        k, gk = 1, g
        while gk not in chars[0]:
            gk = G.mul(gk, g)
            k += 1
        new = []
        for chi in chars:
            for j in range(k):
                cg = ((chi[gk] + j) / k) % 1
                ext = {}
                for h in H:
                    x = h
                    for i in range(k):
                        ext[x] = (chi[h] + i * cg) % 1
                        x = G.mul(x, g)
                new.append(ext)
        H = list(new[0].keys())
        chars = new
    out = [ClassCharacter(G, tuple(c[i] for i in range(G.h))) for c in chars]
    out.sort(key=lambda c: (c.order, c.exponents))
    return out


def theta_psi(G: FormClassGroup, psi: ClassCharacter, order: int) -> QExpansion:
    """(1/w) sum_classes psi(c) theta_c, exactly over Q(zeta_ord(psi))."""
    n = psi.order
    r = [theta_form(f, order).r for f in G.classes]
    coeffs = []
    vals = [psi.value(i, n) for i in range(G.h)]
    for k in range(order + 1):
        s = Cyclotomic.rational(n, 0)
        for i in range(G.h):
            if r[i][k]:
                s = s + vals[i] * r[i][k]
        coeffs.append(s / G.w)
    return QExpansion(0, tuple(coeffs))


def eta_cm_value(Q: BinaryQuadraticForm, ctx: PrecisionContext | None = None):
    """sqrt(y_Q) |eta(alpha_Q)|^2 at the reduced CM point of Q."""
    ctx = ctx or PrecisionContext()
    pt = cm_point(reduce(Q), ctx)
    with ctx.workprec():
        return mpmath.sqrt(pt.y) * abs(eta(pt.alpha, ctx)) ** 2


@dataclass(frozen=True)
class PeterssonValue:
    character: ClassCharacter
    numeric: mpmath.mpf
    imag_residual: mpmath.mpf
    terms: tuple  # (form, psi exponent, log eta value)

    def to_json(self) -> dict:
        return {
            "character": self.character.to_json(),
            "value": self.numeric,
            "imag_residual": self.imag_residual,
            "terms": [[f.to_json(), str(e), v] for f, e, v in self.terms],
        }


def check_prime_discriminant(D: int) -> int:
    check_fundamental(D)
    if D % 4 != 1 or not is_prime(-D):
        raise DiscriminantError(f"D={D}: a prime discriminant -p with p = 3 mod 4 is required")
    return D


def petersson_norm_eta(D: int, chi: ClassCharacter, ctx: PrecisionContext | None = None) -> PeterssonValue:
    ctx = ctx or PrecisionContext()
    check_prime_discriminant(D)
    G = chi.group
    if G.discriminant != D:
        raise ValueError(f"character belongs to Cl({G.discriminant}), not Cl({D})")
    psi = chi.square()
    if psi.is_trivial():
        raise ValueError("the eta formula needs chi^2 != 1")
    terms = []
    with ctx.workprec():
        s = mpmath.mpc(0)
        for i, f in enumerate(G.classes):
            lv = mpmath.log(eta_cm_value(f, ctx))
            s += psi.numeric(i) * lv
            terms.append((f, psi.exponents[i], lv))
        val = -4 * G.h * s / G.w**2
        re, im = mpmath.re(val), abs(mpmath.im(val))
    if im > mpmath.ldexp(1, -ctx.bits // 2):
        raise ArithmeticError(f"character sum is not real: imaginary part {mpmath.nstr(im, 5)}")
    if re <= 0:
        raise ArithmeticError(f"Petersson norm is not positive: {mpmath.nstr(re, 10)}")
    return PeterssonValue(chi, re, im, tuple(terms))


# ----------------------------------------------------------------------------
# quadrature oracle


def gamma0_coset_reps(p: int) -> list:
    """Right coset representatives of Gamma0(p) in SL2(Z): I and S T^k, 0 <= k < p."""
    if not is_prime(p):
        raise ValueError(f"level {p} must be prime")
    reps = [(1, 0, 0, 1)] + [(0, -1, 1, k) for k in range(p)]
    # distinct cosets: g_i g_j^{-1} never lies in Gamma0(p)
    for i, (a, b, c, d) in enumerate(reps):
        for a2, b2, c2, d2 in reps[i + 1:]:
            # lower-left entry of g_i g_j^{-1}, g_j^{-1} = (d2, -b2; -c2, a2)
            if (c * d2 - d * c2) % p == 0:
                raise AssertionError("coset representatives are not distinct")
    return reps


def _numeric_coefficients(f: QExpansion) -> np.ndarray:
    if f.leading_exponent < 0:
        raise ValueError("f has a pole at infinity")
    out = np.zeros(f.order, dtype=complex)
    for n in range(f.leading_exponent, f.order):
        c = f[n]
        if c != 0:
            out[n] = complex(c.to_mpc()) if hasattr(c, "to_mpc") else complex(c)
    return out


def _evaluate(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    q = np.exp(2j * np.pi * z)
    return np.polynomial.polynomial.polyval(q, coeffs)


def _domain_rule(n_u: int = 80, n_v: int = 40):
    """Nodes and weights (u, v, w) for integrals of h(u, v) du dv / v^2 over the
    standard fundamental domain, truncated 256 above the arc, plus the exact
    hyperbolic area of the cut-off cusp region."""
    xu, wu = leggauss(n_u)
    xv, wv = leggauss(n_v)
    us, vs, ws = [], [], []
    cusp_area = 0.0
    offsets = np.array([0, 0.5, 1, 2, 4, 8, 16, 32, 64, 128, 256])
    for uu, wwu in zip(xu / 2, wu / 2):
        v0 = math.sqrt(1 - uu * uu)
        cusp_area += wwu / (v0 + offsets[-1])
        for lo, hi in zip(v0 + offsets[:-1], v0 + offsets[1:]):
            vv = (hi - lo) / 2 * xv + (hi + lo) / 2
            us.append(np.full(n_v, uu))
            vs.append(vv)
            ws.append(wwu * wv * (hi - lo) / 2 / vv**2)
    return np.concatenate(us), np.concatenate(vs), np.concatenate(ws), cusp_area


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    area: float
    expected_area: float
    fricke_residual: float


def petersson_quadrature(f: QExpansion, D: int, ctx: PrecisionContext | None = None,
                         n_u: int = 80, n_v: int = 40) -> QuadratureResult:
    """(f, f) = int_{Gamma0(p) \\ H} |f|^2 v du dv / v^2 by Gauss-Legendre quadrature.

    The domain is tiled by F and S T^k F. On S T^k F the integrand is evaluated
    through g(S T^k z) = g((z + k)/p), valid for g = |f|^2 v when f is an
    eigenform of the Fricke involution up to a unimodular constant; this is
    checked at sample points before integrating. Double precision throughout.
    """
    p = -D
    check_prime_discriminant(D)
    reps = gamma0_coset_reps(p)
    if f.leading_exponent <= 0 and f[0] != 0:
        raise ValueError("f is not cuspidal: nonzero constant term at infinity")
    coeffs = _numeric_coefficients(f)
    # Truncation check at the lowest point ever visited, Im = sqrt(3)/(2p)
    vmin = math.sqrt(3) / (2 * p)
    tail = np.abs(coeffs[-20:]).max(initial=1.0) * math.exp(-2 * math.pi * vmin * len(coeffs))
    if tail > 1e-12:
        raise ValueError(f"q-expansion of length {len(coeffs)} is too short for level {p}")

    def g(z):
        return np.abs(_evaluate(coeffs, z)) ** 2 * z.imag

    # Fricke check g(-1/(p z)) = g(z), at points where both sides converge well
    theta = np.array([0.7, 1.3, 1.9, 2.4])
    sample = (0.9 + 0.1 * np.arange(4)) * np.exp(1j * theta) / math.sqrt(p)
    lhs, rhs = g(-1 / (p * sample)), g(sample)
    scale = max(np.abs(rhs).max(), 1e-300)
    fricke = float(np.abs(lhs - rhs).max() / scale)
    if fricke > 1e-8:
        raise ValueError("f is not Fricke-symmetric in absolute value; tiling shortcut invalid")

    u, v, w, cusp_area = _domain_rule(n_u, n_v)
    z = u + 1j * v
    tile_area = float(np.sum(w)) + cusp_area
    total = float(np.sum(w * g(z)))
    area = tile_area
    for _, _, _, k in reps[1:]:
        total += float(np.sum(w * g((z + k) / p)))
        area += tile_area
    return QuadratureResult(total, float(area), len(reps) * math.pi / 3, fricke)


def default_theta_order(p: int) -> int:
    """Expansion length adequate for petersson_quadrature at level p."""
    return int(40 * p / (math.pi * math.sqrt(3))) + 60


def cusp_characters(D: int) -> list:
    """Characters chi of Cl(D) with chi^2 != 1."""
    return [c for c in characters(class_group(D)) if not c.square().is_trivial()]
