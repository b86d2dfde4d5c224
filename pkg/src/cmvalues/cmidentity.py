"""Verification of the CM-value identity

    log |Psi(alpha_Q, d)| = -1/4 sum_{m = d mod 2} delta(m) c+((Dd - m^2)/4)

individually (h_D = 1, where c+ = kappa) and averaged over the class group,
where the Siegel-Weil formula replaces sum_Q c+_{Q^2} by h_D kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

from .arith import check_fundamental, check_odd_fundamental, sturm_condition
from .eiskappa import kappa, kappa_constant
from .grosszagier import log_abs_psi
from .precision import PrecisionContext
from .qforms import class_group, principal_form


class CoefficientWindowError(KeyError):
    """A coefficient index outside both the stored window and the zero policy."""


@dataclass
class CoefficientTable:
    """c+(n) for n_min <= n <= n_max; indices n < zero_below are declared zero."""

    values: dict
    n_min: int
    n_max: int
    zero_below: int
    provenance: str = "user-supplied"

    def __getitem__(self, n: int):
        if n < self.zero_below:
            return mpmath.mpf(0)
        if self.n_min <= n <= self.n_max and n in self.values:
            return self.values[n]
        raise CoefficientWindowError(
            f"coefficient c+({n}) is not in the table window [{self.n_min}, {self.n_max}] "
            f"and n >= zero cutoff {self.zero_below}"
        )


@dataclass
class IdentityTerm:
    m: int
    n: int
    delta: int
    coefficient: mpmath.mpf


@dataclass
class IdentityReport:
    D: int
    d: int
    mode: str
    lhs: mpmath.mpf
    rhs: mpmath.mpf
    abs_error: mpmath.mpf
    tolerance: mpmath.mpf
    precision_bits: int
    terms: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.abs_error < self.tolerance


def delta_weight(m: int, D: int) -> int:
    return 2 if m % D == 0 else 1


def index_range(D: int, d: int, zero_below: int = 1):
    """(m, n) with m = d mod 2, n = (Dd - m^2)/4 >= zero_below, m >= 0.

    Negative m are implied by symmetry and counted by the caller.
    """
    Dd = D * d
    out = []
    m = d % 2
    while 4 * zero_below <= Dd - m * m:
        out.append((m, (Dd - m * m) // 4))
        m += 2
    return out


def coefficient_terms(table: CoefficientTable, D: int, d: int) -> list:
    """Itemized nonvanishing-window terms of the coefficient sum, m over all of Z."""
    if math.gcd(D, d) != 1:
        raise ValueError(f"D={D} and d={d} must be coprime")
    if (D * d) % 4 not in (0, 1):
        raise ValueError("Dd must be a discriminant")
    terms = []
    for m, n in index_range(D, d, table.zero_below):
        assert (m - d) % 2 == 0
        c = table[n]
        for mm in ((m, -m) if m else (0,)):
            terms.append(IdentityTerm(mm, n, delta_weight(mm, D), c))
    return terms


def coefficient_sum(table: CoefficientTable, D: int, d: int, terms=None):
    """-1/4 sum_{m = d mod 2} delta(m) c+((Dd - m^2)/4)."""
    if terms is None:
        terms = coefficient_terms(table, D, d)
    s = mpmath.mpf(0)
    for t in terms:
        s += t.delta * t.coefficient
    return -s / 4


def eisenstein_table(D: int, n_max: int, ctx: PrecisionContext | None = None,
                     n_min: int = 0) -> CoefficientTable:
    """c+(n) = kappa(n) for n_min <= n <= n_max (kappa(0) at n = 0), zero for n < 0."""
    ctx = ctx or PrecisionContext()
    check_fundamental(D)
    vals = {}
    for n in range(max(n_min, 0), n_max + 1):
        vals[n] = kappa_constant(D, ctx) if n == 0 else kappa(n, D, ctx=ctx).numeric
    return CoefficientTable(vals, n_min, n_max, 0, "eisenstein-kappa")


def _tolerance(ctx: PrecisionContext):
    return mpmath.ldexp(mpmath.mpf(1), -ctx.bits // 3)


def _needed_table(D: int, d: int, ctx):
    ns = [n for _, n in index_range(D, d, 0)]
    if not ns:
        return CoefficientTable({}, 0, -1, 0, "eisenstein-kappa")
    # sparse: only the indices the sum touches
    vals = {}
    for n in ns:
        vals[n] = kappa_constant(D, ctx) if n == 0 else kappa(n, D, ctx=ctx).numeric
    return CoefficientTable(vals, min(ns), max(ns), 0, "eisenstein-kappa")


def verify_individual(D: int, d: int, ctx: PrecisionContext | None = None) -> IdentityReport:
    """Identity for the principal form when h_D = 1 (theta_Q is then the Eisenstein series)."""
    ctx = ctx or PrecisionContext()
    check_odd_fundamental(D)
    G = class_group(D)
    check_fundamental(d)
    if G.h != 1:
        raise ValueError(f"D={D}: the individual identity needs class number 1, h={G.h}")
    if D == d:
        raise ValueError("D and d must differ")
    with ctx.workprec():
        lhs = log_abs_psi(principal_form(D), d, ctx)
        table = _needed_table(D, d, ctx)
        terms = coefficient_terms(table, D, d)
        rhs = coefficient_sum(table, D, d, terms)
        err = abs(lhs - rhs)
    return IdentityReport(D, d, "individual", lhs, rhs, err, _tolerance(ctx), ctx.bits, terms)


def verify_averaged(D: int, d: int, ctx: PrecisionContext | None = None) -> IdentityReport:
    """sum_Q log|Psi(alpha_Q, d)| = h_D * coefficient_sum(kappa table)."""
    ctx = ctx or PrecisionContext()
    check_odd_fundamental(D)
    G = class_group(D)
    check_fundamental(d)
    if D == d:
        raise ValueError("D and d must differ")
    with ctx.workprec():
        lhs = sum(log_abs_psi(f, d, ctx) for f in G.classes)
        table = _needed_table(D, d, ctx)
        terms = coefficient_terms(table, D, d)
        rhs = G.h * coefficient_sum(table, D, d, terms)
        err = abs(lhs - rhs)
    return IdentityReport(D, d, "averaged", lhs, rhs, err, _tolerance(ctx), ctx.bits, terms)


def sturm_check(D: int) -> bool:
    return sturm_condition(D)
