"""Computation of acceptance criteria 1-8, shared by tests/test_acceptance.py
and runnable directly: python tests/acceptance_core.py."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath

from cmvalues.arith import factorize, is_fundamental
from cmvalues.cmidentity import verify_averaged, verify_individual
from cmvalues.eiskappa import l_value_at_0, lambda_completed_at_0
from cmvalues.grosszagier import gz_rhs_factorization, norm_product
from cmvalues.petersson import (
    cusp_characters,
    default_theta_order,
    petersson_norm_eta,
    petersson_quadrature,
    theta_psi,
)
from cmvalues.precision import PrecisionContext
from cmvalues.qforms import class_group
from cmvalues.qseries import eta_product, theta_form
from cmvalues.weilrep import fqm_for_gz, verify_relations, weil_matrices
from cmvalues.arith import ideal_count

BITS = 300


@dataclass
class CriterionResult:
    number: int
    flags: dict  # item -> bool
    residuals: dict = field(default_factory=dict)  # item -> mpf, precision governed
    notes: dict = field(default_factory=dict)  # item -> float, reported only
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def summary(self) -> str:
        bad = [k for k, v in self.flags.items() if not v]
        worst = max(self.residuals.values(), default=None)
        tail = f", worst residual {mpmath.nstr(worst, 3)}" if worst is not None else ""
        head = "PASS" if not bad else f"FAIL ({len(bad)} failing: {bad[:4]})"
        return f"criterion {self.number}: {head} [{len(self.flags)} checks{tail}, {self.seconds:.0f}s]"


def _coprime_pairs(Ds, ds):
    return [(D, d) for D in Ds for d in ds if d != D and math.gcd(D, d) == 1]


def criterion_1(bits):
    ctx = PrecisionContext(bits)
    flags, res = {}, {}
    Ds = [-3, -4, -7, -8, -11, -19, -43, -67, -163]
    ds = [-3, -4, -7, -8, -11, -15, -20]
    for D, d in _coprime_pairs(Ds, ds):
        r = norm_product(D, d, ctx)
        fac = gz_rhs_factorization(D, d)
        ok = r.ok and r.residual < mpmath.mpf(10) ** -20 and factorize(r.rounded) == fac.factors
        flags[(D, d)] = bool(ok)
        res[(D, d)] = r.residual
    flags["spot (-7,-3) = 225"] = gz_rhs_factorization(-7, -3).value == 225
    return flags, res, {}


def criterion_2(bits):
    ctx = PrecisionContext(bits)
    flags, res = {}, {}
    tol = mpmath.ldexp(1, -100)
    for D, d in _coprime_pairs([-7, -11, -19, -43, -67, -163], [-3, -4, -8, -20]):
        r = verify_individual(D, d, ctx)
        flags[(D, d)] = bool(r.abs_error < tol)
        res[(D, d)] = r.abs_error
    return flags, res, {}


def criterion_3(bits):
    ctx = PrecisionContext(bits)
    flags, res = {}, {}
    tol = mpmath.ldexp(1, -80)
    for D, d in _coprime_pairs([-15, -23, -31, -39, -47], [-4, -8]):
        r = verify_averaged(D, d, ctx)
        flags[(D, d)] = bool(r.abs_error < tol)
        res[(D, d)] = r.abs_error
    return flags, res, {}


def criterion_4(bits):
    flags = {}
    for D in range(-3, -201, -1):
        if not is_fundamental(D):
            continue
        G = class_group(D)
        thetas = [theta_form(f, 100).r for f in G.classes]
        flags[D] = all(sum(t[n] for t in thetas) == G.w * ideal_count(n, D) for n in range(1, 101))
    return flags, {}, {}


def criterion_5(bits):
    ctx = PrecisionContext(bits)
    flags, res = {}, {}
    with ctx.workprec():
        tol = mpmath.ldexp(1, -bits // 2)
        for D in range(-3, -101, -1):
            if not is_fundamental(D):
                continue
            lam = lambda_completed_at_0(D)
            err = abs(l_value_at_0(D, ctx) - mpmath.mpf(lam.numerator) / lam.denominator)
            flags[D] = bool(err < tol)
            res[D] = err
    return flags, res, {}


def criterion_6(bits):
    ctx = PrecisionContext(bits)
    flags, res, notes = {}, {}, {}
    for D in (-23, -31, -47):
        G = class_group(D)
        for chi in cusp_characters(D):
            key = (D, chi.exponents[1] if G.h > 1 else 0)
            v = petersson_norm_eta(D, chi, ctx)
            q = petersson_quadrature(theta_psi(G, chi, default_theta_order(-D)), D, ctx)
            rel = abs(float(v.numeric) - q.value) / float(v.numeric)
            flags[key] = bool(rel < 0.01 and v.imag_residual < mpmath.ldexp(1, -bits // 2) and v.numeric > 0)
            res[key] = v.imag_residual
            notes[key] = rel
    G = class_group(-23)
    chi = [c for c in cusp_characters(-23) if c.order == 3][0]
    th, e = theta_psi(G, chi, 50), eta_product([1, 23], 50)
    flags["theta_chi(-23) = eta(z) eta(23z) to q^50"] = all(
        th[n].is_rational() and th[n].to_rational() == e[n] for n in range(51))
    return flags, res, notes


def criterion_7(bits):
    ctx = PrecisionContext(bits)
    flags, res, notes = {}, {}, {}
    for D in (-7, -11, -15, -23):
        r = verify_relations(weil_matrices(fqm_for_gz(D), ctx=ctx), ctx)
        flags[D] = bool(r.passed)
        for name in ("unitarity_T", "unitarity_S", "braid", "s_squared", "milgram_residual"):
            res[(D, name)] = getattr(r, name)
        notes[(D, "s_squared_phase")] = float(mpmath.mpf(r.s_squared_phase))
    return flags, res, notes


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7}


@lru_cache(maxsize=None)
def run(number: int, bits: int = BITS) -> CriterionResult:
    t = time.time()
    flags, res, notes = CRITERIA[number](bits)
    return CriterionResult(number, flags, res, notes, time.time() - t)


def noise_floor(bits: int):
    """Residuals below this are indistinguishable from rounding at `bits`."""
    return mpmath.ldexp(1, -bits + 32)


def criterion_8(bits: int = BITS) -> CriterionResult:
    """Rerun 1-7 at doubled precision: no flag changes, residuals shrink by
    2^(bits/4) unless already at the doubled run's noise floor."""
    t = time.time()
    flags, res = {}, {}
    factor = mpmath.ldexp(1, -bits // 4)
    floor = noise_floor(2 * bits)
    for n in CRITERIA:
        lo, hi = run(n, bits), run(n, 2 * bits)
        flags[(n, "flags unchanged")] = lo.flags == hi.flags
        for k, r1 in lo.residuals.items():
            r2 = hi.residuals[k]
            flags[(n, k)] = bool(r2 <= r1 * factor or r2 <= floor)
            res[(n, k)] = r2
    return CriterionResult(8, flags, res, {}, time.time() - t)


if __name__ == "__main__":
    for n in CRITERIA:
        print(run(n).summary(), flush=True)
    print(criterion_8().summary())
