"""Command-line interface: ``cmvalues <subcommand> ...``.

JSON is the canonical output; csv and text are rendered from it. Exit codes:
0 success, 1 an identity or relation check failed, 2 usage error or an input
that violates a discriminant invariant.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import mpmath

from . import schema
from .arith import DiscriminantError, check_fundamental, is_fundamental, sturm_condition
from .cmidentity import verify_averaged, verify_individual
from .eiskappa import kappa
from .grosszagier import gz_rhs_factorization, norm_product
from .petersson import (
    cusp_characters,
    default_theta_order,
    petersson_norm_eta,
    petersson_quadrature,
    theta_psi,
)
from .precision import PRECISION_ENV, PrecisionContext, default_bits
from .qforms import BinaryQuadraticForm, class_group, cm_point, genus
from .qseries import j_invariant, theta_form
from .weilrep import fqm_for_gz, verify_relations, weil_matrices

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_form(text: str) -> BinaryQuadraticForm:
    try:
        a, b, c = (int(t) for t in text.strip("[]() ").split(","))
    except ValueError:
        raise UsageError(f"expected a form as a,b,c, got {text!r}")
    f = BinaryQuadraticForm(a, b, c)
    if not f.is_positive_definite():
        raise UsageError(f"form {f} is not positive definite (need a > 0 and b^2 - 4ac < 0)")
    return f


def _parse_tau(text: str):
    t = text.replace(" ", "").replace("I", "j").replace("i", "j")
    try:
        return mpmath.mpmathify(t if t not in ("j", "+j") else "1j")
    except (ValueError, TypeError):
        raise UsageError(f"cannot parse tau={text!r}; use a complex literal like 0.5+0.866j")


def _ctx(args) -> PrecisionContext:
    return PrecisionContext(bits=args.precision_bits, q_order=args.q_order)


def _report_json(r, bits) -> dict:
    return {
        "D": r.D,
        "d": r.d,
        "mode": r.mode,
        "lhs": schema.number(r.lhs, bits),
        "rhs": schema.number(r.rhs, bits),
        "abs_error": schema.number(r.abs_error, bits),
        "tolerance": schema.number(r.tolerance, bits),
        "precision_bits": r.precision_bits,
        "terms": [
            {"m": t.m, "n": t.n, "delta": t.delta, "coefficient": schema.number(t.coefficient, bits)}
            for t in r.terms
        ],
        "pass": bool(r.passed),
    }


# ----------------------------------------------------------------------------
# subcommands; each returns (payload, ok)


def cmd_classgroup(args):
    G = class_group(check_fundamental(args.D))
    out = G.to_json()
    out["genera"] = [{str(p): v for p, v in genus(f).items()} for f in G.classes]
    return out, True


def cmd_j(args):
    ctx = _ctx(args)
    with ctx.workprec():
        if args.form:
            tau = cm_point(_parse_form(args.form), ctx).alpha
        elif args.tau is None:
            raise UsageError("give TAU or --form a,b,c")
        else:
            tau = _parse_tau(args.tau)
        if mpmath.im(tau) <= 0:
            raise UsageError("tau must lie in the upper half-plane")
        j = j_invariant(tau, ctx)
        b = ctx.bits
        out = {
            "tau": {"re": schema.number(mpmath.re(tau), b), "im": schema.number(mpmath.im(tau), b)},
            "j": {"re": schema.number(mpmath.re(j), b), "im": schema.number(mpmath.im(j), b)},
            "precision_bits": b,
        }
    return out, True


def cmd_theta(args):
    if args.order < 0:
        raise UsageError("ORDER must be >= 0")
    return theta_form(_parse_form(args.Q), args.order).to_json(), True


def cmd_kappa(args):
    ctx = _ctx(args)
    check_fundamental(args.D)
    if args.N <= 0:
        raise UsageError("N must be a positive integer")
    k = kappa(args.N, args.D, ctx=ctx)
    out = {
        "n": args.N,
        "D": args.D,
        "diff": k.diff.to_json(),
        "terms": [[str(r), p] for r, p in k.terms],
        "numeric": schema.number(k.numeric, ctx.bits),
    }
    return out, True


def cmd_gz(args):
    ctx = _ctx(args)
    _check_pair(args.D, args.d)
    rec = norm_product(args.D, args.d, ctx)
    fac = gz_rhs_factorization(args.D, args.d)
    ok = rec.ok and rec.rounded == fac.value
    out = {
        "D": args.D,
        "d": args.d,
        "lhs_numeric": schema.number(rec.numeric, rec.bits),
        "recognized": rec.rounded,
        "factors": [list(pe) for pe in fac.factors],
        "expected": fac.value,
        "residual": schema.number(rec.residual, ctx.bits),
        "pass": bool(ok),
    }
    return out, ok


def _check_pair(D, d):
    check_fundamental(D)
    check_fundamental(d)
    if math.gcd(D, d) != 1:
        raise DiscriminantError(f"D={D} and d={d} must be coprime")
    if D == d:
        raise DiscriminantError("D and d must differ")


def _verify_one(D, d, mode, bits, q_order):
    ctx = PrecisionContext(bits=bits, q_order=q_order)
    fn = verify_individual if mode == "individual" else verify_averaged
    return _report_json(fn(D, d, ctx), bits)


def cmd_verify(args):
    _check_pair(args.D, args.d)
    mode = "individual" if args.individual else "averaged"
    out = _verify_one(args.D, args.d, mode, args.precision_bits, args.q_order)
    return out, out["pass"]


def batch_pairs(Dmax: int, dmax: int) -> list:
    """(D, d): odd fundamental D with |D| <= Dmax, fundamental d with |d| <= dmax, coprime, d != D."""
    Ds = [D for D in range(-3, -Dmax - 1, -1) if D % 2 and is_fundamental(D)]
    ds = [d for d in range(-3, -dmax - 1, -1) if is_fundamental(d)]
    return sorted(((D, d) for D in Ds for d in ds if d != D and math.gcd(D, d) == 1),
                  key=lambda t: (-t[0], -t[1]))


def cmd_verify_batch(args):
    if args.Dmax < 3 or args.dmax < 3:
        raise UsageError("--Dmax and --dmax must be at least 3")
    pairs = batch_pairs(args.Dmax, args.dmax)
    jobs = [(D, d, "averaged", args.precision_bits, args.q_order) for D, d in pairs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            reports = list(ex.map(_verify_one, *zip(*jobs))) if jobs else []
    else:
        reports = [_verify_one(*j) for j in jobs]
    failed = sum(1 for r in reports if not r["pass"])
    if args.figure:
        from .plotting import residual_figure

        rows = [(r["D"], r["d"], mpmath.mpf(r["abs_error"]["decimal"]), r["pass"]) for r in reports]
        if rows:
            residual_figure(rows, args.figure, args.precision_bits)
    out = {"reports": reports, "n_pairs": len(reports), "n_failed": failed, "pass": failed == 0}
    return out, failed == 0


def cmd_petersson(args):
    ctx = _ctx(args)
    D = args.D
    G = class_group(check_fundamental(D))
    chars = cusp_characters(D)
    rows = []
    ok = True
    for chi in chars:
        v = petersson_norm_eta(D, chi, ctx)
        row = {
            "character_order": chi.order,
            "exponents": [str(e) for e in chi.exponents],
            "value": schema.number(v.numeric, ctx.bits),
            "oracle_value": None,
            "rel_diff": None,
        }
        if args.oracle:
            q = petersson_quadrature(theta_psi(G, chi, default_theta_order(-D)), D, ctx)
            rel = abs(float(v.numeric) - q.value) / float(v.numeric)
            row["oracle_value"] = schema.number(q.value, 53)
            row["rel_diff"] = rel
            ok = ok and rel < 0.01
        rows.append(row)
    return {"D": D, "characters": rows, "pass": ok}, ok


def cmd_weilrep(args):
    ctx = _ctx(args)
    A = fqm_for_gz(args.D)
    out = {"D": args.D, "size": A.size, "sgn": A.sgn}
    if not args.check:
        sig, res = A.signature_mod_8(ctx)
        out.update(signature_mod_8=sig, milgram_residual=schema.number(res, ctx.bits))
        return out, True
    r = verify_relations(weil_matrices(A, ctx=ctx), ctx)
    for k, v in r.to_json().items():
        out[k] = v if isinstance(v, (int, str)) else schema.number(v, ctx.bits)
    out["pass"] = bool(r.passed)
    return out, r.passed


def cmd_sturm(args):
    return {"D": args.D, "sturm": sturm_condition(args.D)}, True


# ----------------------------------------------------------------------------


def _flatten(obj, prefix=""):
    if isinstance(obj, dict) and set(obj) == {"decimal", "display"}:
        yield prefix, obj["decimal"]
    elif isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj) if isinstance(obj, list) else obj


def render(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2)
    rows = list(_flatten(payload))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def _common_options(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global options with suppressed defaults, so a value
    # given before the subcommand is not overwritten by the subparser's default
    def default(v):
        return argparse.SUPPRESS if suppress else v

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=default(None),
                        help=f"working precision in bits (default 300 or ${PRECISION_ENV})")
    common.add_argument("--q-order", type=int, default=default(None),
                        help="minimum number of q-series terms (only ever lengthens truncation)")
    common.add_argument("--format", choices=["json", "csv", "text"], default=default("json"))
    common.add_argument("--jobs", type=int, default=default(1), help="worker processes for batch mode")
    return common


def build_parser() -> argparse.ArgumentParser:
    top = _common_options(False)
    common = _common_options(True)

    p = argparse.ArgumentParser(prog="cmvalues", description=__doc__.split("\n")[0], parents=[top])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classgroup", parents=[common], help="reduced forms and composition table of Cl(D)")
    s.add_argument("D", type=int)
    s.set_defaults(fn=cmd_classgroup)

    s = sub.add_parser("j", parents=[common], help="j-invariant at a point of the upper half-plane")
    s.add_argument("tau", nargs="?", help="complex literal, e.g. 0.5+0.866j or i")
    s.add_argument("--form", help="use the CM point of the form a,b,c instead")
    s.set_defaults(fn=cmd_j)

    s = sub.add_parser("theta", parents=[common], help="representation numbers r_Q(n), n <= ORDER")
    s.add_argument("Q", help="form a,b,c")
    s.add_argument("order", type=int)
    s.set_defaults(fn=cmd_theta)

    s = sub.add_parser("kappa", parents=[common], help="Eisenstein coefficient kappa(N) for discriminant D")
    s.add_argument("D", type=int)
    s.add_argument("N", type=int)
    s.set_defaults(fn=cmd_kappa)

    s = sub.add_parser("gz", parents=[common], help="Gross-Zagier norm: numeric vs factorization")
    s.add_argument("D", type=int)
    s.add_argument("d", type=int)
    s.set_defaults(fn=cmd_gz)

    s = sub.add_parser("verify", parents=[common], help="CM-value identity for one pair (D, d)")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--averaged", action="store_true", help="sum over Cl(D) (default)")
    g.add_argument("--individual", action="store_true", help="principal form only, needs h_D = 1")
    s.add_argument("--json", action="store_true", help="same as --format json")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("verify-batch", parents=[common], help="averaged identity over a range of pairs")
    s.add_argument("--Dmax", type=int, required=True)
    s.add_argument("--dmax", type=int, required=True)
    s.add_argument("--figure", help="write a residual plot (png/pdf/svg) to this path")
    s.set_defaults(fn=cmd_verify_batch)

    s = sub.add_parser("petersson", parents=[common], help="Petersson norms of theta_chi via eta CM values")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--oracle", action="store_true", help="also integrate numerically over Gamma0(|D|)")
    s.set_defaults(fn=cmd_petersson)

    s = sub.add_parser("weilrep", parents=[common], help="Weil representation of the module for odd D")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--check", action="store_true", help="verify unitarity, braid and S^2 relations")
    s.set_defaults(fn=cmd_weilrep)

    s = sub.add_parser("sturm", parents=[common], help="whether prod_{p|D} (1 + 1/p) <= 3")
    s.add_argument("D", type=int)
    s.set_defaults(fn=cmd_sturm)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    if args.precision_bits is None:
        try:
            args.precision_bits = default_bits()
        except ValueError:
            print(f"error: ${PRECISION_ENV} must be an integer", file=sys.stderr)
            return EXIT_USAGE
    if args.precision_bits < 64:
        print("error: --precision-bits must be at least 64", file=sys.stderr)
        return EXIT_USAGE
    if args.q_order is not None and args.q_order < 1:
        print("error: --q-order must be positive", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "json", False):
        args.format = "json"
    try:
        payload, ok = args.fn(args)
    except (DiscriminantError, UsageError, ValueError) as e:
        # ValueError is raised by the library for violated preconditions
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    schema.validate(args.command, payload)
    print(render(payload, args.format))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
