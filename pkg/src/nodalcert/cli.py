"""Command-line frontend: certify, verify, table, scan, identity-check, bounds.

Exit codes: 0 success / feasible / verified / tables match, 1 infeasible /
rejected / mismatch, 2 usage or input error.  All output is deterministic;
nothing here (or anywhere in the package) touches floating point.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import certify as certify_mod
from . import tables
from .arith import is_prime
from .catalog import solve_rk, w_coefficients
from .feasibility import (
    cutoff_pg,
    cutoff_pg_discrepancy_note,
    cutoff_pg_polynomial,
    cutoff_pgrk,
    cutoff_pgrk_polynomial,
    nmax_formula,
)
from .picard import SpaceParams


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_certify(args) -> int:
    rt = certify_mod.route(args.g, args.n, "auto")
    if rt.regime == certify_mod.REGIME_KNOWN:
        print(f"({args.g},{args.n}): known general type (g >= 24), no certificate needed")
        return 0
    if rt.regime == certify_mod.REGIME_OUT_OF_SCOPE:
        print(
            f"({args.g},{args.n}): out of scope, the ambient pointed space is not "
            "known to be of general type here",
            file=sys.stderr,
        )
        return 2
    column_set = None
    pipeline = "auto"
    if args.set in ("auto", "w", "uv"):
        pipeline = args.set
    else:
        column_set = [s.strip() for s in args.set.split(",") if s.strip()]
    result = certify_mod.certify(
        args.g, args.n, pipeline=pipeline, column_set=column_set
    )
    if isinstance(result, certify_mod.Certificate):
        if args.audit:
            result.audit = certify_mod.audit_full(result)
        _write(result.dumps(), args.out)
        return 0
    report = json.dumps(result.encode(), sort_keys=True, indent=2) + "\n"
    _write(report, args.out)
    return 1


def _cmd_verify(args) -> int:
    with open(args.cert) as fh:
        data = json.load(fh)
    ok = certify_mod.verify(data)
    print("VERIFIED" if ok else "REJECTED")
    return 0 if ok else 1


def _cmd_table(args) -> int:
    text, discrepancies = tables.gen_table(args.which, args.format)
    _write(text, args.out)
    if args.compare:
        for d in discrepancies:
            print(d.render())
        if discrepancies:
            return 1
        print(f"table {args.which}: all cells match the reference values")
    return 0


def _cmd_scan(args) -> int:
    n_from = args.n_from if args.n_from is not None else 1
    n_to = args.n_to if args.n_to is not None else nmax_formula(args.g) + 2
    for n in range(n_from, n_to + 1):
        rt = certify_mod.route(args.g, n, "auto")
        if rt.regime == certify_mod.REGIME_KNOWN:
            status = "KNOWN_GENERAL_TYPE"
        elif rt.regime == certify_mod.REGIME_OUT_OF_SCOPE:
            status = "OUT_OF_SCOPE"
        else:
            result = certify_mod.certify(args.g, n)
            if isinstance(result, certify_mod.Certificate):
                status = result.status
            else:
                status = "INFEASIBLE"
        print(f"{args.g},{n},{status}")
    return 0


def _check_pg() -> int:
    """Cutoff polynomial: definition vs closed form on every in-range cell."""
    bad = 0
    noted = False
    for g in range(5, 24):
        for n in range((g + 1) // 2, nmax_formula(g) + 3):
            if 2 * n < g:
                continue
            exact = cutoff_pg(g, n)
            if exact != cutoff_pg_polynomial(g, n):
                bad += 1
                print(f"pg mismatch at ({g},{n}): {exact}")
            note = cutoff_pg_discrepancy_note(g, n)
            if note and not noted:
                print(f"note: {note}")
                noted = True
    print(f"pg identity: {'OK' if bad == 0 else f'{bad} mismatches'}")
    return 0 if bad == 0 else 1


def _check_pgrk() -> int:
    bad = 0
    for g in range(5, 24, 2):
        for n in range(1, nmax_formula(g) + 3):
            rk = solve_rk(SpaceParams(g, n))
            if rk is None:
                continue
            if cutoff_pgrk(g, n, rk.r, rk.k) != cutoff_pgrk_polynomial(g, n, rk.r, rk.k):
                bad += 1
                print(f"pgrk mismatch at ({g},{n}) r={rk.r} k={rk.k}")
    print(f"pgrk identity: {'OK' if bad == 0 else f'{bad} mismatches'}")
    return 0 if bad == 0 else 1


def _check_trichotomy() -> int:
    """Sign of w2 - 3*w_psi against the node-count trichotomy."""
    bad = 0
    for g in range(5, 24):
        for n in range(1, 2 * g + 1):
            _, wpsi, w2 = w_coefficients(SpaceParams(g, n))
            diff = w2 - 3 * wpsi
            if 2 * n <= g - 2:
                ok = diff > 0
            elif 2 * n in (g - 1, g):
                ok = diff == 0
            else:
                ok = diff < 0
            if not ok:
                bad += 1
                print(f"trichotomy mismatch at ({g},{n}): w2 - 3*w_psi = {diff}")
    print(f"trichotomy: {'OK' if bad == 0 else f'{bad} mismatches'}")
    return 0 if bad == 0 else 1


def _cmd_identity_check(args) -> int:
    return {"pg": _check_pg, "pgrk": _check_pgrk, "trichotomy": _check_trichotomy}[
        args.which
    ]()


def _cmd_bounds(args) -> int:
    g = args.g
    if g < 5:
        print("bounds need g >= 5", file=sys.stderr)
        return 2
    print(f"g = {g}")
    if g in tables.MG2N_NMIN:
        print(f"scope threshold n >= {tables.MG2N_NMIN[g]}")
    else:
        print("scope: known general type for every n (g >= 24)")
        return 0
    print(f"weierstrass-route upper bound: 2g-4 = {2 * g - 4}")
    print(f"combined upper bound: {nmax_formula(g)}")
    # Largest real root of the cutoff quadratic, bracketed exactly.
    disc = 36 * g * g - 108 * g + 97
    s = math.isqrt(disc)
    lo_num, hi_num = 2 * g - 5 + s, 2 * g - 5 + s + 1
    print(f"cutoff root in [{lo_num}/4, {hi_num}/4) (discriminant {disc})")
    print(f"g+1 {'prime' if is_prime(g + 1) else 'composite'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodalcert",
        description="Exact certifier for general-type verdicts on nodal-curve moduli cells.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certify one (g, n) cell")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--set",
        default="auto",
        help="auto | w | uv | comma-separated class names (e.g. B,D,W)",
    )
    p.add_argument("--audit", action="store_true", help="run the full-generator audit")
    p.add_argument("--out", default=None, help="write the certificate to this file")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("verify", help="independently re-check a certificate file")
    p.add_argument("--cert", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("table", help="regenerate a reference table by scanning")
    p.add_argument(
        "--which",
        required=True,
        choices=["thm2", "prop51", "prop52", "mg2n_reference"],
    )
    p.add_argument("--format", default="markdown", choices=["markdown", "csv"])
    p.add_argument("--compare", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("scan", help="status of every cell in one genus row")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n-from", type=int, default=None)
    p.add_argument("--n-to", type=int, default=None)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("identity-check", help="cross-check closed-form identities")
    p.add_argument("--which", required=True, choices=["pg", "pgrk", "trichotomy"])
    p.set_defaults(func=_cmd_identity_check)

    p = sub.add_parser("bounds", help="closed-form node bounds for one genus")
    p.add_argument("--g", type=int, required=True)
    p.set_defaults(func=_cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
