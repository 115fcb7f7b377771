"""Command-line entry point: ``ellcot verify ...`` and ``ellcot table berndt``."""
from __future__ import annotations

import argparse
import csv
import json
import sys

from . import series, verify
from .modular import S, CharMatrix, UnimodularMatrix, as_rational
from .numeric import DomainError, EllcotError, TruncationPolicy
from .quadratic import as_quadratic, pell_alpha
from .thetakron import ModularParameter


def _floats(text, n, what):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise DomainError(f"{what}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise DomainError(f"{what}: expected {n} comma-separated numbers, got {text!r}")
    return vals


def _ints(text, what):
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise DomainError(f"{what}: expected comma-separated integers, got {text!r}") from None


def _complex(text, what):
    re, im = _floats(text, 2, what)
    return complex(re, im)


def _tau(args):
    return ModularParameter(_complex(args.tau, "--tau"))


def _policy(args, lattice=False):
    pol = TruncationPolicy()
    if args.config:
        pol = TruncationPolicy.from_json(args.config, pol)
    n = args.radius if lattice else args.terms
    if n is not None:
        pol = pol.with_(max_index=n)
    return pol


def _matrix(text):
    return UnimodularMatrix.parse(text)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--alpha", default="0,1,2,1", help="quadratic irrational p,q,D,den = (p + q sqrt D)/den")
    p.add_argument("--matrix", action="append", help="unimodular a,b,c,d (repeat for cocycle: V1 then V2)")
    p.add_argument("--charmat", default="0.21,0.37,0.13,0.58", help="characteristic matrix x',x,y',y")
    p.add_argument("--tau", default="0.1,1.2", help="modular parameter re,im")
    p.add_argument("--l", type=int, default=4)
    p.add_argument("--r", default="1/2", help="rational n/d")
    p.add_argument("--terms", type=int, help="truncation N of one-dimensional series")
    p.add_argument("--radius", type=int, help="square-window radius of lattice sums")
    p.add_argument("--tol", type=float)
    p.add_argument("--imtau", type=float, default=8.0)
    p.add_argument("--out", help="write the JSON report(s) here")
    p.add_argument("--config", help="JSON file overriding TruncationPolicy defaults")
    return p


def build_parser():
    parser = argparse.ArgumentParser(prog="ellcot", description="Numerical checks for elliptic cotangent sums.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    ver = sub.add_parser("verify", help="run identity checks")
    vsub = ver.add_subparsers(dest="identity", required=True)
    vsub.add_parser("transform", parents=[common])
    p = vsub.add_parser("cocycle", parents=[common])
    p.add_argument("--z", default="0.3,0.7", help="evaluation point re,im")
    vsub.add_parser("reciprocity", parents=[common])
    p = vsub.add_parser("hat", parents=[common])
    p.add_argument("--xy", default="0.11,0.07,-0.05,0.13", help="X and Y as Xre,Xim,Yre,Yim")
    p = vsub.add_parser("berndt", parents=[common])
    p.add_argument("--c", type=int, help="squarefree c; alpha from the +-4 Pell solution")
    p.add_argument("--eps", type=int, choices=(-1, 1), help="force the sign (falsification run)")
    p = vsub.add_parser("degeneration", parents=[common])
    p.add_argument("--part", choices=("i", "ii"), default="i")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p = vsub.add_parser("suite", parents=[common])
    p.add_argument("--all", action="store_true", help="run every case (default)")
    p.add_argument("--case", action="append", help="run only the named case")

    tab = sub.add_parser("table", help="print tables of series values")
    tsub = tab.add_subparsers(dest="table", required=True)
    p = tsub.add_parser("berndt")
    p.add_argument("--c", default="2,3,5")
    p.add_argument("--l", default="2,3,4")
    p.add_argument("--terms", type=int, default=100000)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--config")
    return parser


def _single(args):
    ident = args.identity
    M = CharMatrix.parse(args.charmat)
    mats = [_matrix(t) for t in (args.matrix or [])]
    V = mats[0] if mats else S
    kw = {} if args.tol is None else {"tol": args.tol}
    if ident == "transform":
        return verify.check_transform(V, args.l, as_quadratic(args.alpha), M, _tau(args),
                                      _policy(args, lattice=True), **kw)
    if ident == "cocycle":
        if len(mats) != 2:
            raise DomainError("cocycle needs --matrix twice (V1, then V2)")
        return verify.check_cocycle(mats[0], mats[1], args.l, _complex(args.z, "--z"), M, _tau(args), **kw)
    if ident == "reciprocity":
        return verify.check_reciprocity(V, args.l, as_rational(args.r), M, _tau(args), **kw)
    if ident == "hat":
        xr, xi, yr, yi = _floats(args.xy, 4, "--xy")
        return verify.check_hat(V, args.l, as_rational(args.r), M, complex(xr, xi), complex(yr, yi), _tau(args), **kw)
    if ident == "berndt":
        pol = _policy(args)
        if args.c is not None:
            return verify.check_berndt(args.l, args.c, pol, eps=args.eps, **kw)
        return verify.check_berndt(args.l, None, pol, alpha=as_quadratic(args.alpha), eps=args.eps, **kw)
    if ident == "degeneration":
        if args.part == "i":
            return verify.check_degeneration(args.l, as_quadratic(args.alpha), M, args.imtau,
                                             _policy(args, lattice=True), **kw)
        return verify.check_degeneration_edr(args.m, args.n, as_rational(args.r), M, args.imtau, **kw)
    raise DomainError(f"unknown identity {ident!r}")


def _write(path, reports):
    data = [r.to_dict() for r in reports]
    with open(path, "w") as fh:
        json.dump(data[0] if len(data) == 1 else data, fh, indent=2)
        fh.write("\n")


def berndt_table(cs, ls, policy):
    rows = []
    for c in cs:
        alpha, eps = pell_alpha(c)
        for l in ls:
            v = series.cot_dirichlet(2 * l - 1, alpha, policy)
            rows.append({"c": c, "l": l, "s": 2 * l - 1, "alpha": str(alpha), "eps": eps,
                         "value": v.value.real, "closed_form": complex(series.berndt_rhs(l, alpha, eps)).real,
                         "est_tail": v.est_tail, "terms": v.terms_used})
    return rows


def _table(args, out):
    pol = TruncationPolicy(max_index=args.terms)
    if args.config:
        pol = TruncationPolicy.from_json(args.config, pol)
    rows = berndt_table(_ints(args.c, "--c"), _ints(args.l, "--l"), pol)
    if args.format == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        w = csv.DictWriter(out, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    return 0


def run_cli(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "table":
            return _table(args, out)
        if args.identity == "suite":
            reports, ok = verify.run_suite(args.case)
            for r in reports:
                print(f"[{r.params['case']}] {r.summary()}", file=out)
        else:
            reports = [_single(args)]
            ok = bool(reports[0].passed)
            print(reports[0].summary(), file=out)
        if args.out:
            _write(args.out, reports)
        return 0 if ok else 1
    except (EllcotError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
