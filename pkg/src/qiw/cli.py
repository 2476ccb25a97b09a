"""Command-line entry point ``qiw``.

N is always the index of tau_N (the level is k = N - 2); ``--level k`` is accepted
as an alias for ``--N k+2``.  Exit codes: 0 all checks pass, 1 a check failed,
2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import asymflat as af
from . import polysolids as ps
from . import series as qs
from . import wrtcore as wc
from .seifert import DomainError, ManifoldLabel
from .verify import SUITES, run_suite

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    prec: int = 256
    order: Fraction | None = None
    tol: object = None
    fmt: str = "text"
    jobs: int = 1

    def __post_init__(self):
        if self.prec < 64:
            raise UsageError("--prec must be at least 64")
        if self.jobs < 1:
            raise UsageError("--jobs must be positive")
        if self.tol is None:
            self.tol = mpmath.mpf(2) ** (-(self.prec // 2))
        else:
            self.tol = mpmath.mpf(self.tol)
        if not 0 < self.tol < 1:
            raise UsageError("--tol must lie in (0, 1)")

    @property
    def digits(self) -> int:
        return max(1, int(self.prec / 3.4))

    def num(self, x) -> str:
        return mpmath.nstr(x, self.digits)

    def series_order(self, default=24) -> Fraction:
        return Fraction(default) if self.order is None else self.order


# ------------------------------------------------------------------ output


def _emit(cfg: RunConfig, command: str, rows: list[dict], extra: dict | None = None, out=None):
    out = out or sys.stdout
    if cfg.fmt == "json":
        doc = {"schema": SCHEMA, "command": command, "precision_bits": cfg.prec, "results": rows}
        if extra:
            doc.update(extra)
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    elif cfg.fmt == "csv":
        keys = []
        for r in rows:
            for k in r:
                if k not in keys:
                    keys.append(k)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(v) for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        for r in rows:
            out.write("  ".join(f"{k}={_cell(v)}" for k, v in r.items()) + "\n")
        if extra:
            for k, v in sorted(extra.items()):
                out.write(f"{k}: {_cell(v)}\n")


def _cell(v):
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return "" if v is None else v


def _manifold(args) -> ManifoldLabel:
    return ManifoldLabel.parse(args.manifold, getattr(args, "K", None))


def _N(args) -> int:
    if args.N is not None and args.level is not None:
        raise UsageError("give either --N or --level, not both")
    if args.level is not None:
        return args.level + 2
    if args.N is None:
        raise UsageError("--N (or --level) is required")
    return args.N


# ---------------------------------------------------------------- commands


def cmd_wrt(args, cfg: RunConfig) -> int:
    m = _manifold(args)
    N = _N(args)
    if N < 3:
        raise DomainError("N must be >= 3")
    methods = ["lr", "closed"] if args.method == "both" else [args.method]
    results = [wc.compute(m, N, meth, cfg.prec, cfg.jobs) for meth in methods]
    rows = []
    for r in results:
        d = r.as_dict()
        d["vanishing"] = bool(abs(r.tau) < cfg.tol)
        rows.append(d)
    status = EXIT_OK
    extra = {}
    if len(results) == 2:
        with mpmath.workprec(cfg.prec):
            disc = abs(results[0].tau - results[1].tau) / max(1, abs(results[0].tau))
        ok = disc < cfg.tol
        extra = {"discrepancy": mpmath.nstr(disc, 6), "status": "pass" if ok else "fail"}
        status = EXIT_OK if ok else EXIT_FAIL
    _emit(cfg, "wrt", rows, extra)
    return status


def cmd_eichler(args, cfg: RunConfig) -> int:
    P, a, N = args.P, args.a, args.N
    row = {"P": P, "a": a, "N": N}
    if args.integer:
        v = wc.eichler_limit_integer(P, a, N, cfg.prec)
        row["kind"] = "integer"
    else:
        if N < 1:
            raise DomainError("need N >= 1 for tau = 1/N")
        v = wc.eichler_limit_rational(P, a, N, cfg.prec)
        row["kind"] = "rational"
    row["value_re"], row["value_im"] = cfg.num(mpmath.re(v)), cfg.num(mpmath.im(v))
    status = EXIT_OK
    if args.radial:
        if args.integer:
            raise UsageError("--radial applies to tau = 1/N only")
        r = wc.eichler_radial_limit(P, a, N)
        with mpmath.workprec(cfg.prec):
            diff = abs(r - v)
        row["radial_re"], row["radial_im"] = mpmath.nstr(mpmath.re(r), 20), mpmath.nstr(mpmath.im(r), 20)
        row["radial_diff"] = mpmath.nstr(diff, 6)
    _emit(cfg, "eichler", [row])
    return status


_SERIES_BUILDERS = {
    "eta": lambda o: qs.eta(o),
    "E2": lambda o: qs.eisenstein(2, o),
    "E4": lambda o: qs.eisenstein(4, o),
    "E6": lambda o: qs.eisenstein(6, o),
    "delta": lambda o: qs.delta(o),
    "theta00": lambda o: qs.theta("00", o),
    "theta10": lambda o: qs.theta("10", o),
    "theta01": lambda o: qs.theta("01", o),
}


def _named_series(name: str, order: Fraction):
    """'eta', 'E4', 'delta', 'theta00', ... or 'psi:P:a' / 'eichler:P:a'."""
    if name in _SERIES_BUILDERS:
        return _SERIES_BUILDERS[name](order)
    parts = name.split(":")
    if len(parts) == 3 and parts[0] in ("psi", "eichler"):
        try:
            P, a = int(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"bad series spec {name!r}") from None
        f = qs.psi_weight32 if parts[0] == "psi" else qs.eichler_qseries
        return f(P, a, order)
    raise UsageError(f"unknown series {name!r}; known: {', '.join(_SERIES_BUILDERS)}, psi:P:a, eichler:P:a")


def cmd_qseries(args, cfg: RunConfig) -> int:
    order = Fraction(args.qorder) if args.qorder is not None else cfg.series_order()
    if (args.label is None) == (args.series is None):
        raise UsageError("give exactly one of --label and --series")
    if args.label is not None:
        comps = qs.vector_form(args.label, order)
        name = args.label.upper()
    else:
        comps = [qs.SurdSeries.coerce(_named_series(args.series, order))]
        name = args.series
    if args.dump:
        for i, c in enumerate(comps):
            if len(comps) > 1:
                sys.stdout.write(f"# component {i}\n")
            for line in qs.golden_lines(c):
                sys.stdout.write(line + "\n")
        return EXIT_OK
    rows = []
    for i, c in enumerate(comps):
        for line in qs.golden_lines(c):
            e, coeff, tag = line.split("\t")
            rows.append({"component": i, "exponent": e, "coefficient": coeff, "surd": tag})
    _emit(cfg, "qseries", rows, {"name": name, "order": str(order)})
    return EXIT_OK


def cmd_polyhedral(args, cfg: RunConfig) -> int:
    fam = args.family.upper()
    alias = {"KLEIN": "KLEIN_QUARTIC", "QUARTIC": "KLEIN_QUARTIC"}
    fam = alias.get(fam, fam)
    known = set(ps.RELATIONS) | set(ps.EISENSTEIN_FAMILIES) | set(ps.FAMILIES)
    if fam not in known:
        raise UsageError(f"unknown family {args.family!r}; known: {', '.join(sorted(known))}")
    results = ps.run_family(fam, cfg.series_order())
    if args.hypersurface:
        results += [r for r in ps.hypersurface_checks(cfg.prec) if r.family == fam]
    rows = [r.as_dict() for r in results]
    failed = [r for r in results if not r.status and not r.known_deviation]
    _emit(cfg, "polyhedral", rows, {"status": "fail" if failed else "pass"})
    return EXIT_FAIL if failed else EXIT_OK


def cmd_asym(args, cfg: RunConfig) -> int:
    m = _manifold(args)
    N = _N(args)
    if N < 3:
        raise DomainError("N must be >= 3")
    e = af.corollary_expansion_data(m, N, cfg.prec)
    k = e.optimal_k() if args.kmax is None else args.kmax
    with mpmath.workprec(cfg.prec):
        approx = e.evaluate(k)
        exact = wc.closed_form_normalized(m, N, cfg.prec)
        rel = abs(approx - exact) / abs(exact) if exact != 0 else abs(approx)
    row = {
        "manifold": m.name,
        "N": N,
        "kmax": k,
        "expansion_re": cfg.num(mpmath.re(approx)),
        "expansion_im": cfg.num(mpmath.im(approx)),
        "exact_re": cfg.num(mpmath.re(exact)),
        "exact_im": cfg.num(mpmath.im(exact)),
        "rel_error": mpmath.nstr(rel, 6),
    }
    _emit(cfg, "asym", [row])
    return EXIT_OK


def cmd_flatconn(args, cfg: RunConfig) -> int:
    m = _manifold(args)
    rows = [dict(c.as_dict(min(cfg.digits, 40)), manifold=m.name) for c in af.flat_connections(m, args.raw, cfg.prec)]
    _emit(cfg, "flatconn", rows)
    return EXIT_OK


def _sweep_one(m, N, emit, prec, digits):
    if emit == "partition":
        row = af.sweep_row(m, N, prec, digits)
    elif emit == "asym":
        e = af.corollary_expansion_data(m, N, prec)
        with mpmath.workprec(prec):
            approx = e.evaluate()
            exact = wc.closed_form_normalized(m, N, prec)
            rel = abs(approx - exact) / abs(exact) if exact != 0 else abs(approx)
        row = {
            "manifold": m.name,
            "N": N,
            "expansion_re": mpmath.nstr(mpmath.re(approx), digits),
            "expansion_im": mpmath.nstr(mpmath.im(approx), digits),
            "rel_error": mpmath.nstr(rel, 6),
        }
    else:
        t = wc.closed_form(m, N, prec)
        row = {"manifold": m.name, "N": N, "tau_re": mpmath.nstr(mpmath.re(t), digits), "tau_im": mpmath.nstr(mpmath.im(t), digits)}
    if m.family == "D" and m.K % 2 and N % 4 == 2:
        row["kashaev_residual"] = mpmath.nstr(wc.relation_d_odd_link(m.K, N, prec, "closed"), 6)
    return row


def _sweep_task(task):
    label, K, N, emit, prec, digits = task
    with mpmath.workprec(prec + 16):
        return _sweep_one(ManifoldLabel.parse(label, K), N, emit, prec, digits)


def cmd_sweep(args, cfg: RunConfig) -> int:
    m = _manifold(args)
    if args.step < 1:
        raise UsageError("--step must be positive")
    Ns = list(range(args.Nmin, args.Nmax + 1, args.step))
    if args.modulus is not None:
        Ns = [N for N in Ns if N % args.modulus == args.residue % args.modulus]
    Ns = [N for N in Ns if N >= 3]
    if not Ns:
        raise UsageError("empty N range")
    digits = min(cfg.digits, 30)
    tasks = [(m.family, m.K, N, args.emit, cfg.prec, digits) for N in Ns]
    if cfg.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(cfg.jobs) as ex:
            rows = list(ex.map(_sweep_task, tasks))
    else:
        rows = [_sweep_task(t) for t in tasks]
    _emit(cfg, "sweep", rows)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    kw = {"Nmax": args.Nmax}
    if cfg.order is not None:
        kw["order"] = cfg.order
    checks = run_suite(args.suite, prec=cfg.prec, **kw)
    rows = [c.as_dict() for c in checks]
    failed = [c for c in checks if not c.ok and not c.known]
    extra = {
        "suite": args.suite,
        "passed": sum(c.ok for c in checks),
        "failed": len(failed),
        "known_deviations": sum(c.known for c in checks),
        "status": "fail" if failed else "pass",
    }
    if failed:
        extra["first_failure"] = f"{failed[0].suite}: {failed[0].name} {failed[0].detail}".strip()
    _emit(cfg, "verify", rows, extra)
    return EXIT_FAIL if failed else EXIT_OK


# ------------------------------------------------------------------ parser


def _default_prec() -> int:
    v = os.environ.get("QIW_PREC")
    if v is None:
        return 256
    try:
        return int(v)
    except ValueError:
        raise UsageError(f"QIW_PREC must be an integer, got {v!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--prec", type=int, default=argparse.SUPPRESS, help="working precision in bits (default QIW_PREC or 256)")
    g.add_argument("--order", type=Fraction, default=argparse.SUPPRESS, help="q-series truncation: keep exponents < order")
    g.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="check tolerance (default 2^(-prec/2))")
    g.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="shorthand for --format json")
    g.add_argument("--format", choices=("json", "csv", "text"), default=argparse.SUPPRESS)
    g.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")

    p = argparse.ArgumentParser(prog="qiw", description="Quantum invariants workbench", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    def manifold_args(sp, need_N=True):
        sp.add_argument("--manifold", required=True, help="E6, E7, E8, D<K>, or DK with --K")
        sp.add_argument("--K", type=int)
        if need_N:
            sp.add_argument("--N", type=int, help="index of tau_N (level k = N - 2)")
            sp.add_argument("--level", type=int, help="level k; sets N = k + 2")

    s = add("wrt", "WRT invariant tau_N")
    manifold_args(s)
    s.add_argument("--method", choices=("lr", "closed", "both"), default="closed")
    s.set_defaults(func=cmd_wrt)

    s = add("eichler", "limiting values of the Eichler integral of psi_{2P}^{(a)}")
    s.add_argument("--P", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--integer", action="store_true", help="value at the integer N instead of tau = 1/N")
    s.add_argument("--radial", action="store_true", help="also compute the radial-limit oracle")
    s.set_defaults(func=cmd_eichler)

    s = add("qseries", "q-expansions of vector modular forms and named series")
    s.add_argument("--label", help=f"one of {', '.join(qs.VECTOR_LABELS)}")
    s.add_argument("--series", help="eta, E2, E4, E6, delta, theta00, theta10, theta01, psi:P:a, eichler:P:a")
    s.add_argument("--qorder", type=Fraction, help="truncation order for this command (overrides --order)")
    s.add_argument("--dump", action="store_true", help="golden-file lines")
    s.set_defaults(func=cmd_qseries)

    s = add("polyhedral", "polyhedral polynomial identities")
    s.add_argument("--family", required=True)
    s.add_argument("--hypersurface", action="store_true", help="include the numeric hypersurface checks")
    s.set_defaults(func=cmd_polyhedral)

    s = add("asym", "large-N expansion against the exact value")
    manifold_args(s)
    s.add_argument("--kmax", type=int, help="tail truncation (default: optimal)")
    s.set_defaults(func=cmd_asym)

    s = add("flatconn", "irreducible flat connections")
    manifold_args(s, need_N=False)
    s.add_argument("--raw", action="store_true", help="every rotation vector, no identifications")
    s.set_defaults(func=cmd_flatconn)

    s = add("sweep", "tabulate over a range of N")
    manifold_args(s, need_N=False)
    s.add_argument("--Nmin", type=int, default=3)
    s.add_argument("--Nmax", type=int, required=True)
    s.add_argument("--step", type=int, default=1)
    s.add_argument("--modulus", type=int, help="keep N = residue mod modulus")
    s.add_argument("--residue", type=int, default=0)
    s.add_argument("--emit", choices=("partition", "closed", "asym"), default="closed")
    s.set_defaults(func=cmd_sweep)

    s = add("verify", "run self-check suites")
    s.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    s.add_argument("--Nmax", type=int, default=16)
    s.set_defaults(func=cmd_verify)
    return p


def _config(args) -> RunConfig:
    fmt = getattr(args, "format", None)
    if getattr(args, "json", False):
        if fmt not in (None, "json"):
            raise UsageError("--json conflicts with --format")
        fmt = "json"
    prec = getattr(args, "prec", None)
    return RunConfig(
        prec=_default_prec() if prec is None else prec,
        order=getattr(args, "order", None),
        tol=getattr(args, "tol", None),
        fmt=fmt or "text",
        jobs=getattr(args, "jobs", 1),
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = _config(args)
        with mpmath.workprec(cfg.prec + 16):
            return args.func(args, cfg)
    except (UsageError, DomainError, qs.InsufficientTruncation) as e:
        sys.stderr.write(f"qiw: error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
