"""Command-line interface: ``hodge-spectra <command> [options]``.

Exit codes: 0 success, 1 a check or validation failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

from . import __version__, _backend
from .berger import BergerParams, berger_block_values, berger_first_eigenvalue, berger_records, verify_eigenvectors
from .curl import coexact_bound_check, curl_squared_residual
from .errors import ConjectureViolation, DomainError, InversionError
from .geometry import Group, MetricParams
from .inverse import SpectralInvariants, invert
from .lambda1 import DEFAULT_K_PROBE, DEFAULT_MARGIN, certify_lambda1, lambda1_formula, stress_test
from .laplacian import DEFAULT_K_MAX, block_eigenvalues, full_spectrum, weights
from .report import DETERMINISM_NOTE, render

log = logging.getLogger("hodge_spectra")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    p.add_argument("--workers", type=int, default=None, help="threads (default: all cores)")


def _metric_args(p, c_required=True):
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=c_required, default=None)
    p.add_argument("--group", choices=["su2", "so3"], default="su2")


def build_parser():
    ap = _Parser(prog="hodge-spectra", description="Hodge-Laplacian spectra on SU(2) and SO(3)")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="eigenvalues of all weight blocks up to k-max")
    _metric_args(p)
    p.add_argument("--degree", type=int, choices=[0, 1], default=1)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    _common(p)

    p = sub.add_parser("berger", help="closed-form Berger spectrum (b = c)")
    _metric_args(p, c_required=False)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--check", action="store_true", help="compare with the numerical blocks and eigenvectors")
    _common(p)

    p = sub.add_parser("lambda1", help="closed-form first eigenvalue and numerical minimum")
    _metric_args(p)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    _common(p)

    p = sub.add_parser("certify", help="Gershgorin certification of the first eigenvalue")
    _metric_args(p)
    p.add_argument("--k-probe", type=int, default=DEFAULT_K_PROBE)
    p.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    _common(p)

    p = sub.add_parser("stress", help="seeded Monte Carlo check of the first-eigenvalue formula")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--lo", type=float, default=0.1)
    p.add_argument("--hi", type=float, default=10.0)
    p.add_argument("--group", choices=["su2", "so3"], default="su2")
    _common(p)

    p = sub.add_parser("invert", help="recover (a, b, c) from volume, Scal and lambda1")
    p.add_argument("--volume", type=float, required=True)
    p.add_argument("--scal", type=float, required=True)
    p.add_argument("--lambda1", type=float, required=True)
    p.add_argument("--norm-ric2", type=float, default=None)
    p.add_argument("--group", choices=["su2", "so3"], default="su2")
    _common(p)

    p = sub.add_parser("curl-check", help="Curl factorization and coexact lower bound")
    _metric_args(p)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    _common(p)
    return ap


def _metric(args) -> MetricParams:
    return MetricParams(args.a, args.b, args.c, args.group)


def _check_kmax(k):
    if k < 0:
        raise DomainError(f"--k-max must be non-negative, got {k}")


def cmd_spectrum(args):
    m = _metric(args)
    _check_kmax(args.k_max)
    spec = full_spectrum(m, args.degree, args.k_max, workers=args.workers)
    result = {
        "metric": m.as_dict(),
        "degree": args.degree,
        "k_max": args.k_max,
        "first_nonzero": spec.first_nonzero(),
        "records": spec.records(),
    }
    return result, True


def cmd_berger(args):
    c = args.b if args.c is None else args.c
    if abs(c - args.b) > 1e-12 * max(abs(c), abs(args.b)):
        raise DomainError(f"berger needs b = c, got b={args.b}, c={c}")
    _check_kmax(args.k_max)
    p = BergerParams(args.a, args.b)
    result = {
        "a": p.a,
        "b": p.b,
        "kappa": p.kappa,
        "group": args.group,
        "k_max": args.k_max,
        "first_eigenvalue": berger_first_eigenvalue(p, args.group),
        "records": berger_records(p, args.k_max, args.group),
    }
    ok = True
    if args.check:
        m = p.metric(args.group)
        dev, res = 0.0, 0.0
        for k in weights(m.group, args.k_max):
            cf = berger_block_values(k, p)
            num = block_eigenvalues(k, m)
            dev = max(dev, float(max(abs(cf - num) / abs(cf).clip(min=1.0))))
            rep = verify_eigenvectors(k, p)
            res = max(res, rep.max_residual / rep.matrix_norm)
        ok = dev <= 1e-8 and res <= 1e-8
        result["check"] = {"max_rel_dev": dev, "max_rel_residual": res, "ok": ok}
    return result, ok


def cmd_lambda1(args):
    m = _metric(args)
    _check_kmax(args.k_max)
    form = lambda1_formula(m)
    ks = weights(m.group, args.k_max)
    mins = [(k, float(block_eigenvalues(k, m)[0])) for k in ks]
    lo = min(v for _, v in mins)
    argmin = min(k for k, v in mins if v <= lo * (1 + 1e-9))
    dev = abs(lo - form.value) / form.value
    result = {
        "metric": m.as_dict(),
        "value": form.value,
        "attaining_branch": form.attaining_branch.value,
        "ties": [t.value for t in form.ties],
        "k_max": args.k_max,
        "numeric_min": lo,
        "argmin_k": argmin,
        "rel_dev": dev,
    }
    return result, dev <= 1e-8


def cmd_certify(args):
    m = _metric(args)
    res = certify_lambda1(m, args.k_probe, args.margin, workers=args.workers)
    out = res.as_dict()
    out["metric"] = m.as_dict()
    return out, True


def cmd_stress(args):
    rep = stress_test(args.seed, args.samples, args.k_max, (args.lo, args.hi), args.group, workers=args.workers)
    return rep.as_dict(), rep.ok


def cmd_invert(args):
    si = SpectralInvariants(args.volume, args.scal, args.lambda1, args.group, normRic2=args.norm_ric2)
    res = invert(si)
    out = res.as_dict()
    out["input"] = si.as_dict()
    return out, True


def cmd_curl_check(args):
    m = _metric(args)
    _check_kmax(args.k_max)
    chk = coexact_bound_check(m, args.k_max, workers=args.workers)
    sq = curl_squared_residual(m)
    out = chk.as_dict()
    out["curl_squared_residual"] = sq
    ok = chk.ok and sq <= 1e-12
    out["ok"] = ok
    return out, ok


COMMANDS = {
    "spectrum": cmd_spectrum,
    "berger": cmd_berger,
    "lambda1": cmd_lambda1,
    "certify": cmd_certify,
    "stress": cmd_stress,
    "invert": cmd_invert,
    "curl-check": cmd_curl_check,
}


def _config(args) -> dict:
    skip = {"format", "output", "workers", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"hodge-spectra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result, ok = COMMANDS[args.command](args)
        code = EXIT_OK if ok else EXIT_FAIL
    except DomainError as exc:
        print(f"hodge-spectra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConjectureViolation, InversionError) as exc:
        result, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_FAIL
    doc = {
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "determinism": DETERMINISM_NOTE,
        "status": "ok" if code == EXIT_OK else "failed",
        "result": result,
    }
    text = render(doc, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    log.debug("backend %s, exit %d", _backend.BACKEND, code)
    return code


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
