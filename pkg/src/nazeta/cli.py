"""Command-line interface: ``nazeta {eval,zeros,certify,lattice,verify}``.

Every invocation prints one JSON document (schema 1, fixed key order,
numbers as decimal strings).  Exit codes: 0 success, 1 failed verification,
2 bad arguments, 3 domain error (pole, unsupported field, ...), 4 failed
certification.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from mpmath import mpc, mpf

from . import eisenstein, lattice, rank2, verify, zeros, zetalib
from .errors import NazetaError
from .fields import parse_field
from .hpnum import DEFAULT_DIGITS, digits_of, parse_complex, working

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN, EXIT_UNCERTIFIED = 0, 1, 2, 3, 4
SCHEMA = 1


class UsageError(Exception):
    pass


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def _record(command: str, digits: int, **body) -> dict:
    doc = {"schema": SCHEMA, "command": command}
    doc.update(body)
    doc["precision"] = {"digits": digits}
    return doc


def _value(z, digits: int) -> dict:
    with working(digits):
        z = mpc(z)
    return {"re": digits_of(z.real, digits), "im": digits_of(z.imag, digits)}


def _default_digits() -> int:
    env = os.environ.get("NAZETA_DIGITS")
    if env is None:
        return DEFAULT_DIGITS
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"NAZETA_DIGITS must be an integer, got {env!r}")
    if value < 5:
        raise UsageError("NAZETA_DIGITS must be at least 5")
    return value


def _digits(args) -> int:
    if args.digits is not None:
        if args.digits < 5:
            raise UsageError("--digits must be at least 5")
        return args.digits
    return _default_digits()


def _field(text: str):
    try:
        return parse_field(text)
    except ValueError as exc:
        raise UsageError(str(exc))


def _complex(text: str, flag: str) -> mpc:
    try:
        return parse_complex(text)
    except (ValueError, TypeError):
        raise UsageError(f"{flag} expects re,im; got {text!r}")


# ------------------------------------------------------------------ eval

def cmd_eval(args) -> int:
    p = _digits(args)
    K = _field(args.field)
    with working(p):
        s = _complex(args.s, "--s")
        start = time.perf_counter()
        kind = args.kind
        if kind == "zeta":
            value = zetalib.riemann_zeta(s, p)
        elif kind == "xi":
            value = zetalib.completed_xi_K(s, K, p)
        elif kind == "dedekind":
            value = zetalib.dedekind_zeta(s, K, p)
        elif kind == "rank2":
            value = rank2.rank2_zeta(s, K, p)
        elif kind == "rank2T":
            if args.T is None:
                raise UsageError("--kind rank2T needs --T")
            value = rank2.rank2_zeta_T(s, mpf(args.T), p)
        else:  # eisenstein
            if args.z is None:
                raise UsageError("--kind eisenstein needs --z")
            value = eisenstein.eisenstein_fourier(_complex(args.z, "--z"), s, None, p)
        elapsed = time.perf_counter() - start
    inputs = {"kind": kind, "field": K.label, "s": args.s}
    if args.T is not None:
        inputs["T"] = args.T
    if args.z is not None:
        inputs["z"] = args.z
    _emit(_record("eval", p, inputs=inputs, value=_value(value, p), elapsed_s=f"{elapsed:.3f}"))
    return EXIT_OK


# ----------------------------------------------------------- zeros/certify

def _positive(zero_list):
    return [(t, w) for t, w in zero_list if not t.startswith("-")]


def cmd_zeros(args) -> int:
    p = _digits(args)
    K = _field(args.field)
    T = mpf(args.T) if args.T is not None else None
    found = zeros.find_line_zeros(K, T, mpf(args.tmax), p, jobs=args.jobs)
    listed = [(digits_of(t, p), digits_of(w, 5)) for t, w in found]
    if args.out:
        zeros.write_zero_csv(listed, args.out)
    _emit(_record("zeros", p, field=K.label, T=args.T or "1", tmax=args.tmax,
                  count=len(listed), zeros=[{"t": t, "width": w} for t, w in listed],
                  csv=args.out))
    return EXIT_OK


def cmd_certify(args) -> int:
    p = _digits(args)
    K = _field(args.field)
    T = mpf(args.T) if args.T is not None else None
    report = zeros.certify_box(K, T, mpf(args.tmax), p, jobs=args.jobs)
    if args.out:
        zeros.write_zero_csv(_positive(report.on_line_zeros), args.out)
    doc = _record("certify", p, report=report.to_dict(), csv=args.out)
    if not report.certified:
        doc["discrepancy"] = report.discrepancy
    _emit(doc)
    return EXIT_OK if report.certified else EXIT_UNCERTIFIED


# --------------------------------------------------------------- lattice

def _lattice_from(args, K):
    parts = [t.strip() for t in args.tau.split(",")]
    try:
        nums = [mpf(x) for x in parts]
    except (ValueError, TypeError):
        raise UsageError(f"--tau expects numbers, got {args.tau!r}")
    scale = mpf(args.scale)
    twist = None
    if args.twist is not None:
        forms = K.forms if K.is_imaginary_quadratic else ()
        if not 0 <= args.twist < len(forms):
            raise UsageError(f"--twist must index one of the {len(forms)} reduced forms")
        twist = forms[args.twist] if args.twist else None
    if K.is_rational:
        if len(nums) != 2:
            raise UsageError("over Q, --tau is x,y")
        return lattice.LatticeK(K, mpc(nums[0], nums[1]), scale)
    if len(nums) != 3:
        raise UsageError("over an imaginary quadratic field, --tau is re(z),im(z),r")
    return lattice.LatticeK(K, (mpc(nums[0], nums[1]), nums[2]), scale, twist)


def cmd_lattice(args) -> int:
    p = _digits(args)
    K = _field(args.field)
    with working(p):
        L = _lattice_from(args, K)
        body = {"action": args.action, "field": K.label, "tau": args.tau, "scale": args.scale}
        if args.action == "h0":
            body["h0"] = digits_of(lattice.h0(L, p), p)
        elif args.action == "h1":
            body["h1"] = digits_of(lattice.h1(L, p), p)
        elif args.action == "deg":
            body["degree"] = digits_of(lattice.degree(L), p)
        elif args.action == "stable":
            distance = lattice.is_semistable_k(L, p)
            hayashi = lattice.hayashi_check(L, None, p)
            body["semistable"] = {"distance": distance, "hayashi": hayashi}
            if K.is_rational:
                # semistable iff lambda1^2 >= covolume = scale^2
                body["semistable"]["lambda1"] = bool(lattice.lambda1(L) >= mpf(L.scale))
                body["semistable"]["reduction"] = lattice.is_semistable_q(L.tau)
            agree = len(set(body["semistable"].values())) == 1
            body["agree"] = agree
            if not agree:
                _emit(_record("lattice", p, **body))
                return EXIT_VERIFY
        else:  # cusps
            cusps = lattice.enumerate_candidate_cusps(L, mpf(args.threshold), p)
            body["cusps"] = [{
                "alpha": str(c.alpha), "beta": str(c.beta),
                "mu": digits_of(lattice.mu_distance(c, L), 20),
                "class": None if c.ideal_class is None else list(c.ideal_class.triple),
            } for c in cusps]
    _emit(_record("lattice", p, **body))
    return EXIT_OK


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    digits = args.digits
    if digits is None and "NAZETA_DIGITS" in os.environ:
        digits = _default_digits()
    summary = verify.run_suite(args.suite, args.seed, digits, args.jobs)
    _emit(summary)
    return EXIT_OK if summary["passed"] else EXIT_VERIFY


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nazeta", description="Rank-two non-abelian zeta functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, field=True):
        if field:
            p.add_argument("--field", default="Q", help="Q | Qsqrt<k> | disc:<d>:h:<n>")
        p.add_argument("--digits", type=int, default=None, help="decimal digits (default NAZETA_DIGITS or 50)")

    ev = sub.add_parser("eval", help="evaluate one function value")
    common(ev)
    ev.add_argument("--kind", required=True, choices=["zeta", "xi", "dedekind", "rank2", "rank2T", "eisenstein"])
    ev.add_argument("--s", required=True, help="re,im")
    ev.add_argument("--T", default=None)
    ev.add_argument("--z", default=None, help="re,im (eisenstein only)")
    ev.set_defaults(func=cmd_eval)

    for name, func, text in (("zeros", cmd_zeros, "list sign-change zeros on the critical line"),
                             ("certify", cmd_certify, "certify a box by the argument principle")):
        z = sub.add_parser(name, help=text)
        common(z)
        z.add_argument("--tmax", required=True)
        z.add_argument("--T", default=None)
        z.add_argument("--out", default=None, help="CSV path for the zero list")
        z.add_argument("--jobs", type=int, default=1)
        z.set_defaults(func=func)

    la = sub.add_parser("lattice", help="rank-two lattice invariants")
    la.add_argument("action", choices=["h0", "h1", "deg", "stable", "cusps"])
    common(la)
    la.add_argument("--tau", required=True, help="x,y over Q; re(z),im(z),r over imaginary quadratic K")
    la.add_argument("--scale", default="1")
    la.add_argument("--twist", type=int, default=None, help="index of the reduced form giving the ideal a")
    la.add_argument("--threshold", default="1", help="mu threshold for the cusps action")
    la.set_defaults(func=cmd_lattice)

    ve = sub.add_parser("verify", help="run a verification suite")
    ve.add_argument("--suite", default="all", choices=sorted(verify.SUITES))
    ve.add_argument("--digits", type=int, default=None)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--jobs", type=int, default=1)
    ve.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on malformed flags
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"nazeta: {exc}\n")
        return EXIT_USAGE
    except (NazetaError, ValueError) as exc:
        _emit({"schema": SCHEMA, "command": args.command, "error": type(exc).__name__, "message": str(exc)})
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
