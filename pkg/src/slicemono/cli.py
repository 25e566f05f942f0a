"""Command-line driver: ``verify``, ``eval`` and ``generate``.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage or configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .clifford import QUATERNION, make_structure, parse_multivector
from .errors import ConfigurationError, InvalidPointError, NumericalFailure, SliceError
from .series import ComplexSeries, SliceSeries, eval_series, eval_representation, ext
from .suite import RunConfig, all_passed, dumps, run_suite
from .verify.catalog import koebe_series, moebius_series, seed_catalog

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from exc


def cmd_verify(args) -> int:
    cfg = RunConfig(structure=args.structure, n=args.n if args.n is not None else 2, degree=args.degree,
                    points=args.samples, axes=args.axes, seed=args.seed, tol=args.tol, rmax=args.rmax,
                    out=args.out, jobs=args.jobs).validate()
    doc = run_suite(cfg)
    _write(dumps(doc), cfg.out)
    for check in doc["checks"]:
        status = "PASS" if check["pass"] else "FAIL"
        print(f"[{status}] {check['name']}: {check['max_residual']:.3e} (tol {check['tolerance']:.1e})",
              file=sys.stderr)
    return EXIT_OK if all_passed(doc) else EXIT_FAIL


def cmd_eval(args) -> int:
    f = SliceSeries.from_json(_load_json(args.series))
    s = f.structure
    try:
        coords = [float(v) for v in args.point]
    except ValueError as exc:
        raise InvalidPointError(f"point coordinates must be reals: {exc}") from exc
    x = s.point(coords)
    if np.linalg.norm(x.coeffs) > args.rmax:
        print(f"warning: |x| = {np.linalg.norm(x.coeffs):.4g} exceeds r_max = {args.rmax}; "
              "truncation tail is not controlled", file=sys.stderr)
    if args.representation:
        axis = s.check_axis(parse_multivector(s.ctx, args.axis or "e1"))
        value = eval_representation(f, axis, x)
    else:
        value = eval_series(f, x)
    print(json.dumps(value.to_json()))
    return EXIT_OK


def cmd_generate(args) -> int:
    n = args.n if args.n is not None else 2
    if args.kind == "moebius":
        s = make_structure(QUATERNION)
    else:
        s = make_structure(args.structure, n)
    ctx = s.ctx
    if args.kind == "koebe":
        axis = s.check_axis(parse_multivector(ctx, args.axis))
        f = koebe_series(s, axis, args.theta, args.degree)
    elif args.kind == "moebius":
        f = moebius_series(parse_multivector(ctx, args.a), parse_multivector(ctx, args.u), args.degree)
    elif args.kind == "catalog":
        entries = {e.label(): e for e in seed_catalog(s, args.degree)}
        entries.update({e.name: e for e in reversed(seed_catalog(s, args.degree))})
        if args.name not in entries:
            raise ConfigurationError(f"unknown catalog entry {args.name!r}; known: {sorted(entries)}")
        f = entries[args.name].series
    else:
        if not args.coeffs:
            raise ConfigurationError("generate ext needs --coeffs")
        axis = s.check_axis(parse_multivector(ctx, args.axis))
        f = ext(ComplexSeries.from_json(_load_json(args.coeffs)), axis, s)
    _write(json.dumps(f.to_json()) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="slicemono", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the verification suite and write a JSON report")
    v.add_argument("--structure", choices=["paravector", "quaternion"], default="quaternion")
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--degree", type=int, default=128)
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--axes", type=int, default=32)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--rmax", type=float, default=0.95)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate a series file at a point")
    e.add_argument("series")
    e.add_argument("point", nargs="+", help="n+1 reals (paravector) or 4 reals (quaternion)")
    e.add_argument("--representation", action="store_true")
    e.add_argument("--axis", default=None)
    e.add_argument("--rmax", type=float, default=0.95)
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("generate", help="write a series file")
    g.add_argument("kind", choices=["koebe", "moebius", "catalog", "ext"])
    g.add_argument("--structure", choices=["paravector", "quaternion"], default="quaternion")
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--degree", type=int, default=128)
    g.add_argument("--theta", type=float, default=0.0)
    g.add_argument("--axis", default="e1")
    g.add_argument("--a", default="0")
    g.add_argument("--u", default="1")
    g.add_argument("--name", default="koebe")
    g.add_argument("--coeffs", default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "structure", None) == "paravector" and args.n is None:
        parser.error("--n is required for the paravector structure")
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SliceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
