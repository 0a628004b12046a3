"""``slecoef`` command line: moments, spectrum, mc, verify.

Exit status: 0 success, 2 usage error, 3 numeric or solver failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import kernels, mc, spectrum, verify
from .arith import rational_parse, render
from .cache import ResultCache, RunManifest
from .errors import ParseError, SlecoefError, UsageError
from .solver import MomentMatrix, bandwidth, solve_two_point
from .stencil import EXTERIOR, INTERIOR, EtaSequence, Params

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4


def _rational(text: str) -> Fraction:
    try:
        return rational_parse(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _stable(text: str) -> tuple[float, float]:
    try:
        alpha, c = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected ALPHA,C such as 1.5,3") from None
    return alpha, c


def _dumps(obj) -> bytes:
    return (json.dumps(obj, indent=1) + "\n").encode()


def _emit(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())


def _load_eta(path: str) -> EtaSequence:
    try:
        return EtaSequence.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read eta file: {exc}") from None


def cmd_moments(args, cache: ResultCache) -> int:
    if args.eta:
        eta = _load_eta(args.eta)
        params = Params.levy(args.q, eta, args.mode)
    else:
        params = Params.brownian(args.q, args.kappa, args.mode)
    manifest = RunManifest("moments", {**params.to_json(), "nmax": args.nmax, "backend": args.backend})
    data = cache.fetch(
        manifest,
        lambda: _dumps(solve_two_point(params, args.nmax, args.backend).to_json()),
        enabled=not args.no_cache,
    )
    m = MomentMatrix.from_json(json.loads(data))
    if args.out:
        _emit(data if args.format == "json" else m.to_csv().encode(), args.out)
    if params.q == 2:
        print("n,moment")
        for n in m.indices():
            print(f"{n},{m._value_str(m[n, n])}")
    print(f"bandwidth: {bandwidth(m)}")
    return EXIT_OK


def cmd_spectrum(args, cache: ResultCache) -> int:
    if args.family is not None:
        points = [(p.q, p.kappa, f"family-N{p.N}-n{p.n}") for p in spectrum.family_points(args.family)]
        eta = None
    else:
        if args.q is None or (args.kappa is None and args.eta is None):
            raise UsageError("give --q with --kappa or --eta, or --family NMAX")
        eta = _load_eta(args.eta) if args.eta else None
        points = [(args.q, args.kappa, None)]
    params = {
        "points": [[render(q), render(k) if k is not None else None, tag] for q, k, tag in points],
        "eta": eta.to_json() if eta is not None else None,
        "L": args.L,
        "fit_nmax": args.fit_nmax,
    }

    def compute() -> bytes:
        rows = []
        for q, kappa, tag in points:
            r = spectrum.compute_spectrum(q, kappa, eta=eta, L=args.L, fit_nmax=args.fit_nmax)
            if tag:
                r.flags.append(tag)
            rows.append(r)
        return spectrum.spectrum_csv(rows).encode()

    data = cache.fetch(RunManifest("spectrum", params), compute, enabled=not args.no_cache)
    _emit(data, args.out)
    return EXIT_OK


def _reference_table(path: str) -> dict[int, float]:
    """Accept a ``moments`` JSON document or a plain {"n": value} mapping."""
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read reference table: {exc}") from None
    if isinstance(obj, dict) and "entries" in obj:
        m = MomentMatrix.from_json(obj)
        return {n: float(m[n, n]) for n in m.indices() if n >= 2}
    if isinstance(obj, dict):
        return {int(k): float(rational_parse(str(v))) for k, v in obj.items()}
    raise UsageError("reference table must be a JSON object")


def cmd_mc(args, cache: ResultCache) -> int:
    config = mc.McConfig(
        nmax=args.nmax, paths=args.paths, seed=args.seed,
        kappa=args.kappa, stable=args.stable, dt=args.dt, T=args.T,
    )
    reference = _reference_table(args.check) if args.check else None
    data = cache.fetch(
        # the compiled and fallback integrators differ in the last bits
        RunManifest("mc", {**config.to_json(), "kernel": kernels.BACKEND}),
        lambda: _dumps(mc.run(config).to_json()),
        enabled=not args.no_cache,
    )
    _emit(data, args.out)
    if reference is not None:
        doc = json.loads(data)
        bad = []
        for row in doc["estimates"]:
            ref = reference.get(row["n"])
            if ref is not None and abs(row["mean"] - ref) > 3 * row["stderr"]:
                bad.append(row["n"])
        if bad:
            print(f"check failed: estimates off by more than 3 sigma at n = {bad}", file=sys.stderr)
            return EXIT_VERIFY
        print("check passed", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args, cache: ResultCache) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    for name in names:
        for check in verify.run_suite(name):
            print(f"[{name}] {check.line()}")
            failed += not check.passed
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-cache", action="store_true", help="recompute and do not store results")
    p = argparse.ArgumentParser(prog="slecoef", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("moments", parents=[common], help="two-point moment matrix rho_ij")
    m.add_argument("--mode", choices=[INTERIOR, EXTERIOR], default=INTERIOR)
    m.add_argument("--q", type=_rational, required=True)
    g = m.add_mutually_exclusive_group(required=True)
    g.add_argument("--kappa", type=_rational)
    g.add_argument("--eta", metavar="FILE", help='JSON {"eta": [...]} or {"stable": {"c": .., "alpha": ..}}')
    m.add_argument("--nmax", type=int, required=True)
    m.add_argument("--backend", default="exact", help="exact or float:BITS")
    m.add_argument("--format", choices=["json", "csv"], default="json")
    m.add_argument("--out", metavar="PATH")
    m.set_defaults(func=cmd_moments)

    s = sub.add_parser("spectrum", parents=[common], help="beta by formula, eigenvalue and diagonal fit")
    s.add_argument("--q", type=_rational)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--kappa", type=_rational)
    g.add_argument("--eta", metavar="FILE")
    g.add_argument("--family", type=int, metavar="NMAX", help="all banded truncation points with N <= NMAX")
    s.add_argument("--L", type=int, default=100)
    s.add_argument("--fit-nmax", type=int, default=400)
    s.add_argument("--out", metavar="PATH")
    s.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("mc", parents=[common], help="Monte Carlo coefficient moments")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--kappa", type=float)
    g.add_argument("--stable", type=_stable, metavar="ALPHA,C")
    c.add_argument("--nmax", type=int, default=5)
    c.add_argument("--paths", type=int, default=10_000)
    c.add_argument("--dt", type=float, default=1e-3)
    c.add_argument("--T", type=float, default=12.0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--check", metavar="FILE", help="reference moments; exit 4 beyond 3 sigma")
    c.add_argument("--out", metavar="PATH")
    c.set_defaults(func=cmd_mc)

    v = sub.add_parser("verify", help="run a self-check suite")
    v.add_argument("suite", choices=[*verify.SUITES, "all"])
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, ResultCache())
    except UsageError as exc:
        print(f"slecoef: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SlecoefError as exc:
        print(f"slecoef: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
