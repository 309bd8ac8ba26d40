"""Command-line interface: ``polycurvelets <command> [<subcommand>] [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource error.
Every verification command ends with one JSON verdict line on stdout.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .autocorr import autocorr_curve
from .curvelets import build_spectrum, localization_grid_max, profile
from .edgelab import (
    ZonalTestSignal,
    asymptotic_report,
    detection_scan,
)
from .frames import (
    DEFAULT_ATOM_CAP,
    ResourceError,
    analyze,
    build_frame_grid,
    spectral_admissibility_defect,
    synthesize,
)
from .geometry import random_sphere_points
from .harmonics import HarmonicCoefficients, addition_kernel, eval_Y
from .quadrature import exactness_report, product_rule, write_rule_csv
from .specfun import HarmonicIndex, index_set
from .windows import make_window, nonvanishing_check

THREADS_ENV = "POLYCURVELETS_THREADS"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _verdict(suite: str, passed: bool, **fields) -> int:
    payload = {"suite": suite, "passed": bool(passed), **fields}
    print(json.dumps(payload, sort_keys=True, default=float))
    return EXIT_OK if passed else EXIT_FAIL


def _window(args):
    try:
        return make_window(args.window, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _rng(args):
    return np.random.default_rng(args.seed)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


# -------------------------------------------------------------------- signals


def parse_signal(spec: str, d: int):
    """Turn ``kind:key=value,...`` into ``(callable, polynomial degree or None)``.

    Kinds: ``cap:r=..,tau=..``, ``random:degree=..,seed=..``, ``exp``,
    ``harmonic:n=..,k=a/b/..``.
    """
    kind, _, rest = spec.partition(":")
    opts = {}
    for item in filter(None, rest.split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"malformed signal option {item!r}")
        opts[key.strip()] = val.strip()
    try:
        if kind == "cap":
            from .edgelab import signal_eval

            sig = ZonalTestSignal(d, float(opts.get("r", math.pi / 3)), int(opts.get("tau", 0)))
            return (lambda x: signal_eval(sig, x)), None
        if kind == "random":
            deg = int(opts.get("degree", 4))
            rng = np.random.default_rng(int(opts.get("seed", 0)))
            f = HarmonicCoefficients.random(rng, d, deg)
            return f.evaluate, deg
        if kind == "exp":
            return (lambda x: np.exp(np.asarray(x)[..., -1])), None
        if kind == "harmonic":
            n = int(opts["n"])
            k = tuple(int(v) for v in opts.get("k", "/".join(["0"] * (d - 2))).split("/"))
            idx = HarmonicIndex(d, n, k)
            return (lambda x: eval_Y(idx, x)), n
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad signal spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown signal kind {kind!r}")


# ------------------------------------------------------------------- commands


def cmd_curvelet_profile(args) -> int:
    w = _window(args)
    s = build_spectrum(args.d, args.j, w)
    t = np.linspace(0.0, math.pi, args.grid)
    ph = np.linspace(0.0, 2 * math.pi, args.grid, endpoint=False)
    T, P = np.meshgrid(t, ph, indexing="ij")
    vals = profile(s, T, P)
    rows = zip(T.ravel(), P.ravel(), vals.ravel())
    if args.out:
        _write_csv(args.out, ["t", "varphi", "value"], rows)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(["t", "varphi", "value"])
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])
    return EXIT_OK


def cmd_frame_analyze(args) -> int:
    w = _window(args)
    f, deg = parse_signal(args.input, args.d)
    grid = build_frame_grid(args.d, args.J, w, cap=args.atom_cap)
    N = (deg if deg is not None else 2**args.J) + 2**args.J
    rule = product_rule(args.d, N)
    coeffs = analyze(f, grid, rule)
    rows = []
    for j, c in enumerate(coeffs):
        ns = 1 if j == 0 else len(grid.rules[j][1])
        for idx, v in enumerate(c):
            r, s = divmod(idx, ns)
            rows.append((j, r, s, float(v.real), float(v.imag)))
    if args.out:
        _write_csv(args.out, ["j", "r", "s", "re", "im"], rows)
    energy = float(sum(np.sum(np.abs(c) ** 2) for c in coeffs))
    print(f"analyzed {len(grid)} atoms on {rule.construction}", file=sys.stderr)
    print(json.dumps({"suite": "frame-analyze", "atoms": len(grid), "energy": energy,
                      "rule": rule.construction}, sort_keys=True))
    return EXIT_OK


def cmd_frame_verify(args) -> int:
    w = _window(args)
    rng = _rng(args)
    grid = build_frame_grid(args.d, args.J, w, cap=args.atom_cap)
    deg = max(2 ** (args.J - 1), 0) if args.J >= 1 else 0
    rule = product_rule(args.d, deg + 2**args.J)
    defects, recon = [], []
    for _ in range(args.trials):
        f = HarmonicCoefficients.random(rng, args.d, deg)
        c = analyze(f, grid, rule)
        e = float(sum(np.sum(np.abs(x) ** 2) for x in c))
        defects.append(abs(e - f.norm_sq()) / f.norm_sq())
        x = random_sphere_points(rng, 100, args.d)
        recon.append(float(np.max(np.abs(synthesize(c, grid, x) - f.evaluate(x)))))
    worst, worst_rec = max(defects), max(recon)
    print(f"max relative Parseval defect {worst:.3e}; max reconstruction error {worst_rec:.3e}",
          file=sys.stderr)
    return _verdict("frame-verify-parseval", worst < 1e-8 and worst_rec < 1e-7,
                    d=args.d, J=args.J, trials=args.trials, max_relative_defect=worst,
                    max_reconstruction_error=worst_rec, atoms=len(grid), rule=rule.construction)


def cmd_autocorr(args) -> int:
    w = _window(args)
    curve = autocorr_curve(args.d, args.j, w, args.samples, brute=not args.no_brute)
    head = "gamma" if args.d == 3 else "t"
    bf = curve.brute_force if curve.brute_force is not None else np.full(len(curve.arg), np.nan)
    rows = zip(curve.arg, curve.closed_form, bf, curve.normalized)
    if args.out:
        _write_csv(args.out, [head, "closed_form", "brute_force", "normalized"], rows)
    if curve.brute_force is None:
        return _verdict("autocorr", True, d=args.d, j=args.j, checked=False)
    rel = float(np.max(np.abs(curve.closed_form - curve.brute_force) / np.abs(curve.closed_form[0])))
    print(f"max relative closed-form vs quadrature gap {rel:.3e}", file=sys.stderr)
    return _verdict("autocorr", rel < 1e-6, d=args.d, j=args.j, max_relative_error=rel)


def cmd_edge_scan(args) -> int:
    w = _window(args)
    sig = ZonalTestSignal(args.d, args.r, args.tau)
    s = build_spectrum(args.d, args.j, w)
    offsets = np.linspace(-args.span, args.span, args.grid)
    zs = np.linspace(args.zmin, 1.0, max(2, args.grid // 4))
    scan = detection_scan(s, sig, offsets, zs)
    rows = [(o, z, v) for o, row in zip(scan.offsets, scan.values) for z, v in zip(scan.zs, row)]
    if args.out:
        _write_csv(args.out, ["offset", "z", "coefficient"], rows)
    off, z, val = scan.peak()
    print(f"peak |coefficient| {abs(val):.4e} at offset {off:+.4f}, |z| = {z:.3f}", file=sys.stderr)
    print(json.dumps({"suite": "edge-scan", "peak_offset": off, "peak_z": z, "peak_value": val},
                     sort_keys=True))
    return EXIT_OK


def cmd_edge_slopes(args) -> int:
    w = _window(args)
    if not 3 <= args.jmin < args.jmax <= 10:
        raise UsageError("need 3 <= jmin < jmax <= 10")
    sig = ZonalTestSignal(args.d, args.r, args.tau)
    rep = asymptotic_report(args.d, w, sig, range(args.jmin, args.jmax + 1))
    data = rep.as_dict()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True, default=float)
    passed = rep.slope_rel_error < 0.1 and rep.interval is not None and rep.mismatch_monotone
    print(f"sup slope {rep.sup_slope:+.4f} (expected {rep.expected_slope:+.4f}); "
          f"interval {rep.interval}; decay exponent {rep.decay_exponent:.2f}", file=sys.stderr)
    return _verdict("edge-slopes", passed, d=args.d, tau=args.tau, sup_slope=rep.sup_slope,
                    expected_slope=rep.expected_slope, slope_rel_error=rep.slope_rel_error,
                    interval=rep.interval, mismatch_monotone=rep.mismatch_monotone)


def cmd_localization(args) -> int:
    w = _window(args)
    results, passed = {}, True
    for q in args.decay_q:
        maxima = [localization_grid_max(build_spectrum(args.d, j, w), q, args.grid)
                  for j in range(args.jmin, args.jmax + 1)]
        ratio = maxima[-1] / maxima[0]
        # the decay bound assumes kappa^(q) keeps a sign just right of 1/2; checked, not assumed
        hyp = nonvanishing_check(w, q)
        results[str(q)] = {"maxima": maxima, "last_over_first": ratio,
                           "derivative_sign_holds": hyp.passed, "derivative_sign_up_to": hyp.t0}
        passed &= ratio < 2.0
        print(f"q={q}: maxima {', '.join(f'{m:.3g}' for m in maxima)}; ratio {ratio:.3f}",
              file=sys.stderr)
    return _verdict("localization-check", passed, d=args.d, results=results)


def run_selftest(d: int, quick: bool, w) -> dict:
    checks = {}
    N = 256 if quick else 1024
    checks["admissibility"] = spectral_admissibility_defect(d, w, N)
    qN = {3: 32, 4: 16, 5: 8}.get(d, 4) if quick else {3: 64, 4: 32, 5: 16}.get(d, 8)
    checks["quadrature"] = exactness_report(product_rule(d, qN))
    rng = np.random.default_rng(0)
    pairs = 20 if quick else 100
    nmax = 8 if quick else 24
    a, b = random_sphere_points(rng, pairs, d), random_sphere_points(rng, pairs, d)
    err = 0.0
    for n in range(nmax + 1):
        tot = np.zeros(pairs, dtype=complex)
        for idx in index_set(d, n):
            tot += np.conj(eval_Y(idx, a)) * eval_Y(idx, b)
        err = max(err, float(np.max(np.abs(tot - addition_kernel(d, n, np.sum(a * b, axis=1))))))
    checks["addition_theorem"] = err
    limits = {"admissibility": 1e-12, "quadrature": 1e-12, "addition_theorem": 1e-10}
    return {k: {"value": v, "limit": limits[k], "passed": v < limits[k]} for k, v in checks.items()}


def cmd_selftest(args) -> int:
    w = _window(args)
    res = run_selftest(args.d, args.quick, w)
    for k, v in res.items():
        print(f"{k:>18}: {v['value']:.3e} (< {v['limit']:.0e}) {'ok' if v['passed'] else 'FAIL'}",
              file=sys.stderr)
    return _verdict("selftest", all(v["passed"] for v in res.values()), d=args.d, checks=res)


def cmd_quadrature_export(args) -> int:
    rule = product_rule(args.d, args.N)
    write_rule_csv(rule, args.out)
    print(json.dumps({"suite": "quadrature-export", "points": len(rule),
                      "rule": rule.construction}, sort_keys=True))
    return EXIT_OK


# --------------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with option defaults (flags override)")
    common.add_argument("--window", default="smooth_bump", choices=["smooth_bump", "spline_q"])
    common.add_argument("--q", type=int, default=3, help="smoothness order of spline_q")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--atom-cap", type=int, default=DEFAULT_ATOM_CAP)

    p = _Parser(prog="polycurvelets", description="Polynomial curvelet frames on spheres.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    cur = sub.add_parser("curvelet").add_subparsers(dest="action", parser_class=_Parser, required=True)
    c = cur.add_parser("profile", parents=[common], help="profile grid as CSV (t, varphi, value)")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--j", type=int, default=4)
    c.add_argument("--grid", type=int, default=101)
    c.add_argument("--out")
    c.set_defaults(func=cmd_curvelet_profile)

    fr = sub.add_parser("frame").add_subparsers(dest="action", parser_class=_Parser, required=True)
    c = fr.add_parser("analyze", parents=[common], help="frame coefficients as CSV (j, r, s, re, im)")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--J", type=int, default=3)
    c.add_argument("--input", default="random:degree=4,seed=0")
    c.add_argument("--out")
    c.set_defaults(func=cmd_frame_analyze)
    c = fr.add_parser("verify-parseval", parents=[common], help="Parseval check on random signals")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--J", type=int, default=3)
    c.add_argument("--trials", type=int, default=10)
    c.set_defaults(func=cmd_frame_verify)

    c = sub.add_parser("autocorr", parents=[common], help="auto-correlation curve as CSV")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--j", type=int, default=3)
    c.add_argument("--samples", type=int, default=33)
    c.add_argument("--no-brute", action="store_true", help="skip the quadrature column")
    c.add_argument("--out")
    c.set_defaults(func=cmd_autocorr)

    ed = sub.add_parser("edge").add_subparsers(dest="action", parser_class=_Parser, required=True)
    c = ed.add_parser("scan", parents=[common], help="coefficients over (offset, |z|) as CSV")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--j", type=int, default=6)
    c.add_argument("--r", type=float, default=math.pi / 3)
    c.add_argument("--tau", type=int, default=0)
    c.add_argument("--grid", type=int, default=201)
    c.add_argument("--span", type=float, default=0.5, help="largest |offset| in radians")
    c.add_argument("--zmin", type=float, default=0.8)
    c.add_argument("--out")
    c.set_defaults(func=cmd_edge_scan)
    c = ed.add_parser("slopes", parents=[common], help="detection asymptotics report as JSON")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--tau", type=int, default=0)
    c.add_argument("--r", type=float, default=math.pi / 3)
    c.add_argument("--jmin", type=int, default=4)
    c.add_argument("--jmax", type=int, default=8)
    c.add_argument("--out")
    c.set_defaults(func=cmd_edge_slopes)

    lo = sub.add_parser("localization").add_subparsers(dest="action", parser_class=_Parser, required=True)
    c = lo.add_parser("check", parents=[common], help="localization ratio trend over scales")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--jmin", type=int, default=4)
    c.add_argument("--jmax", type=int, default=8)
    c.add_argument("--decay-q", type=int, nargs="+", default=[1, 2, 3])
    c.add_argument("--grid", type=int, default=100)
    c.set_defaults(func=cmd_localization)

    c = sub.add_parser("selftest", parents=[common], help="admissibility, quadrature, addition theorem")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--quick", action="store_true")
    c.set_defaults(func=cmd_selftest)

    qu = sub.add_parser("quadrature").add_subparsers(dest="action", parser_class=_Parser, required=True)
    c = qu.add_parser("export", parents=[common], help="product rule as CSV (x1..xd, weight)")
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--N", type=int, default=8)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_quadrature_export)
    return p


def _flatten_config(cfg: dict) -> dict:
    out = {}
    for key, val in cfg.items():
        if key == "window" and isinstance(val, dict):
            if "kind" in val:
                out["window"] = val["kind"]
            if "q" in val:
                out["q"] = val["q"]
        else:
            out[key.replace("-", "_")] = val
    return out


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            with open(args.config) as fh:
                cfg = _flatten_config(json.load(fh))
            known = {k: v for k, v in cfg.items() if hasattr(args, k)}
            unknown = sorted(set(cfg) - set(known))
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(unknown)}")
            for k, v in known.items():
                if not _explicit(argv, k):
                    setattr(args, k, v)
        threads = os.environ.get(THREADS_ENV)
        if threads is not None and (not threads.isdigit() or int(threads) < 1):
            raise UsageError(f"{THREADS_ENV} must be a positive integer")
        return args.func(args)
    except UsageError as exc:
        print(f"polycurvelets: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"polycurvelets: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (OSError, ValueError) as exc:
        print(f"polycurvelets: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _explicit(argv, dest) -> bool:
    """Whether the flag for ``dest`` was given on the command line."""
    flag = "--" + dest.replace("_", "-")
    return any(a == flag or a.startswith(flag + "=") for a in argv)


def main() -> None:
    sys.exit(run())
