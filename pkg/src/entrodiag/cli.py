"""Command-line interface: every analysis reachable as a subcommand, with
CSV/JSON output suitable for plotting scripts and CI.

Exit codes: 0 success, 1 invalid input (bad flags, malformed matrices),
2 numerical failure (no convergence / infeasible / search budget).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import conjectures as cj
from .entropy import dual_order
from .equality import (check_equality_state, find_equality_supports,
                       fourier_equality_states, overlap_data)
from .errors import BadUnitary, InvalidInput, NumericalFailure, UnknownName
from .frontier import (d2_exact_curve, englert_curve, extremality_residual,
                       pareto_lower, sample_diagram)
from .numerics import SeededRng
from .observables import (AbelianGroup, ObservablePair, builtin,
                          fourier_cyclic, fourier_group, load_unitary,
                          random_unitary)
from .selftest import run_selftest

FMT = "%.12g"


def parse_unitary(spec: str, force: bool = False) -> ObservablePair:
    """Resolve a unitary spec: fourier:<d>, group:<n1>x<n2>[x...], c6,
    example3, random:<seed>:<d>, file:<path>."""
    if spec in ("c6", "example3"):
        return builtin(spec)
    kind, _, rest = spec.partition(":")
    try:
        if kind == "fourier":
            return fourier_cyclic(int(rest))
        if kind == "group":
            orders = tuple(int(x) for x in rest.split("x"))
            return fourier_group(AbelianGroup(orders))
        if kind == "random":
            seed, _, d = rest.partition(":")
            return random_unitary(int(d), SeededRng(int(seed)))
        if kind == "file":
            return load_unitary(rest, force=force)
    except ValueError as exc:
        raise UnknownName(f"malformed unitary spec {spec!r}: {exc}") from exc
    raise UnknownName(f"unknown unitary spec {spec!r}")


def load_state(path: str) -> np.ndarray:
    """State file: JSON array of [re, im] pairs (or bare reals)."""
    with open(path) as fh:
        obj = json.load(fh)
    try:
        psi = np.array([complex(e[0], e[1]) if isinstance(e, list) else
                        complex(e) for e in obj], dtype=complex)
    except (TypeError, IndexError, ValueError) as exc:
        raise BadUnitary(f"malformed state file {path}: {exc}") from exc
    nrm = np.linalg.norm(psi)
    if nrm <= 0:
        raise BadUnitary(f"state in {path} has zero norm")
    return psi / nrm


class _Writer:
    def __init__(self, out: str | None):
        self.fh = open(out, "w") if out else sys.stdout
        self.close_needed = out is not None

    def line(self, text: str):
        self.fh.write(text + "\n")

    def json(self, obj):
        json.dump(obj, self.fh, indent=1)
        self.fh.write("\n")

    def points(self, pts):
        self.line("h_x,h_y")
        for hx, hy in pts:
            self.line((FMT + "," + FMT) % (hx, hy))

    def done(self):
        if self.close_needed:
            self.fh.close()


def _orders(args) -> tuple[float, float]:
    alpha = args.alpha
    beta = args.beta if args.beta is not None else dual_order(alpha)
    return alpha, beta


def _strategy(name: str) -> str:
    return name.replace("-", "_")


def cmd_mu(args, w: _Writer) -> int:
    pair = parse_unitary(args.unitary, args.force)
    data = overlap_data(pair)
    obj = {"unitary": pair.label, "c": data.c,
           "mu_bound_bits": data.mu_bound_bits, "inv_c2": data.inv_c2,
           "inv_c2_is_integer": data.inv_c2_is_integer}
    if args.format == "json":
        w.json(obj)
    else:
        w.line("c,mu_bound_bits,inv_c2,inv_c2_is_integer")
        w.line((FMT + "," + FMT + "," + FMT + ",%s")
               % (data.c, data.mu_bound_bits, data.inv_c2,
                  str(data.inv_c2_is_integer).lower()))
    return 0


def cmd_diagram(args, w: _Writer) -> int:
    pair = parse_unitary(args.unitary, args.force)
    alpha, beta = _orders(args)
    # exactly --samples output rows; equality corners opt-in here
    sample = sample_diagram(pair, alpha, beta, args.samples,
                            _strategy(args.strategy), SeededRng(args.seed),
                            include_equality=args.include_equality)
    if args.format == "json":
        w.json({"meta": sample.meta,
                "points": [[float(a), float(b)] for a, b in sample.points]})
    else:
        w.points(sample.points)
    return 0


def cmd_frontier(args, w: _Writer) -> int:
    pair = parse_unitary(args.unitary, args.force)
    alpha, beta = _orders(args)
    sample = sample_diagram(pair, alpha, beta, args.samples,
                            _strategy(args.strategy), SeededRng(args.seed))
    curve = pareto_lower(sample.points)
    if args.format == "json":
        w.json({"meta": sample.meta,
                "frontier": [[float(a), float(b)] for a, b in curve.points]})
    else:
        w.points(curve.points)
    return 0


def cmd_equality(args, w: _Writer) -> int:
    if args.mode == "scan":
        pair = parse_unitary(args.unitary, args.force)
        shapes = None
        if args.shape:
            a, _, b = args.shape.partition("x")
            shapes = [(int(a), int(b))]
        scan = find_equality_supports(pair, tol=args.tol, shapes=shapes)
        if args.format == "json":
            w.json({"unitary": pair.label,
                    "supports": [{"sX": list(sp.sX), "sY": list(sp.sY)}
                                 for sp in scan.pairs],
                    "candidates": scan.total_candidates})
        else:
            w.line(f"{len(scan.pairs)} equality supports among "
                   f"{scan.total_candidates} candidates")
            for sp in scan.pairs:
                w.line(f"sX={list(sp.sX)} sY={list(sp.sY)}")
        return 0
    if args.mode == "fourier":
        orders = tuple(int(x) for x in args.group.split("x"))
        G = AbelianGroup(orders)
        entries = fourier_equality_states(G)
        if args.format == "json":
            w.json([{"subgroup": [list(e) for e in L],
                     "point": [point.hx, point.hy],
                     "family_size": len(family)}
                    for L, point, family in entries])
        else:
            w.points([(p.hx, p.hy) for _, p, _ in entries])
        return 0
    # mode == "check"
    pair = parse_unitary(args.unitary, args.force)
    psi = load_state(args.state)
    alpha, beta = _orders(args)
    report = check_equality_state(pair, psi, alpha, beta, tol=args.tol)
    if args.format == "json":
        w.json(report.to_json_obj())
    else:
        w.line("verdict,deficit")
        w.line(("%s," + FMT) % (str(report.is_equality).lower(),
                                report.deficit))
    return 0


def cmd_extremality(args, w: _Writer) -> int:
    psi = load_state(args.state)
    r, max_abs = extremality_residual(psi, args.alpha)
    if args.format == "json":
        w.json({"residual": [float(x) for x in r],
                "max_abs": float(max_abs), "alpha": args.alpha})
    else:
        w.line("residual")
        for x in r:
            w.line(FMT % x)
    return 0


def cmd_d2(args, w: _Writer) -> int:
    pair = parse_unitary(args.unitary, args.force)
    alpha, beta = _orders(args)
    curve = d2_exact_curve(pair, alpha, beta, m=args.points)
    if args.format == "json":
        w.json({"unitary": pair.label,
                "curve": [[float(a), float(b)] for a, b in curve.points]})
    else:
        w.points(curve.points)
    return 0


def cmd_englert(args, w: _Writer) -> int:
    alpha, beta = _orders(args)
    curve, n_eq = englert_curve(args.dim, alpha, beta, m=args.points)
    if args.format == "json":
        w.json({"dim": args.dim, "mu_equality_points": n_eq,
                "curve": [[float(a), float(b)] for a, b in curve.points]})
    else:
        w.points(curve.points)
    return 0


def cmd_conjecture(args, w: _Writer) -> int:
    n = args.samples
    if args.which == 1:
        report = cj.probe_product_states(
            parse_unitary(args.unitary, args.force),
            parse_unitary(args.unitary2 or args.unitary, args.force),
            args.alpha, args.beta if args.beta is not None
            else dual_order(args.alpha), n, args.threshold, seed=args.seed)
    elif args.which == 2:
        report = cj.probe_fourier_decomposition(
            args.d1, args.d2, args.alpha,
            args.beta if args.beta is not None else dual_order(args.alpha),
            n, args.threshold, seed=args.seed)
    elif args.which == 3:
        others = []
        for spec in args.other or ["0.75:1.5"]:
            a, _, b = spec.partition(":")
            others.append((float(a), float(b)))
        report = cj.probe_alpha_independence(
            parse_unitary(args.unitary, args.force),
            (args.alpha, args.beta if args.beta is not None
             else dual_order(args.alpha)),
            others, n, args.threshold, seed=args.seed)
    else:
        report = cj.probe_rrs_sufficiency(
            args.dim, args.alpha,
            args.beta if args.beta is not None else dual_order(args.alpha),
            n, args.threshold, seed=args.seed)
    if args.format == "csv":
        obj = report.to_json_obj()
        w.line(",".join(obj.keys()))
        w.line(",".join((FMT % v) if isinstance(v, float) else str(v)
                        for v in obj.values()))
    else:
        w.json(report.to_json_obj())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="entrodiag",
        description="entropy diagrams and uncertainty bounds for pairs of "
                    "finite observables")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, unitary=True):
        if unitary:
            sp.add_argument("--unitary", required=True,
                            help="fourier:<d> | group:<n1>x<n2> | c6 | "
                                 "example3 | random:<seed>:<d> | file:<path>")
        sp.add_argument("--alpha", type=float, default=1.0)
        sp.add_argument("--beta", type=float, default=None,
                        help="defaults to the dual order of --alpha")
        sp.add_argument("--samples", type=int, default=1000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--strategy", default="haar",
                        choices=["haar", "real", "rrs", "basis-mix"])
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--format", default="csv", choices=["csv", "json"])
        sp.add_argument("--out", default=None)
        sp.add_argument("--threads", type=int, default=1,
                        help="accepted for interface stability; execution "
                             "is single-threaded and deterministic")
        sp.add_argument("--force", action="store_true",
                        help="accept file matrices with unitarity defect "
                             "above 1e-8 (projected back onto a unitary)")

    sp = sub.add_parser("mu", help="overlap c and the MU bound")
    common(sp)
    sp.set_defaults(fn=cmd_mu)

    sp = sub.add_parser("diagram", help="sampled entropy pairs")
    common(sp)
    sp.add_argument("--include-equality", action="store_true",
                    help="append the exactly known equality states")
    sp.set_defaults(fn=cmd_diagram)

    sp = sub.add_parser("frontier", help="Pareto frontier of a sample")
    common(sp)
    sp.set_defaults(fn=cmd_frontier)

    sp = sub.add_parser("equality", help="equality states and supports")
    modes = sp.add_subparsers(dest="mode", required=True)
    m = modes.add_parser("scan", help="exhaustive support scan")
    common(m)
    m.add_argument("--shape", default=None, help="restrict to AxB supports")
    m.set_defaults(fn=cmd_equality)
    m = modes.add_parser("fourier", help="abelian-group equality enumeration")
    common(m, unitary=False)
    m.add_argument("--group", required=True, help="e.g. 4 or 2x3")
    m.set_defaults(fn=cmd_equality)
    m = modes.add_parser("check", help="verdict for a given state")
    common(m)
    m.add_argument("--state", required=True, help="JSON state file")
    m.set_defaults(fn=cmd_equality)

    sp = sub.add_parser("extremality", help="Fourier stationarity residual")
    common(sp, unitary=False)
    sp.add_argument("--state", required=True, help="JSON state file")
    sp.set_defaults(fn=cmd_extremality)

    sp = sub.add_parser("d2", help="exact qubit curve")
    common(sp)
    sp.add_argument("--points", type=int, default=512)
    sp.set_defaults(fn=cmd_d2)

    sp = sub.add_parser("englert", help="Englert one-parameter family curve")
    common(sp, unitary=False)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--points", type=int, default=512)
    sp.set_defaults(fn=cmd_englert)

    sp = sub.add_parser("conjecture", help="numerical conjecture probes")
    sp.add_argument("which", type=int, choices=[1, 2, 3, 4])
    common(sp, unitary=False)
    sp.add_argument("--unitary", default="fourier:2")
    sp.add_argument("--unitary2", default=None)
    sp.add_argument("--d1", type=int, default=2)
    sp.add_argument("--d2", type=int, default=2)
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--other", action="append",
                    help="additional order pair a:b (probe 3)")
    sp.add_argument("--threshold", type=float, default=0.05)
    sp.set_defaults(fn=cmd_conjecture)

    sp = sub.add_parser("selftest", help="run the acceptance battery")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--probe-json", default=None,
                    help="archive raw probe deviations to this JSON file")
    sp.set_defaults(fn=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "selftest":
            return run_selftest(quick=args.quick, probe_json=args.probe_json)
        w = _Writer(args.out)
        try:
            return args.fn(args, w)
        finally:
            w.done()
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
