"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import certificate, game, kn, relaxation, search, serialize
from .serialize import rat

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
DEFAULT_MAX_K = 15


class CapExceeded(Exception):
    pass


class UsageError(Exception):
    pass


def max_k() -> int:
    raw = os.environ.get("RENDEZVOUS_MAX_K")
    if raw is None:
        return DEFAULT_MAX_K
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RENDEZVOUS_MAX_K must be an integer, got {raw!r}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _report(command, inputs, exact, display=None, verdict=None, started=None) -> dict:
    return {
        "schema": "rendezvous-k3/report",
        "version": serialize.SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "exact": exact,
        "display_only": display or {},
        "verdict": verdict,
        "timing_s": None if started is None else round(time.perf_counter() - started, 6),
    }


def _emit(args, report: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(lines))


# ---------------------------------------------------------------------------

def cmd_certify(args) -> int:
    started = time.perf_counter()
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    if args.k > max_k():
        raise CapExceeded(f"k={args.k} exceeds the cap {max_k()} (set RENDEZVOUS_MAX_K)")
    cert = certificate.certify(args.k)
    if args.emit_certificate:
        serialize.write_certificate(cert, args.emit_certificate)
    verdict = "PASS" if cert.passed else "FAIL"
    sr = cert.spectrum
    exact = {
        "bound": rat(cert.bound),
        "w_k": rat(cert.expected),
        "spectrum_min": rat(sr.minimum),
        "schedule": [rat(a) for a in cert.schedule.values],
    }
    if cert.t_values is not None:
        exact["t_values"] = [rat(t) for t in cert.t_values.direct]
    report = _report(
        "certify", {"k": args.k}, exact,
        display={"bound": float(cert.bound), "zero_fraction": sr.zeros / sr.size,
                 "three_halves_fraction": sr.three_halves / sr.size},
        verdict={"status": verdict, "domination": cert.domination_ok,
                 "spectrum": cert.spectrum_ok, "failures": cert.failures,
                 "spectrum_method": sr.method},
        started=started,
    )
    lines = [
        f"k = {args.k}",
        f"bound {rat(cert.bound)}  (~{float(cert.bound):.8f}, display only)",
        f"m_k >= x_k: {'ok' if cert.domination_ok else 'FAILED'}",
        f"U_k x_k >= 0: {'ok' if cert.spectrum_ok else 'FAILED'} (min {rat(sr.minimum)}, {sr.method})",
    ]
    lines += [f"failed: {f}" for f in cert.failures]
    lines.append(verdict)
    _emit(args, report, lines)
    return EXIT_OK if cert.passed else EXIT_FAIL


def _load_strategy(args):
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    if args.k > max_k():
        raise CapExceeded(f"k={args.k} exceeds the cap {max_k()}")
    src = args.strategy
    if src == "aw":
        return game.parametric_aw(args.k, args.stay if args.stay is not None else Fraction(1, 3))
    if args.stay is not None:
        raise UsageError("--stay only applies to --strategy aw")
    if src == "uniform":
        return game.uniform_distribution(args.k)
    try:
        p = serialize.read_strategy(src)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read strategy file {src!r}: {exc}")
    if p.level != args.k:
        raise UsageError(f"strategy file has level {p.level}, expected {args.k}")
    if not game.is_simplex(p):
        raise UsageError("strategy is not on the simplex (negative entry or sum != 1)")
    return p


def cmd_evaluate(args) -> int:
    started = time.perf_counter()
    p = _load_strategy(args)
    try:
        model = game.MeetingModel(args.epsilon)
    except ValueError as exc:
        raise UsageError(str(exc))
    value = game.quad_form_m(args.k, p, model)
    tails = game.tail_sequence(p, model)
    report = _report(
        "evaluate",
        {"k": args.k, "strategy": args.strategy, "epsilon": rat(args.epsilon),
         "stay": None if args.stay is None else rat(args.stay)},
        {"value": rat(value), "tail": [rat(t) for t in tails]},
        display={"value": float(value)},
        verdict={"status": "OK"},
        started=started,
    )
    lines = [f"E[min(T, k+1)] = {rat(value)}  (~{float(value):.8f})"]
    lines += [f"P(T > {i}) = {rat(t)}" for i, t in enumerate(tails, 1)]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_lp(args) -> int:
    started = time.perf_counter()
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    if args.export_sdpa:
        if args.k > relaxation.SDPA_MAX_K:
            raise CapExceeded(f"SDPA export is limited to k <= {relaxation.SDPA_MAX_K}")
        path, sidecar = relaxation.export_sdpa(args.k, args.export_sdpa)
        parsed = relaxation.parse_sdpa(path)
        exact_back = relaxation.load_exact_sidecar(sidecar)
        original = relaxation.build_sdp(args.k)
        ok = (exact_back.entries == original.entries and exact_back.c == original.c
              and parsed.block_struct == original.block_struct and parsed.m == original.m)
        report = _report("lp", {"k": args.k, "export_sdpa": str(path)},
                         {"constraints": parsed.m, "block_struct": parsed.block_struct},
                         verdict={"status": "OK" if ok else "FAIL", "parse_back": ok},
                         started=started)
        _emit(args, report, [f"wrote {path} and {sidecar}",
                             f"parse-back {'OK' if ok else 'FAILED'}"])
        return EXIT_OK if ok else EXIT_FAIL
    if args.k > relaxation.DENSE_LP_MAX_K:
        raise CapExceeded(f"dense LP solving is limited to k <= {relaxation.DENSE_LP_MAX_K}")
    w = certificate.w_value(args.k)
    if args.dual:
        sol = relaxation.solve_dual(args.k, symmetric=not args.literal)
        value = sol.objective
        exact = {"optimum": rat(value), "w_k": rat(w)}
        lines = [f"dual optimum {rat(value)}", f"w_k {rat(w)}"]
        agree = value == w
    else:
        sol, bound = relaxation.solve_primal(args.k)
        value = sol.objective
        exact = {"optimum": rat(value), "bound": rat(bound), "w_k": rat(w)}
        lines = [f"optimum {rat(value)}", f"bound {rat(bound)}"]
        agree = bound == w
    if not agree:
        lines.append("note: optimum differs from w_k")
    report = _report("lp", {"k": args.k, "dual": args.dual, "literal": args.literal}, exact,
                     display={"optimum": float(value)},
                     verdict={"status": "OK", "matches_w_k": agree, "pivots": sol.pivots},
                     started=started)
    _emit(args, report, lines)
    return EXIT_OK


def cmd_search(args) -> int:
    started = time.perf_counter()
    try:
        cfg = search.SearchConfig(k=args.k, restarts=args.restarts, seed=args.seed,
                                  snap_denominator_bound=args.snap_bound)
    except ValueError as exc:
        raise UsageError(str(exc))
    res = search.search_tail(cfg, threads=args.threads or 1)
    support = {str(i): rat(v) for i, v in enumerate(res.best_strategy) if v}
    report = _report(
        "search", {"k": args.k, "restarts": args.restarts, "seed": args.seed},
        {"value": rat(res.exact_value), "strategy": serialize.strategy_to_json(res.best_strategy)},
        display={"float_value": res.float_value, "best_restart": res.best_restart},
        verdict={"status": "OK", "note": "best found; not certified optimal"},
        started=started,
    )
    lines = [f"best P(T > {args.k}) = {rat(res.exact_value)}  (restart {res.best_restart})"]
    lines += [f"  p[{i}] = {v}" for i, v in support.items()]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_kn(args) -> int:
    started = time.perf_counter()
    if not kn.KN_MIN <= args.n <= kn.KN_MAX:
        raise UsageError(f"--n must lie in [{kn.KN_MIN}, {kn.KN_MAX}]")
    if args.optimize:
        res = kn.kn_aw_optimize(args.n)
    else:
        res = kn.kn_aw_evaluate(args.n, args.stay)
    report = _report(
        "kn", {"n": args.n, "optimize": args.optimize, "stay": args.stay},
        {"expected_time": None if res.exact_expected_time is None else rat(res.exact_expected_time)},
        display={"stay": res.stay_prob,
                 "expected_time": res.expected_time if res.meets else "inf",
                 "per_block_meet_dist": res.per_block_meet_dist},
        verdict={"status": "OK" if res.meets else "NO_MEETING"},
        started=started,
    )
    et = f"{res.expected_time:.6f}" if res.meets else "inf (players never meet)"
    _emit(args, report, [f"n = {args.n}", f"stay = {res.stay_prob:.6f}", f"ET = {et}"])
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rendezvous-k3",
                                     description="Exact certificates for symmetric rendezvous on K3.")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for parallelisable steps (default: all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="print a JSON report")

    p = sub.add_parser("certify", help="build and verify the certificate at level k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--emit-certificate", metavar="PATH")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("evaluate", help="exact E[min(T,k+1)] and tail probabilities")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--strategy", default="aw", help="aw, uniform, or a JSON strategy file")
    p.add_argument("--epsilon", type=_rational, default=Fraction(0))
    p.add_argument("--stay", type=_rational, default=None)
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("lp", help="solve the LP relaxation exactly or export the SDP")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--dual", action="store_true")
    p.add_argument("--literal", action="store_true",
                   help="dual without the y_i = y_i' symmetry rows")
    p.add_argument("--export-sdpa", metavar="PATH")
    common(p)
    p.set_defaults(func=cmd_lp)

    p = sub.add_parser("search", help="heuristic search for small P(T > k)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snap-bound", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("kn", help="Anderson-Weber strategy on K_n")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--optimize", action="store_true")
    g.add_argument("--stay", type=float)
    common(p)
    p.set_defaults(func=cmd_kn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = os.cpu_count() or 1
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
