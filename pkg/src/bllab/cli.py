"""Command-line interface.

Six subcommands: ``construct`` synthesizes a window to JSON, ``analyze``
runs the full diagnostics pipeline, ``curve`` tabulates the trade-off
boundary, ``coeffs`` evaluates the oscillatory-weight Fourier coefficients,
``sweep`` maps constructibility over an (r, s) rectangle, and ``selftest``
runs the acceptance checks.

Heavy numeric imports happen inside the command handlers so that the
``BLLAB_THREADS`` environment variable can cap thread pools before numpy
and scipy initialize. All outputs are deterministic: fixed float formats,
sorted JSON keys, no timestamps. Errors print one JSON object on stderr;
exit codes are 0 (success), 1 (selftest failures), 2 (parameter errors,
including bad usage), 3 (numeric failures).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .errors import NumericError, ParameterError

_LIMITER = None  # keeps the threadpoolctl limiter alive for the process


def _configure_threads() -> None:
    raw = os.environ.get("BLLAB_THREADS")
    if not raw:
        return
    try:
        n = max(1, int(raw))
    except ValueError:
        raise ParameterError(f"BLLAB_THREADS must be an integer, got {raw!r}")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(var, str(n))
    import threadpoolctl

    global _LIMITER
    _LIMITER = threadpoolctl.threadpool_limits(limits=n)


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _spec_from_args(args) -> "WindowSpec":
    from .windows import WindowSpec

    constructed = args.kind in ("case_a", "case_b", "compact")
    K = args.K
    if K is None:
        K = args.N // 2 if constructed else 8
    # q, r, s parameterize the constructed kinds only; for gaussian and box
    # they are analysis inputs and live in the report, not the recipe
    q, r, s = (args.q, args.r, args.s) if constructed else (None, None, None)
    return WindowSpec(kind=args.kind, N=args.N, K=K, q=q, r=r, s=s,
                      eps=args.eps, eta=args.eta, sigma=args.sigma,
                      alpha=args.alpha, beta=args.beta)


def _add_spec_flags(sp, kind_required: bool) -> None:
    sp.add_argument("--kind", choices=("gaussian", "box", "case_a", "case_b",
                                       "compact"), required=kind_required,
                    help="window family to synthesize")
    sp.add_argument("--N", type=int, default=128,
                    help="samples per unit time (default 128)")
    sp.add_argument("--K", type=int, default=None,
                    help="half-support in periods (default N/2 for the "
                         "constructed kinds, else 8)")
    sp.add_argument("--q", type=float, default=None,
                    help="design exponent q >= 2 (inf allowed)")
    sp.add_argument("--r", type=float, default=None,
                    help="frequency localization exponent")
    sp.add_argument("--s", type=float, default=None,
                    help="time localization exponent (inf allowed)")
    sp.add_argument("--eps", type=float, default=None,
                    help="interior margin (default: derived)")
    sp.add_argument("--eta", type=float, default=0.1,
                    help="cutoff half-width (default 0.1)")
    sp.add_argument("--sigma", type=float, default=1.0,
                    help="gaussian width (default 1.0)")
    sp.add_argument("--alpha", type=float, default=None,
                    help="modulus exponent override")
    sp.add_argument("--beta", type=float, default=None,
                    help="power exponent override")


def _cmd_construct(args) -> int:
    from .windows import build
    from .zak import window_to_json

    spec = _spec_from_args(args)
    w = build(spec)
    payload = {"schema": "bllab.window/1", "spec": json.loads(spec.to_json())}
    payload.update(json.loads(window_to_json(w)))
    _emit(json.dumps(payload, sort_keys=True), args.out)
    return 0


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ParameterError(f"{flag} expects comma-separated integers, "
                             f"got {text!r}")


def _cmd_analyze(args) -> int:
    from .diagnostics import analyze
    from .windows import WindowSpec
    from .zak import window_from_json

    window = None
    if args.window is not None:
        if args.kind is not None:
            raise ParameterError("pass either --window or --kind, not both")
        with open(args.window) as fh:
            data = json.load(fh)
        try:
            spec = WindowSpec.from_json(json.dumps(data["spec"]))
            window = window_from_json(json.dumps(
                {k: data[k] for k in ("N", "K", "samples")}))
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed window file: {exc}")
    else:
        if args.kind is None:
            raise ParameterError("analyze needs --kind or --window")
        spec = _spec_from_args(args)

    r = args.r if args.r is not None else spec.r
    s = args.s if args.s is not None else spec.s
    q = args.q if args.q is not None else spec.q
    if s is None and spec.kind == "compact":
        s = math.inf
    if r is None or s is None or q is None:
        raise ParameterError("analyze needs r, s and q, from flags or from "
                             "the window spec")
    if args.N_list is not None:
        N_list = _parse_int_list(args.N_list, "--N-list")
    elif spec.N % 4 == 0 and spec.N >= 4 * 2 * min(spec.K, spec.N // 8):
        N_list = (spec.N // 4, spec.N // 2, spec.N)
    else:
        N_list = (spec.N,)
    report = analyze(spec, r, s, q, N_list=N_list, q_test=args.q_test,
                     seed=args.seed, window=window, probe_M=args.probe_M,
                     trials=args.trials)
    _emit(report.to_json(), args.out)
    return 0


def _cmd_curve(args) -> int:
    import numpy as np

    from .tradeoff import branch_coefficients, gamma_q

    if args.points < 2:
        raise ParameterError(f"need at least 2 points, got {args.points}")
    q = args.q
    c, d = branch_coefficients(q)
    lo, hi = d / 2.0, 1.0 / c
    corner = 0.25 if math.isinf(q) else (q + 2.0) / (4.0 * (q - 1.0))
    us = sorted({float(u) for u in np.linspace(lo, hi, args.points)}
                | {lo, corner, hi})
    rows = [(u, gamma_q(u, q), "diagonal" if u <= corner else "steep")
            for u in us]
    if args.format == "csv":
        lines = ["u,v,branch"]
        lines += [f"{u:.17g},{v:.17g},{b}" for u, v, b in rows]
        _emit("\n".join(lines), args.out)
    else:
        payload = {"schema": "bllab.curve/1",
                   "q": "inf" if math.isinf(q) else q,
                   "rows": [[u, v, b] for u, v, b in rows]}
        _emit(json.dumps(payload, sort_keys=True), args.out)
    return 0


def _cmd_coeffs(args) -> int:
    from .diagnostics import fourier_coeffs_fab, lq_partial_sums

    fine_N = args.fine_N if args.fine_N is not None else 8 * args.M
    grid = fourier_coeffs_fab(args.alpha, args.beta, args.M, fine_N,
                              part=args.part)
    if args.M_list is not None:
        m_list = _parse_int_list(args.M_list, "--M-list")
    else:
        m_list = []
        m = 2
        while m <= args.M:
            m_list.append(m)
            m *= 2
        if not m_list or m_list[-1] != args.M:
            m_list.append(args.M)
        m_list = tuple(m_list)
    sums = None
    if args.q is not None:
        trace, verdict = lq_partial_sums(grid, args.q, m_list)
        sums = {"q": "inf" if math.isinf(args.q) else args.q,
                "trace": [[int(mi), float(si)] for mi, si in trace],
                "verdict": verdict}
    rng = range(-args.M, args.M + 1)
    if args.format == "csv":
        lines = ["m,n,re,im"]
        lines += [f"{m},{n},{grid.at(m, n).real:.17g},{grid.at(m, n).imag:.17g}"
                  for m in rng for n in rng]
        _emit("\n".join(lines), args.out)
    else:
        payload = {"schema": "bllab.coeffs/1", "alpha": args.alpha,
                   "beta": args.beta, "M": args.M, "fine_N": fine_N,
                   "part": args.part, "err_estimate": grid.err_estimate,
                   "coeffs": [[[grid.at(m, n).real, grid.at(m, n).imag]
                               for n in rng] for m in rng]}
        if sums is not None:
            payload["partial_sums"] = sums
        _emit(json.dumps(payload, sort_keys=True), args.out)
    return 0


def _cmd_sweep(args) -> int:
    import numpy as np

    from .errors import OutOfSectorError
    from .tradeoff import classify
    from .windows import WindowSpec, derive_params

    if args.steps < 2:
        raise ParameterError(f"need at least 2 steps, got {args.steps}")
    rows = []
    for r in np.linspace(args.r_min, args.r_max, args.steps):
        for s in np.linspace(args.s_min, args.s_max, args.steps):
            u, v = 1.0 / r, 1.0 / s
            try:
                label = classify(u, v, args.q).classification
            except OutOfSectorError:
                rows.append((r, s, u, v, "OutOfSector", "", 0))
                continue
            kind, feasible = "", 0
            if label == "Above":
                kind = "case_a" if u + 3.0 * v > 1.0 else "case_b"
                try:
                    derive_params(WindowSpec(kind=kind, N=64, K=32, q=args.q,
                                             r=float(r), s=float(s)))
                    feasible = 1
                except ParameterError:
                    feasible = 0
            rows.append((float(r), float(s), u, v, label, kind, feasible))
    if args.format == "csv":
        lines = ["r,s,u,v,classification,kind,feasible"]
        lines += [f"{r:.17g},{s:.17g},{u:.17g},{v:.17g},{lab},{kind},{feas}"
                  for r, s, u, v, lab, kind, feas in rows]
        _emit("\n".join(lines), args.out)
    else:
        payload = {"schema": "bllab.sweep/1", "q": args.q,
                   "rows": [list(row) for row in rows]}
        _emit(json.dumps(payload, sort_keys=True), args.out)
    return 0


def _cmd_selftest(args) -> int:
    from .acceptance import format_report, run_all

    results = run_all()
    _emit(format_report(results), args.out)
    return 0 if all(r.passed for r in results) else 1


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bllab",
        description="Zak-transform toolkit for time-frequency localization "
                    "trade-offs of integer-lattice Gabor generators")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", help="synthesize a window, write JSON")
    _add_spec_flags(sp, kind_required=True)
    sp.add_argument("--out", default="-", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_construct)

    sp = sub.add_parser("analyze", help="full diagnostics pipeline")
    _add_spec_flags(sp, kind_required=False)
    sp.add_argument("--window", default=None, metavar="FILE",
                    help="window JSON produced by construct (replaces --kind)")
    sp.add_argument("--q-test", dest="q_test", type=float, default=None,
                    help="integral-criterion exponent (default q + 1)")
    sp.add_argument("--N-list", dest="N_list", default=None,
                    help="comma-separated refinement rates (default "
                         "N/4,N/2,N)")
    sp.add_argument("--seed", type=int, default=0,
                    help="probe seed (default 0)")
    sp.add_argument("--probe-M", dest="probe_M", type=int, default=4,
                    help="largest gram probe half-width (default 4)")
    sp.add_argument("--trials", type=int, default=256,
                    help="probe trials per level (default 256)")
    sp.add_argument("--out", default="-", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_analyze)

    sp = sub.add_parser("curve", help="tabulate the trade-off boundary")
    sp.add_argument("--q", type=float, required=True,
                    help="exponent q >= 2 (inf allowed)")
    sp.add_argument("--points", type=int, default=33,
                    help="sample count across the admissible span "
                         "(default 33)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default="-", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_curve)

    sp = sub.add_parser("coeffs", help="Fourier coefficients of the "
                                       "oscillatory test weight")
    sp.add_argument("--alpha", type=float, required=True,
                    help="cusp exponent in (0, 1]")
    sp.add_argument("--beta", type=float, required=True,
                    help="power exponent (needs beta < 1 + 1/alpha)")
    sp.add_argument("--M", type=int, default=8,
                    help="coefficient band half-width (default 8)")
    sp.add_argument("--fine-N", dest="fine_N", type=int, default=None,
                    help="quadrature grid size (default 8M, even)")
    sp.add_argument("--part", choices=("full", "real"), default="full",
                    help="weight variant (default full)")
    sp.add_argument("--q", type=float, default=None,
                    help="also report lq partial sums at this exponent")
    sp.add_argument("--M-list", dest="M_list", default=None,
                    help="comma-separated partial-sum cutoffs (default "
                         "powers of 2 up to M)")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default="-", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_coeffs)

    sp = sub.add_parser("sweep", help="map constructibility over an (r, s) "
                                      "rectangle")
    sp.add_argument("--q", type=float, required=True,
                    help="exponent q >= 2 (inf allowed)")
    sp.add_argument("--r-min", dest="r_min", type=float, default=2.0)
    sp.add_argument("--r-max", dest="r_max", type=float, default=4.0)
    sp.add_argument("--s-min", dest="s_min", type=float, default=2.0)
    sp.add_argument("--s-max", dest="s_max", type=float, default=4.0)
    sp.add_argument("--steps", type=int, default=9,
                    help="grid points per axis (default 9)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default="-", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("selftest", help="run the acceptance checks")
    sp.add_argument("--out", default="-", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_selftest)

    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        _configure_threads()
        return args.func(args)
    except NumericError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__,
                                     "message": str(exc)},
                                    sort_keys=True) + "\n")
        return 3
    except ParameterError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__,
                                     "message": str(exc)},
                                    sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
