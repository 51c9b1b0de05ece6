"""Command-line front end: single-point evaluation, plane scans, verification.

Exit codes: 0 on success, 1 when a verification case fails, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .config import ConfigError, load_scan_config
from .fock import qpd_oracle
from .integral import qpd_integral
from .output import write_scan_outputs
from .scan import scan_plane
from .series import (MeasurementSpec, TruncationConfig, qpd_series_squeezed,
                     qpd_series_thermal, qpd_series_window)
from .states import OffsetFunction, StateSpec, n_th_from_temperature
from .verify import CASES, run_case


def _sign(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected +1 or -1, got {text!r}") from None
    if v not in (1, -1):
        raise argparse.ArgumentTypeError(f"expected +1 or -1, got {text!r}")
    return v


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgqpd",
        description="Two-time quasi-probabilities of an oscillator under "
                    "dichotomic position measurements.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate q_{s1,s2}(t1, t2) at one parameter point")
    ev.add_argument("--route", choices=("integral", "series", "oracle"), required=True)
    ev.add_argument("--s1", type=_sign, required=True)
    ev.add_argument("--s2", type=_sign, required=True)
    ev.add_argument("--t1", type=float, required=True, help="first time (omega*t)")
    ev.add_argument("--t2", type=float, required=True, help="second time (omega*t)")
    ev.add_argument("--x0", type=float, default=0.0)
    ev.add_argument("--p0", type=float, default=0.0)
    ev.add_argument("--r", type=float, default=0.0, help="squeeze magnitude")
    ev.add_argument("--theta0", type=float, default=0.0, help="squeeze phase (radians)")
    ev.add_argument("--temp-ratio", type=float, default=0.0,
                    help="temperature as k_B T / (hbar omega)")
    ev.add_argument("--projector", choices=("sign", "window"), default="sign")
    ev.add_argument("--L", type=float, default=None, help="window half-width")
    ev.add_argument("--offset-amp", type=float, default=0.0)
    ev.add_argument("--offset-phase", type=float, default=0.0)
    ev.add_argument("--offset-const", type=float, default=0.0)
    ev.add_argument("--nmax", type=int, default=200, help="series truncation order")
    ev.add_argument("--quad-order", type=int, default=32, help="starting u-quadrature order")
    ev.add_argument("--oracle-dim", type=int, default=300)
    ev.add_argument("--out", choices=("text", "json"), default="text")

    sc = sub.add_parser("scan", help="run a plane scan from a key-value config file")
    sc.add_argument("config", type=Path, help="key = value configuration file")
    sc.add_argument("--out-dir", type=Path, default=Path("."))
    sc.add_argument("--basename", default=None, help="output file stem (default: config stem)")
    sc.add_argument("--threads", type=int, default=1, help="worker process cap")

    vf = sub.add_parser("verify", help="run a canned verification scenario")
    vf.add_argument("case", choices=sorted(CASES) + ["all"])
    return parser


def _cmd_eval(args) -> int:
    n_th = n_th_from_temperature(args.temp_ratio)
    offset = OffsetFunction(args.offset_amp, args.offset_phase, args.offset_const)
    trunc = TruncationConfig(n_max=args.nmax)

    def usage(msg: str) -> int:
        print(f"lgqpd eval: error: {msg}", file=sys.stderr)
        return 2

    if args.projector == "window":
        if args.route == "integral":
            return usage("--route integral does not cover --projector window")
        if args.L is None:
            return usage("--projector window requires --L")
        if args.x0 != 0.0 or args.p0 != 0.0:
            return usage("window projector requires x0 = p0 = 0 (squeezed vacuum)")
        if n_th != 0.0:
            return usage("window projector requires zero temperature")
        if not offset.is_zero:
            return usage("window projector does not take an offset")
    if args.route == "integral" and n_th != 0.0:
        return usage("--route integral covers pure states only (zero temperature)")
    if args.route == "series" and not offset.is_zero:
        return usage("--route series does not take a measurement offset; "
                     "use --route integral or oracle")

    state = StateSpec.from_phase_space(args.x0, args.p0, args.r, args.theta0, n_th)
    diagnostics: dict = {}
    if args.projector == "window":
        if args.route == "series":
            q, info = qpd_series_window(state, args.L, args.s1, args.s2,
                                        args.t1, args.t2, trunc, with_info=True)
            diagnostics = {"n_used": info.n_used, "tail_bound": info.tail_bound,
                           "singular_branch": info.singular_branch}
        else:
            q = qpd_oracle(state, MeasurementSpec.window(args.L), args.s1, args.s2,
                           args.t1, args.t2, args.oracle_dim)
            diagnostics = {"dim": args.oracle_dim}
    elif args.route == "series":
        evaluate = qpd_series_thermal if n_th > 0 else qpd_series_squeezed
        q, info = evaluate(state, args.s1, args.s2, args.t1, args.t2, trunc,
                           with_info=True)
        diagnostics = {"n_used": info.n_used, "tail_bound": info.tail_bound,
                       "singular_branch": info.singular_branch}
        if n_th > 0:
            diagnostics.update({"m_used": info.m_used, "m_tail": info.m_tail})
    elif args.route == "integral":
        q, info = qpd_integral(state, offset, args.s1, args.s2, args.t1, args.t2,
                               args.quad_order, with_info=True)
        diagnostics = {"converged": info.converged, "self_consistency": info.last_delta,
                       "u_order": info.order, "degenerate_branch": info.degenerate}
    else:
        q = qpd_oracle(state, MeasurementSpec.sign(offset), args.s1, args.s2,
                       args.t1, args.t2, args.oracle_dim)
        diagnostics = {"dim": args.oracle_dim}

    if args.out == "json":
        print(json.dumps({"q": q, "route": args.route, "projector": args.projector,
                          "s1": args.s1, "s2": args.s2, "t1": args.t1, "t2": args.t2,
                          "diagnostics": diagnostics}, indent=2))
    else:
        print(f"q = {_fmt(q)}")
        print(f"route = {args.route}, projector = {args.projector}")
        for key, val in diagnostics.items():
            print(f"{key} = {val}")
    return 0


def _cmd_scan(args) -> int:
    try:
        config = load_scan_config(args.config)
    except FileNotFoundError:
        print(f"lgqpd scan: error: no such config file: {args.config}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"lgqpd scan: error: {args.config}: {exc}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    result = scan_plane(config, workers=max(1, args.threads))
    wall = time.perf_counter() - start
    basename = args.basename or args.config.stem
    csv_path, json_path = write_scan_outputs(result, args.out_dir, basename, wall)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    if result.n_failed:
        print(f"{result.n_failed} cell(s) failed and were marked nan")
    a1, a2, t2 = result.global_argmin
    print(f"global min q = {_fmt(result.global_min)} at "
          f"{result.config.axis1_name}={_fmt(a1)}, "
          f"{result.config.axis2_name}={_fmt(a2)}, t2={_fmt(t2)}")
    return 0


def _cmd_verify(args) -> int:
    names = sorted(CASES) if args.case == "all" else [args.case]
    all_passed = True
    for case in names:
        for check in run_case(case):
            status = "PASS" if check.passed else "FAIL"
            all_passed &= check.passed
            line = (f"{status} [{case}] {check.name}: measured={check.measured:.8g} "
                    f"expected={check.expected:.8g} tol={check.tolerance:.2g}")
            if check.detail:
                line += f" ({check.detail})"
            print(line)
    return 0 if all_passed else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "eval":
        return _cmd_eval(args)
    if args.command == "scan":
        return _cmd_scan(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
