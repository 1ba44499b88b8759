"""Command-line entry point.

Subcommands: intervals | measure | walk | dim | pressure | lebesgue | verify.
Rationals are given as "p/q" strings (decimals are rejected for alpha and
beta so the exponents stay exact).  Outputs embed the tool version, the
full configuration and the seeds, and identical configurations produce
byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import __version__, dimension, geometry, measure, verify, walks
from .coding import AdmissibleWord
from .measure import MeasureParams

ENV_PRECISION = "CANTORWALK_PRECISION"


class CliError(Exception):
    pass


def _parse_rational(text: str, name: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise CliError(f"{name} must be an exact rational like 3/4, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad rational for {name}: {text!r}") from exc


def _default_precision() -> int:
    return int(os.environ.get(ENV_PRECISION, geometry.DEFAULT_PRECISION))


def _meta(args: argparse.Namespace) -> dict:
    cfg = {k: (str(v) if isinstance(v, Fraction) else v)
           for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    return {"tool": "cantorwalk", "version": __version__, "config": cfg}


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(args, header: list[str], rows, meta: dict) -> None:
    buf = io.StringIO()
    for key, val in sorted(meta.items()):
        buf.write(f"# {key}: {json.dumps(val, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def cmd_intervals(args) -> int:
    word = AdmissibleWord.parse(args.word)
    geom = geometry.cylinder_interval(word)
    payload = geom.to_json(args.precision)
    h = geometry.hole(word)
    payload["hole"] = {
        "left_poly": h.left.to_json(),
        "length_poly": h.length.to_json(),
        "decimal_length": mp.nstr(h.length.evaluate(args.precision), 25),
    }
    payload["meta"] = _meta(args)
    _emit(args, payload)
    return 0


def cmd_measure(args) -> int:
    word = AdmissibleWord.parse(args.word)
    params = MeasureParams(alpha=args.alpha, precision=args.precision)
    cm = measure.cylinder_mass(word, params)
    res = measure.consistency_defect(word, params, args.truncation)
    payload = {
        "word": list(word.symbols),
        "alpha": str(params.alpha),
        "mass_decimal": mp.nstr(cm.value(), 25),
        "log_mass": mp.nstr(cm.log_value(), 25),
        "factors": cm.to_json(),
        "consistency": {
            "partial": float(res.partial_sum),
            "tail_lo": float(res.tail_lo),
            "tail_hi": float(res.tail_hi),
            "contains_parent": res.contains_parent,
        },
        "meta": _meta(args),
    }
    _emit(args, payload)
    return 0


def cmd_walk(args) -> int:
    kwargs = {"kind": args.kind, "steps": args.steps, "seed": args.seed}
    if args.kind == "dissipative":
        if args.alpha is None:
            raise CliError("dissipative walk needs --alpha")
        if args.alpha == 1 and not args.allow_boundary:
            raise CliError("alpha = 1 is the recurrent boundary; "
                           "pass --allow-boundary to study it")
        kwargs["alpha"] = args.alpha
    else:
        if args.beta is None:
            raise CliError(f"{args.kind} walk needs --beta")
        kwargs["beta"] = args.beta
    params = walks.WalkParams(**kwargs)
    if args.checkpoints:
        checkpoints = [int(t) for t in args.checkpoints.split(",")]
        rep = walks.transience_stats(params, args.paths, checkpoints)
        payload = {
            "return_fraction": {str(k): v
                                for k, v in rep.return_fraction.items()},
            "escape_fraction": {str(k): {str(t): v for t, v in d.items()}
                                for k, d in rep.escape_fraction.items()},
            "state_quantiles": {str(k): v
                                for k, v in rep.state_quantiles.items()},
            "seeds": rep.seeds,
            "meta": _meta(args),
        }
        _emit(args, payload)
        return 0
    rows = []
    for i in range(args.paths):
        path = walks.simulate_path(params, path_id=i)
        rows.extend((i, n, int(s)) for n, s in enumerate(path.states))
    _emit_csv(args, ["path_id", "step", "state"], rows, _meta(args))
    return 0


def cmd_dim(args) -> int:
    rows = []
    finals = []
    for i in range(args.paths):
        path = walks.simulate_path(
            walks.WalkParams(kind="dissipative", steps=args.depth,
                             seed=args.seed, alpha=args.alpha), path_id=i)
        s = dimension.dim_series(path, args.alpha)
        finals.append(s.ratio[-1])
        stride = max(1, args.depth // max(args.rows_per_path, 1))
        for n in range(stride - 1, args.depth, stride):
            fr = s.furstenberg[n] if n < s.furstenberg.size else ""
            rows.append((i, int(s.n[n]), f"{s.ratio[n]:.12g}",
                         f"{fr:.12g}" if fr != "" else ""))
    quantiles = {p: float(np.quantile(finals, p))
                 for p in (0.05, 0.25, 0.5, 0.75, 0.95)}
    meta = _meta(args)
    meta["final_ratio_quantiles"] = {str(k): v for k, v in quantiles.items()}
    _emit_csv(args, ["path_id", "n", "ratio", "furstenberg_ratio"],
              rows, meta)
    return 0


def cmd_pressure(args) -> int:
    est = dimension.pressure_dimension(args.cutoff, args.tol)
    payload = {
        "K": est.state_cutoff,
        "s_star": est.s_star,
        "tolerance": est.tolerance,
        "lambda_trace": [[s, l] for s, l in est.lambda_trace],
        "meta": _meta(args),
    }
    _emit(args, payload)
    return 0


def cmd_lebesgue(args) -> int:
    decay = dimension.lebesgue_mass_decay(args.depth, args.cutoff)
    rows = [(n + 1, f"{m:.15g}", f"{b:.6g}")
            for n, (m, b) in enumerate(zip(decay.level_mass,
                                           decay.overcount_bound))]
    _emit_csv(args, ["level", "mass", "overcount_bound"], rows, _meta(args))
    return 0


def cmd_verify(args) -> int:
    results = verify.run_all(quick=args.quick)
    for res in results:
        print(res.line())
    payload = {
        "results": [{"name": r.name, "passed": r.passed,
                     "seconds": round(r.seconds, 2), "details":
                     json.loads(json.dumps(r.details, default=str))}
                    for r in results],
        "all_passed": all(r.passed for r in results),
        "meta": _meta(args),
    }
    if args.out:
        _emit(args, payload)
    return 0 if payload["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cantorwalk",
        description="Exact Cantor-like construction, measures, and walks")
    p.add_argument("--threads", type=int, default=1,
                   help="cap on worker parallelism (current build is "
                        "single-threaded; any cap is honored trivially)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("intervals", help="exact geometry of one cylinder")
    sp.add_argument("--word", required=True, help='e.g. "1,0,2"')
    sp.add_argument("--precision", type=int, default=_default_precision())
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_intervals)

    sp = sub.add_parser("measure", help="cylinder mass and consistency")
    sp.add_argument("--word", required=True)
    sp.add_argument("--alpha", required=True,
                    type=lambda t: _parse_rational(t, "alpha"))
    sp.add_argument("--precision", type=int, default=_default_precision())
    sp.add_argument("--truncation", type=int, default=10 ** 4)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("walk", help="simulate paths (CSV) or summaries")
    sp.add_argument("--kind", required=True,
                    choices=["cauchy_Z", "folded", "dissipative"])
    sp.add_argument("--alpha", type=lambda t: _parse_rational(t, "alpha"))
    sp.add_argument("--beta", type=lambda t: _parse_rational(t, "beta"))
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--paths", type=int, default=1)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--checkpoints",
                    help="comma list; switches to a JSON transience summary")
    sp.add_argument("--allow-boundary", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_walk)

    sp = sub.add_parser("dim", help="pointwise-dimension series")
    sp.add_argument("--alpha", required=True,
                    type=lambda t: _parse_rational(t, "alpha"))
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--paths", type=int, default=1)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--gamma", type=lambda t: _parse_rational(t, "gamma"),
                    default=Fraction(3))
    sp.add_argument("--n0", type=int, default=1000)
    sp.add_argument("--rows-per-path", type=int, default=100)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_dim)

    sp = sub.add_parser("pressure", help="finite-state dimension estimate")
    sp.add_argument("--cutoff", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_pressure)

    sp = sub.add_parser("lebesgue", help="level-mass decay of the tree")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--cutoff", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_lebesgue)

    sp = sub.add_parser("verify", help="run the claims-verification suite")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (CliError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
