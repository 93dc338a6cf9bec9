"""Batch front end: ``toricmellin <command> ...`` emits one CSV (or JSON) table.

Exit status is 0 on success, 2 for usage or configuration errors and 3 when
a numerical routine fails to converge.  Rows are sorted by their parameter
columns and floats are written with ``repr``, so identical invocations give
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import functions
from .bargmann import WeightData, spectral_measure, spectral_measure_em, spectral_measure_states, weight_lattice_points
from .distribution import (
    EpsilonSchedule,
    LevelSetProblem,
    gamma_constant,
    layer_cake_check,
    scaling_study,
    sigma_predicted,
    superlevel_volume_mc,
)
from .errors import NonConvergenceError, ToricMellinError
from .mellin import empirical_order, transform_numeric, transform_series
from .polynomials import g_from_generating_function, g_polynomial
from .polytope import HPolytope, euler_maclaurin_sum, riemann_sum

DEFAULT_SEED = 20240917

DISTLAW_COLUMNS = ["N", "d", "l", "t", "variant", "exact", "stderr", "predicted", "ratio", "slope", "mode", "a"]


class ConfigError(Exception):
    pass


def _fraction_list(text: str) -> list[Fraction]:
    return [Fraction(v) for v in text.split(",")] if text else []


def _increasing(values: Sequence, name: str):
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{name} must be strictly increasing")


def _fmt(v: Any) -> Any:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return ";".join(str(_fmt(x)) for x in v)
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return v


def _json_value(v: Any) -> Any:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _sort_key(row: dict, keys: Sequence[str]):
    out = []
    for k in keys:
        v = row.get(k)
        out.append((0, float(v)) if isinstance(v, (int, float, Fraction)) else (1, str(v)))
    return tuple(out)


def emit(rows: list[dict], columns: list[str], sort_keys: Sequence[str], fmt: str, stream) -> None:
    rows = sorted(rows, key=lambda r: _sort_key(r, sort_keys))
    if fmt == "json":
        records = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        stream.write(json.dumps(records, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow(["" if r.get(c) is None else _fmt(r.get(c)) for c in columns])
    stream.write(buf.getvalue())


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


# -- commands ---------------------------------------------------------------


def cmd_gk(args):
    if args.max_k < 0:
        raise ConfigError("--max-k must be nonnegative")
    oracle = g_from_generating_function(args.max_k)
    rows = []
    for k in range(args.max_k + 1):
        g = g_polynomial(k)
        rows.append(
            {
                "k": k,
                "degree": g.degree(),
                "expected_degree": k // 2,
                "degree_ok": g.degree() == k // 2,
                "gf_match": g == oracle[k],
                "coefficients": [str(c) for c in g.coefficients_univariate()],
                "polynomial": str(g),
            }
        )
    return rows, ["k", "degree", "expected_degree", "degree_ok", "gf_match", "coefficients", "polynomial"], ["k"]


def cmd_transform(args):
    f = functions.load(args.function)
    x = _fraction_list(args.x)
    rows = []
    for N in args.N:
        numeric = transform_numeric(f, x, Fraction(N) if float(N).is_integer() else float(N))
        series = transform_series(f, x, float(N), args.order)
        rows.append(
            {
                "x": x,
                "N": N,
                "M": args.order,
                "numeric": numeric.value,
                "series": series.value,
                "error": abs(numeric.value - series.value),
                "method": numeric.method,
                "layers": series.layer_magnitudes(),
            }
        )
    return rows, ["x", "N", "M", "numeric", "series", "error", "method", "layers"], ["N"]


def cmd_empirical_order(args):
    f = functions.load(args.function)
    x = _fraction_list(args.x)
    _increasing(args.N_list, "--N-list")
    rows = []
    for M in args.order:
        rep = empirical_order(f, [float(v) for v in x], args.N_list, M)
        rows.append(
            {
                "x": x,
                "M": M,
                "N_list": args.N_list,
                "errors": rep.params["errors"],
                "slope": rep.fitted_slope,
                "bound": -(M + 1) / 2 + 0.3,
                "note": rep.note,
            }
        )
    return rows, ["x", "M", "N_list", "errors", "slope", "bound", "note"], ["M"]


def cmd_em(args):
    P = HPolytope.from_dict(_load_json(args.polytope))
    f = functions.load(args.function)
    _increasing(args.N_list, "--N-list")
    rows = []
    for N in args.N_list:
        rs = riemann_sum(f, P, N)
        em = euler_maclaurin_sum(f, P, N, args.order)
        rows.append({"N": N, "M": args.order, "riemann": rs, "euler_maclaurin": em, "error": abs(rs - em)})
    return rows, ["N", "M", "riemann", "euler_maclaurin", "error"], ["N"]


def cmd_spectral(args):
    W = WeightData.from_dict(_load_json(args.weights))
    if args.alpha is not None:
        W = WeightData(W.d, W.q, args.alpha)
    f = functions.load(args.function)
    _increasing(args.N_list, "--N-list")
    rows = []
    for N in args.N_list:
        row = {
            "N": N,
            "alpha": W.alpha,
            "q": list(W.q),
            "states": len(weight_lattice_points(W, N)),
            "lattice_sum": spectral_measure(f, W, N),
            "per_state": spectral_measure_states(f, W, N) if args.per_state else None,
            "em_order": args.em_order,
            "em_estimate": spectral_measure_em(f, W, N, args.em_order) if args.em_order is not None else None,
        }
        rows.append(row)
    return rows, ["N", "alpha", "q", "states", "lattice_sum", "per_state", "em_order", "em_estimate"], ["N"]


def _direction(source: str) -> list[float]:
    """Direction ``a`` from a JSON file, or inline JSON when ``source`` starts with ``[`` or ``{``."""
    if source.lstrip()[:1] in "[{":
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad inline direction {source!r}: {exc}") from exc
    else:
        data = _load_json(source)
    if isinstance(data, dict):
        data = data.get("a")
    if not isinstance(data, list) or not data:
        raise ConfigError("direction file must hold a list or {\"a\": [...]}")
    return [float(Fraction(str(v))) for v in data]


def cmd_distlaw(args):
    a = _direction(args.weights_direction)
    _increasing(args.N_list, "--N-list")
    schedule = EpsilonSchedule.parse(args.rescale)
    d = len(a)
    rows = []
    for t in args.t:
        if d <= 3:
            reports = scaling_study(a, args.N_list, t, args.mode, schedule)
            for r in reports:
                row = r.as_row()
                row["a"] = a
                rows.append(row)
            continue
        # beyond three dimensions only Monte Carlo volumes are offered
        for N in args.N_list:
            k = tuple(int(round(N * v)) for v in a)
            P = LevelSetProblem(N, k, schedule.effective_log_t(N, t, d))
            est, err = superlevel_volume_mc(P, args.samples, args.seed)
            if args.mode == "refined":
                eps = schedule.epsilon(N, t, gamma_constant(P.a), d)
                pred = sigma_predicted(P, "refined", epsilon=eps)
            else:
                pred = sigma_predicted(P, args.mode)
            rows.append(
                {"N": N, "d": d, "l": P.l, "t": t, "variant": schedule.label, "exact": est, "stderr": err,
                 "predicted": pred, "ratio": est / pred, "slope": None, "mode": args.mode, "a": a}
            )
    return rows, DISTLAW_COLUMNS, ["t", "N"]


def cmd_layer_cake(args):
    rows = []
    for N in args.N:
        rep = layer_cake_check(N, tuple(args.k), args.points)
        rows.append({"N": N, "k": list(args.k), "points": args.points, "integral": rep.exact, "ratio": rep.ratio, "note": rep.note})
    return rows, ["N", "k", "points", "integral", "ratio", "note"], ["N"]


# -- parser -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"Monte Carlo seed (default {DEFAULT_SEED})")
    common.add_argument("--samples", type=int, default=200_000, help="Monte Carlo samples")

    parser = _Parser(prog="toricmellin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gk", parents=[common], help="g_k coefficient table and checks")
    p.add_argument("--max-k", type=int, required=True)
    p.set_defaults(run=cmd_gk)

    p = sub.add_parser("transform", parents=[common], help="numeric transform versus truncated series")
    p.add_argument("--function", required=True)
    p.add_argument("--x", required=True, help="comma-separated point, e.g. 1/2,1")
    p.add_argument("--N", type=float, nargs="+", required=True)
    p.add_argument("--order", type=int, default=1)
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("empirical-order", parents=[common], help="fitted decay of the series error")
    p.add_argument("--function", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--N-list", type=float, nargs="+", required=True)
    p.add_argument("--order", type=int, nargs="+", default=[0, 1, 2])
    p.set_defaults(run=cmd_empirical_order)

    p = sub.add_parser("em", parents=[common], help="Riemann sum versus Euler-Maclaurin estimate")
    p.add_argument("--polytope", required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--N-list", type=int, nargs="+", required=True)
    p.add_argument("--order", type=int, default=2)
    p.set_defaults(run=cmd_em)

    p = sub.add_parser("spectral", parents=[common], help="spectral measure of a weight slice")
    p.add_argument("--weights", required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--N-list", type=int, nargs="+", required=True)
    p.add_argument("--alpha", type=int, help="override the level stored in the weights file")
    p.add_argument("--em-order", type=int)
    p.add_argument("--per-state", action="store_true", help="also sum per-state Bargmann quadratures")
    p.set_defaults(run=cmd_spectral)

    p = sub.add_parser("distlaw", parents=[common], help="exact versus predicted superlevel volumes")
    p.add_argument("--weights-direction", required=True, help="JSON file or inline JSON list a (k = round(N a))")
    p.add_argument("--N-list", type=float, nargs="+", required=True)
    p.add_argument("--t", type=float, nargs="+", default=[1.0])
    p.add_argument("--rescale", default="plain", help="plain | power | exp:ALPHA,BETA | logn")
    p.add_argument("--mode", choices=["leading", "refined", "degenerate"], default="refined")
    p.set_defaults(run=cmd_distlaw)

    p = sub.add_parser("layer-cake", parents=[common], help="integral of the distribution law over t")
    p.add_argument("--N", type=float, nargs="+", required=True)
    p.add_argument("--k", type=int, nargs="+", required=True)
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(run=cmd_layer_cake)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        rows, columns, keys = args.run(args)
    except ConfigError as exc:
        print(f"toricmellin: error: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"toricmellin: no convergence: {exc}", file=sys.stderr)
        return 3
    except (ToricMellinError, OSError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        print(f"toricmellin: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", newline="") as fh:
            emit(rows, columns, keys, args.format, fh)
    else:
        emit(rows, columns, keys, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
