"""Command-line interface: ``phikcorr {correlate,significance,outliers,generate}``.

Exit codes: 0 success, 1 numerical failure, 2 input error.
"""
import argparse
import csv
import io
import json
import math
import sys
from html import escape

import numpy as np

from . import synth
from .datamodel import Column, VariableKind, build_table, discretize
from .numerics import RngStream
from .outliers import outlier_z_matrix
from .phik import global_correlations, phik_matrix
from .significance import SamplingMethod, significance_matrix

EXIT_OK, EXIT_NUMERIC, EXIT_INPUT = 0, 1, 2
Z_SATURATION = 5.0


class InputError(Exception):
    pass


# ---------------------------------------------------------------- input


def read_csv(path):
    """Header and columns of raw string cells."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows or not rows[0]:
        raise InputError(f"{path}: missing header row")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise InputError(f"{path}: duplicate column names")
    body = [r for r in rows[1:] if r]
    for lineno, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise InputError(f"{path}: line {lineno} has {len(r)} fields, expected {len(header)}")
    return header, [[r[i] for r in body] for i in range(len(header))]


def _parse_ordinals(specs):
    out = {}
    for spec in specs or ():
        name, sep, cats = spec.partition("=")
        if not sep or not name or not cats:
            raise InputError(f"--ordinal expects NAME=cat1,cat2,...; got {spec!r}")
        out[name] = tuple(c.strip() for c in cats.split(","))
    return out


def _parse_bins(specs):
    """``--bins 10`` sets the default, ``--bins NAME=5`` one variable."""
    default, per_var = 10, {}
    for spec in specs or ():
        name, sep, value = spec.rpartition("=")
        try:
            n = int(value)
        except ValueError:
            raise InputError(f"--bins expects N or NAME=N; got {spec!r}") from None
        if n < 1:
            raise InputError("--bins must be positive")
        if sep:
            per_var[name] = n
        else:
            default = n
    return default, per_var


def load_columns(args):
    header, raw = read_csv(args.input)
    ordinals = _parse_ordinals(args.ordinal)
    forced = {name: VariableKind.INTERVAL for name in args.interval or ()}
    forced.update({name: VariableKind.CATEGORICAL for name in args.categorical or ()})
    unknown = (set(ordinals) | set(forced)) - set(header)
    if unknown:
        raise InputError(f"unknown column(s): {', '.join(sorted(unknown))}")
    columns = []
    for name, cells in zip(header, raw):
        try:
            columns.append(Column.from_cells(name, cells, forced.get(name), ordinals.get(name)))
        except ValueError as exc:
            raise InputError(f"column {name!r}: {exc}") from exc
    return columns


def _bins_config(args, columns):
    default, per_var = _parse_bins(args.bins)
    unknown = set(per_var) - {c.name for c in columns}
    if unknown:
        raise InputError(f"unknown column(s) in --bins: {', '.join(sorted(unknown))}")
    return {c.name: per_var.get(c.name, default) for c in columns}


# --------------------------------------------------------------- output


def _num(x):
    """JSON number, with non-finite values as null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _cell(x):
    """CSV text of a value; NA for undefined numbers."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return "NA" if x is None else str(x).lower() if isinstance(x, bool) else x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return repr(x) if math.isfinite(x) else "NA"


def _emit_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _emit_json(doc):
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


# ------------------------------------------------------------------ svg


def _lerp(a, b, t):
    return tuple(round(x + (y - x) * t) for x, y in zip(a, b))


def _sequential(v):
    # white to dark blue over [0, 1]
    return _lerp((255, 255, 255), (8, 48, 107), min(max(v, 0.0), 1.0))


def _diverging(z):
    # blue below zero, red above, saturated at +-Z_SATURATION
    t = min(max(z / Z_SATURATION, -1.0), 1.0)
    if t < 0:
        return _lerp((255, 255, 255), (33, 102, 172), -t)
    return _lerp((255, 255, 255), (178, 24, 43), t)


def render_svg(values, row_labels, col_labels, title, diverging=False, cell=48):
    """Heatmap of a matrix with the value printed in each cell; NaN cells grey."""
    values = np.asarray(values, dtype=float)
    r, k = values.shape
    left = 12 + 7 * max((len(str(s)) for s in row_labels), default=1)
    top = 40 + 7 * max((len(str(s)) for s in col_labels), default=1)
    width, height = left + k * cell + 10, top + r * cell + 10
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for j, lab in enumerate(col_labels):
        x, y = left + (j + 0.5) * cell, top - 6
        out.append(
            f'<text x="{x:.1f}" y="{y}" transform="rotate(-60 {x:.1f} {y})">{escape(str(lab))}</text>'
        )
    for i, lab in enumerate(row_labels):
        y = top + (i + 0.5) * cell + 4
        out.append(f'<text x="{left - 6}" y="{y:.1f}" text-anchor="end">{escape(str(lab))}</text>')
        for j in range(k):
            v = values[i, j]
            x0, y0 = left + j * cell, top + i * cell
            if math.isfinite(v):
                rgb = _diverging(v) if diverging else _sequential(v)
                dark = sum(rgb) < 380
                label = f"{v:.1f}" if diverging else f"{v:.2f}"
            else:
                rgb, dark, label = (220, 220, 220), False, "NA"
            out.append(
                f'<rect x="{x0}" y="{y0}" width="{cell}" height="{cell}" '
                f'fill="rgb{rgb}" stroke="white"/>'
            )
            out.append(
                f'<text x="{x0 + cell / 2:.1f}" y="{y0 + cell / 2 + 4:.1f}" text-anchor="middle" '
                f'fill="{"white" if dark else "black"}">{label}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- commands


def cmd_correlate(args):
    columns = load_columns(args)
    if len(columns) < 2:
        raise InputError("need at least two columns")
    bins = _bins_config(args, columns)
    m = phik_matrix(columns, bins, args.noise_pedestal_c)
    try:
        g = global_correlations(m)
    except ValueError:
        g = np.full(len(columns), np.nan)
    names = list(m.names)
    if args.format == "json":
        pairs = []
        for (i, j), res in sorted(m.results.items()):
            pairs.append({
                "a": names[i], "b": names[j], "phik": _num(res.phik),
                "chi2_obs": _num(res.chi2_obs), "chi2_ped": _num(res.chi2_ped),
                "chi2_max": _num(res.chi2_max), "n_sdof": _num(res.n_sdof),
                "clipped_to_zero": bool(res.clipped_to_zero), "error": res.error,
            })
        doc = {
            "command": "correlate",
            "config": {"bins": bins, "noise_pedestal_c": args.noise_pedestal_c},
            "variables": names,
            "phik": [[_num(v) for v in row] for row in m.values],
            "global_correlations": [_num(v) for v in g],
            "pairs": pairs,
        }
        text = _emit_json(doc)
    else:
        rows = [[name, *m.values[i], g[i]] for i, name in enumerate(names)]
        text = _emit_csv(["variable", *names, "global_correlation"], rows)
    _write(text, args.output)
    if args.svg:
        _write(render_svg(m.values, names, names, "phi_K correlation"), args.svg)


def cmd_significance(args):
    columns = load_columns(args)
    if len(columns) < 2:
        raise InputError("need at least two columns")
    bins = _bins_config(args, columns)
    if args.nsim is not None and args.nsim < 100:
        raise InputError("--nsim must be at least 100")
    m = significance_matrix(columns, bins, SamplingMethod(args.sampling), args.seed, args.nsim, args.jobs)
    names = list(m.names)
    pairs = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            res = m.results.get((i, j))
            if res is None:
                pairs.append({"a": names[i], "b": names[j], "z": None, "p_value": None, "g_obs": None,
                              "n_edof": None, "f": None, "n_sim": None, "chernoff": None,
                              "saturated": None, "error": m.errors.get((i, j))})
                continue
            pairs.append({
                "a": names[i], "b": names[j], "z": _num(res.z), "p_value": _num(res.p_value),
                "g_obs": _num(res.g_obs), "n_edof": _num(res.n_edof), "f": _num(res.f),
                "n_sim": res.n_sim, "chernoff": bool(res.chernoff),
                "saturated": bool(abs(res.z) >= Z_SATURATION), "error": None,
            })
    if args.format == "json":
        doc = {
            "command": "significance",
            "config": {"bins": bins, "sampling": args.sampling, "seed": args.seed, "nsim": args.nsim},
            "z_saturation": Z_SATURATION,
            "variables": names,
            "z": [[_num(v) for v in row] for row in m.z],
            "pairs": pairs,
        }
        text = _emit_json(doc)
    else:
        header = ["a", "b", "z", "p_value", "g_obs", "n_edof", "f", "n_sim", "chernoff", "saturated"]
        text = _emit_csv(header, [[p[h] for h in header] for p in pairs])
    _write(text, args.output)
    if args.svg:
        _write(render_svg(m.z, names, names, "significance Z", diverging=True), args.svg)


def cmd_outliers(args):
    columns = load_columns(args)
    by_name = {c.name: c for c in columns}
    for name in (args.var_a, args.var_b):
        if name not in by_name:
            raise InputError(f"unknown column: {name}")
    bins = _bins_config(args, columns)
    a = discretize(by_name[args.var_a], bins[args.var_a])
    b = discretize(by_name[args.var_b], bins[args.var_b])
    try:
        om = outlier_z_matrix(build_table(a, b))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    cells = []
    for i, rl in enumerate(om.row_labels):
        for j, cl in enumerate(om.col_labels):
            ok = bool(om.defined[i, j])
            cells.append({
                "row": rl, "col": cl, "observed": int(om.observed[i, j]),
                "expected": _num(om.expected[i, j]) if ok else None,
                "sigma": _num(om.sigma[i, j]) if ok else None,
                "p_mid": _num(om.p_mid[i, j]) if ok else None,
                "z": _num(om.z[i, j]) if ok else None,
            })
    if args.format == "json":
        doc = {
            "command": "outliers",
            "config": {"bins": {args.var_a: bins[args.var_a], args.var_b: bins[args.var_b]}},
            "rows": {"variable": args.var_a, "labels": list(om.row_labels)},
            "cols": {"variable": args.var_b, "labels": list(om.col_labels)},
            "z_saturation": Z_SATURATION,
            "cells": cells,
        }
        text = _emit_json(doc)
    else:
        header = ["row", "col", "observed", "expected", "sigma", "p_mid", "z"]
        text = _emit_csv(header, [[c[h] for h in header] for c in cells])
    _write(text, args.output)
    if args.svg:
        title = f"outlier Z: {args.var_a} vs {args.var_b}"
        _write(render_svg(om.z, om.row_labels, om.col_labels, title, diverging=True), args.svg)


def cmd_generate(args):
    if args.n < 1:
        raise InputError("-n must be positive")
    rng = RngStream(args.seed)
    if args.dataset == "smiley":
        x, y, _ = synth.gen_smiley(args.n, rng)
        header, cols = ["x", "y"], [x, y]
    elif args.dataset == "bvn":
        x, y = synth.gen_bvn(args.rho, args.n, rng)
        header, cols = ["x", "y"], [x, y]
    elif args.dataset == "uniform":
        counts = synth.gen_uniform_pmf(args.rows, args.cols, args.n, rng).counts
        a, b = np.nonzero(counts)
        reps = counts[a, b]
        header = ["a", "b"]
        cols = [[f"a{i}" for i in np.repeat(a, reps)], [f"b{j}" for j in np.repeat(b, reps)]]
    else:
        car = synth.gen_car_dataset(args.n, rng)
        header, cols = [c.name for c in car], [c.values for c in car]
    rows = [[_cell(v) if not isinstance(v, str) else v for v in row] for row in zip(*cols)]
    _write(_emit_csv(header, rows), args.output)


# --------------------------------------------------------------- parser


def _add_input(p):
    p.add_argument("input", help="CSV file with a header row")
    p.add_argument("--bins", action="append", metavar="N|NAME=N",
                   help="uniform bins per interval variable (default 10); repeatable")
    p.add_argument("--interval", action="append", metavar="NAME", help="treat column as interval")
    p.add_argument("--categorical", action="append", metavar="NAME", help="treat column as categorical")
    p.add_argument("--ordinal", action="append", metavar="NAME=cat1,cat2,...",
                   help="treat column as ordinal with the given order")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--svg", metavar="PATH", help="also write a heatmap")
    p.add_argument("-o", "--output", metavar="PATH", help="output file (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="phikcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlate", help="phi_K matrix and global correlations")
    _add_input(p)
    p.add_argument("--noise-pedestal-c", type=float, default=0.0)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("significance", help="pairwise significance of dependence")
    _add_input(p)
    p.add_argument("--nsim", type=int, help="synthetic tables per pair (default by occupancy)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sampling", choices=[m.value for m in SamplingMethod], default="multinomial")
    p.add_argument("--jobs", type=int, default=1, help="simulation threads")
    p.set_defaults(func=cmd_significance)

    p = sub.add_parser("outliers", help="per-cell excess/deficit significance for two variables")
    _add_input(p)
    p.add_argument("var_a")
    p.add_argument("var_b")
    p.set_defaults(func=cmd_outliers)

    p = sub.add_parser("generate", help="write a synthetic data set as CSV")
    p.add_argument("dataset", choices=("smiley", "bvn", "uniform", "car"))
    p.add_argument("-n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=float, default=0.5, help="correlation for bvn")
    p.add_argument("--rows", type=int, default=10, help="rows for uniform")
    p.add_argument("--cols", type=int, default=10, help="columns for uniform")
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        args.func(args)
    except InputError as exc:
        print(f"phikcorr: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"phikcorr: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"phikcorr: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
