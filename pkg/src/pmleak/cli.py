"""Command-line front end.

Subcommands: analyze, thm3, bob, oracle, dp-check.  Outputs CSV tables
(and optional SVG line plots) whose headers embed the full
parameterization.  Option precedence: command-line flags override
config-file values, which override built-in defaults.

Exit codes: 0 success, 1 validation error, 2 tolerance/acceptance violation.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .constructions import (BobModel, EtaSchedule, bob_mechanism, bob_pml,
                            sweep)
from .leakage import eps_max, pml_report
from .mechanisms import (FiniteMechanism, dp_level_finite, dp_level_laplace,
                         mechanism_from_dict)
from .oracle import run_adversary_trials
from .probability import FiniteDistribution
from .svgplot import Series, write_line_chart
from .tables import ResultTable

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_TOLERANCE = 2

DEFAULTS = {
    "analyze": {"out": None, "svg": None, "y": None, "y_grid": None,
                "reproducible": False},
    "thm3": {"n": None, "n_range": (10, 2000, 24), "alpha": 0.25, "eta": 0.5,
             "eta_poly": None, "epsilon": 0.1, "y": -0.3, "out": None,
             "svg": None, "reproducible": False},
    "bob": {"k": 5, "epsilon": 0.1, "scale": 10_000.0, "y_grid": None,
            "out": None, "reproducible": False},
    "oracle": {"seed": 2024, "achievability_trials": 1000, "gain_trials": 10_000,
               "kernel_trials": 10_000, "tol": 1e-12, "mechanism": None},
    "dp_check": {"target": None, "entries": 1, "tol": 1e-9},
}


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must contain a JSON object")
    return cfg


def _resolve(args, command):
    """flags > config > defaults; argparse stores unset flags as None."""
    cfg = _load_config(getattr(args, "config", None))
    out = dict(DEFAULTS[command])
    for key, value in cfg.items():
        k = key.replace("-", "_")
        if k not in out:
            raise ValueError(f"unknown config field {key!r}")
        out[k] = value
    for key in out:
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            out[key] = flag
    return argparse.Namespace(**out)


def _grid(spec):
    start, stop, count = spec
    count = int(count)
    if count < 1:
        raise ValueError("grid count must be at least 1")
    if count == 1:
        return [float(start)]
    return list(np.linspace(float(start), float(stop), count))


def _load_analysis_spec(path):
    with open(path) as fh:
        raw = json.load(fh)
    mech = mechanism_from_dict(raw)
    prior_probs = raw.get("prior")
    if isinstance(mech, FiniteMechanism):
        labels = mech.x_labels
    elif mech.labels is not None:
        labels = mech.labels
    else:
        raise ValueError("mechanism spec needs labels")
    if prior_probs is None:
        prior = FiniteDistribution.uniform(labels)
    else:
        prior = FiniteDistribution.from_probs(labels, prior_probs)
    return mech, prior, raw


def _base_meta(command, opts, seed=None):
    meta = {"tool": "pmleak", "version": __version__, "command": command}
    for key, value in sorted(vars(opts).items()):
        if key in ("out", "svg", "reproducible"):
            continue
        if value is not None:
            meta[key.replace("_", "-")] = value
    if seed is not None:
        meta["seed"] = seed
    return meta


def _emit(table, opts):
    text = table.to_csv(reproducible=bool(opts.reproducible))
    if opts.out:
        with open(opts.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    opts = _resolve(args, "analyze")
    mech, prior, _ = _load_analysis_spec(args.mechanism)
    if isinstance(mech, FiniteMechanism):
        if opts.y is not None:
            ys = [mech.y_labels[mech.y_index(_parse_finite_y(v, mech))] for v in opts.y]
        else:
            ys = list(mech.y_labels)
    else:
        if opts.y_grid is not None:
            ys = _grid(opts.y_grid)
        elif opts.y is not None:
            ys = [float(v) for v in opts.y]
        else:
            raise ValueError("continuous mechanism needs --y or --y-grid")
    table = ResultTable(("y", "pml_nats", "argmax_label", "eps_max"),
                        meta=_base_meta("analyze", opts))
    table.meta["mechanism-file"] = args.mechanism
    for y in ys:
        rep = pml_report(prior, mech, y)
        table.append(y, rep.pml, rep.argmax_label, rep.eps_max)
    _emit(table, opts)
    return EXIT_OK


def _parse_finite_y(v, mech):
    for y in mech.y_labels:
        if str(y) == str(v):
            return y
    raise ValueError(f"outcome {v!r} not in mechanism output alphabet")


def cmd_thm3(args) -> int:
    opts = _resolve(args, "thm3")
    if opts.eta_poly is not None:
        c, r = opts.eta_poly
        schedule = EtaSchedule.polynomial(float(c), float(r))
    else:
        schedule = EtaSchedule.constant(float(opts.eta))
    if opts.n is not None:
        n_values = [int(opts.n)]
    else:
        start, stop, count = opts.n_range
        n_values = sorted({int(round(v)) for v in
                           np.geomspace(max(int(start), 1), int(stop), int(count))})
    y = float(opts.y)
    rows = sweep(n_values, float(opts.alpha), schedule, float(opts.epsilon), y)
    table = ResultTable(("n", "lower_bound", "exact_pml", "enum_pml", "eps_max"),
                        meta=_base_meta("thm3", opts))
    for row in rows:
        table.append(row.n, row.bound, row.exact_pml, row.enum_pml, row.eps_max)
    _emit(table, opts)
    if opts.svg:
        ns = [row.n for row in rows]
        series = [
            Series("lower bound", tuple(ns), tuple(row.bound for row in rows)),
            Series("exact PML", tuple(ns), tuple(row.exact_pml for row in rows)),
        ]
        em = rows[0].eps_max if rows else 0.0
        write_line_chart(opts.svg, series, title="Per-entry PML vs database size",
                         xlabel="n", ylabel="PML (nats)",
                         hlines=[("eps_max", em)], logx=len(ns) > 1 and min(ns) > 0)
    return EXIT_OK


def cmd_bob(args) -> int:
    opts = _resolve(args, "bob")
    k = int(opts.k)
    epsilon = float(opts.epsilon)
    model = BobModel(k=k, scale=float(opts.scale))
    if opts.y_grid is not None:
        ys = _grid(opts.y_grid)
    else:
        ys = _grid((0.0, (k + 1) * model.scale, 4 * k + 5))
    prior = model.attribute_prior()
    em = eps_max(prior)
    table = ResultTable(("y", "pml_nats", "eps_max"), meta=_base_meta("bob", opts))
    table.meta["dp-level"] = dp_level_laplace(bob_mechanism(model, epsilon))
    for y in ys:
        table.append(y, bob_pml(model, epsilon, y), em)
    _emit(table, opts)
    return EXIT_OK


def cmd_oracle(args) -> int:
    opts = _resolve(args, "oracle")
    channel = None
    if opts.mechanism:
        mech, _, _ = _load_analysis_spec(opts.mechanism)
        if not isinstance(mech, FiniteMechanism):
            raise ValueError("oracle trials need a finite mechanism")
        channel = mech
    report = run_adversary_trials(
        seed=int(opts.seed),
        achievability_trials=int(opts.achievability_trials),
        gain_trials=int(opts.gain_trials),
        kernel_trials=int(opts.kernel_trials),
        tolerance=float(opts.tol),
        channel=channel,
    )
    print(f"seed = {report.seed}")
    print(f"achievability trials = {report.achievability_trials}, "
          f"max |indicator-gain - pml| = {report.max_achievability_gap:.3e}")
    print(f"gain trials = {report.gain_trials}, "
          f"max excess over pml = {report.max_gain_excess:.3e}")
    print(f"kernel trials = {report.kernel_trials}, "
          f"max excess over pml = {report.max_kernel_excess:.3e}")
    print(f"tolerance = {report.tolerance:.3e}")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def cmd_dp_check(args) -> int:
    opts = _resolve(args, "dp_check")
    mech, _, _ = _load_analysis_spec(args.mechanism)
    if isinstance(mech, FiniteMechanism):
        level = dp_level_finite(mech, num_entries=int(opts.entries))
    else:
        level = dp_level_laplace(mech)
    print(f"dp level = {level:.12g}")
    if opts.target is not None:
        target = float(opts.target)
        ok = level <= target + float(opts.tol)
        print(f"target = {target:.12g}: {'meets' if ok else 'exceeds'}")
        if not ok:
            return EXIT_TOLERANCE
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pmleak",
        description="Pointwise maximal leakage analysis of privacy mechanisms.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with default option values")
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--reproducible", action="store_true", default=None,
                       help="suppress the timestamp header line")

    p = sub.add_parser("analyze", help="PML profile of a mechanism spec file")
    common(p)
    p.add_argument("--mechanism", required=True, help="mechanism spec JSON file")
    p.add_argument("--y", nargs="+", help="outcome value(s)")
    p.add_argument("--y-grid", nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("thm3", help="correlated-database sweep: bound vs exact PML")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--n-range", nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--alpha", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--eta-poly", nargs=2, type=float, metavar=("C", "R"))
    p.add_argument("--epsilon", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--svg", help="SVG plot output path")
    p.set_defaults(func=cmd_thm3)

    p = sub.add_parser("bob", help="noisy counting-query attribute leakage")
    common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--scale", type=float)
    p.add_argument("--y-grid", nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    p.set_defaults(func=cmd_bob)

    p = sub.add_parser("oracle", help="adversary-model validation trials")
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--seed", type=int)
    p.add_argument("--achievability-trials", type=int)
    p.add_argument("--gain-trials", type=int)
    p.add_argument("--kernel-trials", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--mechanism", help="fixed finite channel spec (optional)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("dp-check", help="DP level of a mechanism spec file")
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--mechanism", required=True)
    p.add_argument("--target", type=float)
    p.add_argument("--entries", type=int)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_dp_check, command="dp_check")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entry_point():
    sys.exit(main())
