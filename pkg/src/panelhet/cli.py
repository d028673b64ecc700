"""Command-line interface: ``panelhet {estimate,simulate,bandwidth}``.

Exit codes: 0 success, 1 I/O error, 2 validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import BACKEND
from .bandwidth import BandwidthPolicy, resolve
from .density import EvalGrid, default_grid, ecdf, kcdf
from .errors import PanelHetError
from .jackknife import estimator_terms, jackknife_values, subpanel_estimates
from .kernels import KERNELS, get_kernel
from .panel import load_csv
from .rbc import BIAS_FACTORS, RbcConfig, rbc_band
from .sim import McConfig, run_study
from .unit_stats import HeterogeneityKind

KIND_ALIASES = {
    "mean": "mean", "mu": "mean",
    "gamma": "acov", "acov": "acov", "autocovariance": "acov",
    "rho": "acor", "acor": "acor", "autocorrelation": "acor",
}

PRESETS = {
    "table1-cell": {
        "N": 1000, "T": 96, "R": 500, "seed": 20190101, "kinds": "mean", "quantiles": "0.2",
        "estimators": "ne,hpj,toj,ie", "kernel": "epanechnikov", "bandwidth": 0.650,
    },
    "table2-cell": {
        "N": 1000, "T": 24, "R": 500, "seed": 20190102, "kinds": "gamma", "quantiles": "0.8",
        "estimators": "ne,hpj,toj,ie", "kernel": "epanechnikov", "bandwidth": 0.274,
    },
}

SIM_DEFAULTS = {
    "N": 1000, "T": 24, "R": 500, "seed": 0, "kinds": "mean,gamma,rho",
    "quantiles": "0.2,0.4,0.6,0.8", "estimators": "ne,hpj,toj,ie", "kernel": "epanechnikov",
    "bandwidth": None, "bw_scale": 1.0, "ie_bandwidth": None, "ci_level": 0.95,
    "rbc_bias_factor": "half",
}


class UsageError(PanelHetError):
    pass


def _float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _kind(name: str, lag) -> HeterogeneityKind:
    try:
        base = KIND_ALIASES[name.lower()]
    except KeyError:
        raise UsageError(f"unknown kind {name!r}; choose mean, gamma or rho") from None
    if lag is None:
        lag = 1 if base == "acor" else 0
    return HeterogeneityKind(base, lag)


def _estimators(text: str, allowed) -> list:
    names = [e.strip().upper() for e in text.split(",") if e.strip()]
    bad = [e for e in names if e not in allowed]
    if not names or bad:
        raise UsageError(f"estimators must be a nonempty subset of {','.join(a.lower() for a in allowed)}")
    return [e for e in allowed if e in names]


def _policy(h, scale) -> BandwidthPolicy:
    if h is not None:
        return BandwidthPolicy.fixed(h)
    return BandwidthPolicy.rule_of_thumb(scale)


def _threads(value) -> int:
    if value is None:
        value = os.environ.get("PANELHET_THREADS", "1")
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"thread count must be an integer, got {value!r}") from None
    if n < 1:
        raise UsageError(f"thread count must be >= 1, got {n}")
    return n


def _rbc(ci_level: float, factor: str) -> RbcConfig:
    if not 0.0 < ci_level < 1.0:
        raise UsageError(f"--ci-level must be in (0, 1), got {ci_level}")
    return RbcConfig(alpha=1.0 - ci_level, bias_factor=BIAS_FACTORS[factor])


def _fmt(v) -> str:
    return repr(float(v))


def _emit(text: str, output):
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _write_sidecar(output, meta: dict):
    if output is not None:
        Path(str(output) + ".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# -- estimate ----------------------------------------------------------------


def cmd_estimate(args) -> int:
    kind = _kind(args.kind, args.lag)
    kernel = get_kernel(args.kernel)
    policy = _policy(args.bandwidth, args.bw_scale)
    _threads(args.threads)
    panel = load_csv(args.input, args.layout)
    ests = _estimators(args.estimators, ("NE", "HPJ", "TOJ"))
    order = "TOJ" if "TOJ" in ests else "HPJ" if "HPJ" in ests else "NE"
    if args.target != "density":
        order = "NE"
    sub = subpanel_estimates(panel, kind, order)
    xi = sub.full
    h = resolve(policy, xi, kernel) if args.target != "ecdf" else None
    if args.at:
        grid = EvalGrid(sorted(_float_list(args.at)))
    elif args.target == "ecdf":
        spread = float(np.ptp(xi.values)) or 1.0
        grid = EvalGrid(np.linspace(xi.values.min() - 0.1 * spread, xi.values.max() + 0.1 * spread, args.grid))
    else:
        grid = default_grid(xi, h, args.grid)
    pts = grid.points

    meta = {
        "command": "estimate",
        "version": __version__,
        "backend": BACKEND,
        "input": str(args.input),
        "layout": args.layout,
        "kind": kind.label,
        "kernel": kernel.id,
        "N": panel.N,
        "T": panel.T,
        "h": h,
        "seed": None,
        "flags": _flags(args, exclude=("threads", "output")),
    }
    cols = {"x": pts}
    if args.target == "kcdf":
        cols["F_kcdf"] = kcdf(xi, pts, h, kernel)
    elif args.target == "ecdf":
        cols["F_ecdf"] = ecdf(xi, pts)
    else:
        vals = jackknife_values(sub, pts, h, kernel)
        for e in ests:
            cols[f"f_{e.lower()}"] = vals[e]
        ci_est = (args.ci_estimator or ests[-1]).upper()
        if ci_est not in ests:
            raise UsageError(f"--ci-estimator {ci_est.lower()} is not among the requested estimators")
        cfg = _rbc(args.ci_level, args.rbc_bias_factor)
        comps, weights = estimator_terms(ci_est, sub)
        band = rbc_band(comps, weights, sub.full.values, pts, h, kernel, cfg)
        cols["ci_lo"] = band["lo"]
        cols["ci_hi"] = band["hi"]
        meta["ci_estimator"] = ci_est
        meta["ci_level"] = args.ci_level
        meta["rbc_bias_factor"] = cfg.bias_factor
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(cols))
    for row in zip(*cols.values()):
        w.writerow([_fmt(v) for v in row])
    _emit(buf.getvalue(), args.output)
    _write_sidecar(args.output, meta)
    return 0


# -- simulate ----------------------------------------------------------------


def _sim_settings(args) -> dict:
    settings = dict(SIM_DEFAULTS)
    if args.preset:
        settings.update(PRESETS[args.preset])
    for key in SIM_DEFAULTS:
        val = getattr(args, key)
        if val is not None:
            settings[key] = val
    return settings


def build_mc_config(settings: dict) -> McConfig:
    kinds = tuple(_kind(k.strip(), None) for k in settings["kinds"].split(",") if k.strip())
    return McConfig(
        N=int(settings["N"]),
        T=int(settings["T"]),
        R=int(settings["R"]),
        seed=int(settings["seed"]),
        kinds=kinds,
        quantiles=tuple(_float_list(settings["quantiles"])),
        estimators=tuple(_estimators(settings["estimators"], ("NE", "HPJ", "TOJ", "IE"))),
        kernel=get_kernel(settings["kernel"]),
        bandwidth=_policy(settings["bandwidth"], settings["bw_scale"]),
        ie_bandwidth=_policy(settings["ie_bandwidth"], 1.0),
        rbc=_rbc(settings["ci_level"], settings["rbc_bias_factor"]),
    )


def cmd_simulate(args) -> int:
    settings = _sim_settings(args)
    cfg = build_mc_config(settings)
    threads = _threads(args.threads)
    if args.show_config:
        sys.stdout.write(json.dumps(cfg.as_dict(), indent=2, sort_keys=True) + "\n")
        return 0
    result = run_study(cfg, threads=threads)
    _emit(result.to_csv(), args.output)
    _write_sidecar(args.output, {
        "command": "simulate",
        "version": __version__,
        "backend": BACKEND,
        "preset": args.preset,
        "config": cfg.as_dict(),
        "seed": cfg.seed,
        "flags": _flags(args, exclude=("threads", "output")),
    })
    return 0


# -- bandwidth ---------------------------------------------------------------


def _read_estimates(path) -> np.ndarray:
    vals = []
    with open(path, newline="", encoding="utf-8-sig") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not row[0].strip():
                continue
            try:
                vals.append(float(row[0]))
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise UsageError(f"non-numeric estimate {row[0]!r} on line {lineno}") from None
    if not vals:
        raise UsageError("no unit estimates found")
    return np.array(vals)


def cmd_bandwidth(args) -> int:
    kernel = get_kernel(args.kernel)
    policy = _policy(args.bandwidth, args.bw_scale)
    if args.bandwidth is not None:
        h = policy.h
    elif args.estimates is not None:
        h = resolve(policy, _read_estimates(args.estimates), kernel)
    elif args.input is not None:
        panel = load_csv(args.input, args.layout)
        h = resolve(policy, subpanel_estimates(panel, _kind(args.kind, args.lag), "NE").full, kernel)
    else:
        raise UsageError("give a panel CSV, --estimates FILE, or --bandwidth H")
    print(f"{h:.6g}")
    return 0


# -- parser ------------------------------------------------------------------


def _flags(args, exclude=()) -> dict:
    skip = {"func", *exclude}
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def _add_common(p, sim=False):
    dflt = None if sim else "epanechnikov"
    p.add_argument("--kernel", choices=sorted(KERNELS), default=dflt, help="smoothing kernel K")
    p.add_argument("--bandwidth", type=float, default=None, help="fixed bandwidth h (default: rule of thumb)")
    p.add_argument("--bw-scale", dest="bw_scale", type=float, default=None if sim else 1.0,
                   help="multiplier on the rule-of-thumb bandwidth")
    p.add_argument("--threads", default=None, help="worker threads (env PANELHET_THREADS); never changes results")


def _add_rbc(p, sim=False):
    p.add_argument("--ci-level", dest="ci_level", type=float, default=None if sim else 0.95)
    p.add_argument("--rbc-bias-factor", dest="rbc_bias_factor", choices=sorted(BIAS_FACTORS),
                   default=None if sim else "half",
                   help="multiplier on h^2 kappa1 f'': half (default), one, or none")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="panelhet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("estimate", help="density/CDF of unit-level quantities from a panel CSV")
    pe.add_argument("input", type=Path, help="panel CSV")
    pe.add_argument("--layout", choices=("long", "wide"), default="long")
    pe.add_argument("--kind", default="mean", help="mean, gamma (autocovariance) or rho (autocorrelation)")
    pe.add_argument("--lag", type=int, default=None, help="lag k (default 0 for gamma, 1 for rho)")
    pe.add_argument("--estimators", default="ne,hpj", help="comma list from ne,hpj,toj")
    pe.add_argument("--target", choices=("density", "kcdf", "ecdf"), default="density")
    pe.add_argument("--grid", type=int, default=512, help="number of equally spaced grid points")
    pe.add_argument("--at", default=None, help="explicit evaluation points x1,x2,...")
    pe.add_argument("--ci-estimator", dest="ci_estimator", default=None,
                    help="estimator the ci_lo/ci_hi columns refer to (default: highest-order requested)")
    pe.add_argument("-o", "--output", type=Path, default=None, help="output CSV (stdout if omitted)")
    _add_common(pe)
    _add_rbc(pe)
    pe.set_defaults(func=cmd_estimate)

    ps = sub.add_parser("simulate", help="Monte Carlo study of the estimators")
    ps.add_argument("--preset", choices=sorted(PRESETS), default=None)
    ps.add_argument("--N", type=int, default=None)
    ps.add_argument("--T", type=int, default=None)
    ps.add_argument("--R", type=int, default=None, help="replications")
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--kinds", default=None, help="comma list from mean,gamma,rho")
    ps.add_argument("--quantiles", default=None, help="comma list of quantile levels")
    ps.add_argument("--estimators", default=None, help="comma list from ne,hpj,toj,ie")
    ps.add_argument("--ie-bandwidth", dest="ie_bandwidth", type=float, default=None,
                    help="fixed bandwidth for the infeasible estimator (default: rule of thumb)")
    ps.add_argument("--show-config", dest="show_config", action="store_true",
                    help="print the resolved configuration and exit")
    ps.add_argument("-o", "--output", type=Path, default=None)
    _add_common(ps, sim=True)
    _add_rbc(ps, sim=True)
    ps.set_defaults(func=cmd_simulate)

    pb = sub.add_parser("bandwidth", help="report the bandwidth that estimate would use")
    pb.add_argument("input", type=Path, nargs="?", default=None, help="panel CSV")
    pb.add_argument("--estimates", type=Path, default=None, help="file with one unit estimate per line")
    pb.add_argument("--layout", choices=("long", "wide"), default="long")
    pb.add_argument("--kind", default="mean")
    pb.add_argument("--lag", type=int, default=None)
    _add_common(pb)
    pb.set_defaults(func=cmd_bandwidth)
    return parser


def replay_argv(meta: dict, output=None) -> list:
    """Command line that reruns the invocation recorded in a JSON sidecar."""
    flags = dict(meta["flags"])
    command = flags.pop("command")
    sub = next(a for a in build_parser()._actions if isinstance(a, argparse._SubParsersAction))
    argv = [command]
    for action in sub.choices[command]._actions:
        if action.dest not in flags:
            continue
        value = flags[action.dest]
        if not action.option_strings:
            if value is not None:
                argv.append(str(value))
        elif isinstance(action, argparse._StoreTrueAction):
            if value:
                argv.append(action.option_strings[-1])
        elif value is not None:
            argv += [action.option_strings[-1], str(value)]
    if output is not None:
        argv += ["--output", str(output)]
    return argv


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PanelHetError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
