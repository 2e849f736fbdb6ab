"""Command-line surface.

Verbs: eval, conditional, probe, sample, maxima, pickands, test, experiment,
figure, calibrate.  Structured results go to stdout as JSON; tabular and
plottable data as CSV with 17-significant-digit, locale-independent numbers.
Every verb takes ``--seed`` with a fixed documented default (never wall
clock), so identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from ._numeric import fmt17
from .copulas import (cdf, conditional_cdf, conditional_limit_probe,
                      doa_convergence_probe, doa_limit, make_model,
                      norming_constants)
from .errors import TailcondError
from .experiment import (DEFAULT_SEED, ExperimentConfig, PRESETS, figure_data,
                         run_experiment, run_table, write_table_csv)
from .generators import Family, Generator
from .maxima import (componentwise_max_unconditional, stack_conditional,
                     stack_unconditional)
from .pickands import critical_value, estimate_pickands, run_test, simplex_grid
from .sampling import accumulate_slice, rng_from_key, sample_archimedean


def _vector(text: str) -> np.ndarray:
    return np.array([float(x) for x in text.split(",")])


def _model_from_args(args, dim=None):
    d = dim if dim is not None else args.d
    return make_model(args.family, args.theta, d,
                      norm_kind=getattr(args, "norm", "sum"),
                      q=getattr(args, "q", 1.0))


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_probe_csv(rows, out=None):
    lines = ["n,value,target,rel_error"]
    for n, value, target in rows:
        rel = abs(value - target) / abs(target) if target != 0.0 else abs(value)
        lines.append(f"{fmt17(n)},{fmt17(value)},{fmt17(target)},{fmt17(rel)}")
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- verb handlers ------------------------------------------------------------

def _cmd_eval(args):
    u = _vector(args.u)
    model = _model_from_args(args, dim=len(u))
    _emit({"model": model.to_dict(), "u": list(map(float, u)),
           "cdf": float(cdf(model, u))}, args.out)


def _cmd_conditional(args):
    v = _vector(args.v)
    model = _model_from_args(args, dim=len(v) + 1)
    value = conditional_cdf(model, args.j, args.u, v)
    _emit({"model": model.to_dict(), "j": args.j, "u": args.u,
           "v": list(map(float, v)), "conditional_cdf": float(value)}, args.out)


def _cmd_probe(args):
    gen = Generator(Family(args.family), args.theta)
    kind = args.kind
    if kind in ("C0", "C1", "C2", "C3"):
        s_grid = np.logspace(-2, -10, 9)
        p = gen.tail_index
        if kind == "C0":
            vals = gen.tail_index_probe(args.x, s_grid)
            target = args.x ** p
        elif kind == "C1":
            vals = gen.phi_one_minus(s_grid) / s_grid ** p
            target = gen.slope_const
        elif kind == "C2":
            vals = -gen.phi_prime_one_minus(s_grid) / s_grid ** (p - 1.0)
            target = p * gen.slope_const
        else:
            vals = -s_grid * gen.phi_prime_one_minus(s_grid) / gen.phi_one_minus(s_grid)
            target = p
        _write_probe_csv(zip(s_grid, vals, [target] * len(s_grid)), args.out)
        return
    n_grid = np.array([int(x) for x in args.n_grid.split(",")])
    if kind == "doa":
        model = _model_from_args(args, dim=args.d)
        x = _vector(args.x_vec)
        vals = doa_convergence_probe(model, x, n_grid)
        target = doa_limit(model, x)
    elif kind == "cond-limit":
        model = _model_from_args(args, dim=args.d)
        x = _vector(args.x_vec)
        vals, clamped = conditional_limit_probe(model, args.u, args.j, x, n_grid)
        target = float(np.sum(np.abs(x) ** model.generator.tail_index))
        if clamped:
            print("# note: early grid points clamped into the validity region",
                  file=sys.stderr)
    else:
        raise TailcondError(f"unknown probe kind {kind!r}")
    _write_probe_csv(zip(n_grid, vals, [target] * len(n_grid)), args.out)


def _cmd_sample(args):
    model = _model_from_args(args)
    sm = sample_archimedean(model, args.n, args.seed)
    lines = [",".join(f"u{i + 1}" for i in range(model.dim))]
    for row in sm.data:
        lines.append(",".join(fmt17(v) for v in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_maxima(args):
    model = _model_from_args(args)
    if args.mode == "unconditional":
        rows = [componentwise_max_unconditional(
            _sample_block(model, args.n, args.seed, 0, b))
            for b in range(args.blocks)]
        mx = stack_unconditional(rows, args.n)
    else:
        j = model.dim - 1 if args.j is None else args.j
        nc = norming_constants(model, args.u, j, args.k)
        from .maxima import componentwise_max_conditional
        rows = []
        for b in range(args.blocks):
            sl = accumulate_slice(model, j, args.u, args.eps, args.k,
                                  rng_from_key(args.seed, 0, 1, b), args.n)
            rows.append(componentwise_max_conditional(sl, nc, allow_short=True))
        mx = stack_conditional(rows, nc)
    mx.write_csv(args.out)


def _sample_block(model, n, seed, phase, block):
    from .sampling import sample_rows
    return sample_rows(model, n, rng_from_key(seed, 0, phase, block))


def read_maxima_csv(path) -> np.ndarray:
    """Read a maxima CSV written by :meth:`MaximaSample.write_csv`."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("#"):
            fh.seek(0)
        fh.readline() if first.startswith("#") else None
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return data


def _cmd_pickands(args):
    data = read_maxima_csv(args.infile)
    grid = simplex_grid(data.shape[1], args.mesh)
    a_hat = estimate_pickands(data, grid)
    lines = [",".join(f"t{i + 1}" for i in range(grid.dim)) + ",a_hat"]
    for pt, a in zip(grid.points, a_hat):
        lines.append(",".join(fmt17(v) for v in pt) + "," + fmt17(a))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_test(args):
    data = read_maxima_csv(args.infile)
    result = run_test(data, alpha=args.alpha, source=args.critical,
                      reps=args.reps, seed=args.seed, mesh=args.mesh)
    _emit(result.to_dict(), args.out)


def _cmd_calibrate(args):
    value = critical_value(args.d, args.alpha, "monte-carlo",
                           n_blocks=args.blocks, reps=args.reps,
                           seed=args.seed, mesh=args.mesh)
    _emit({"d": args.d, "alpha": args.alpha, "n_blocks": args.blocks,
           "reps": args.reps, "seed": args.seed, "critical_value": value},
          args.out)


def _experiment_config(args) -> ExperimentConfig:
    base = dict(PRESETS[args.preset]) if args.preset else {}
    if args.config:
        with open(args.config) as fh:
            base.update(json.load(fh))
    if args.scale:
        base.update(PRESETS[args.scale])
    for name, key in [("family", "family"), ("theta", "theta"), ("d", "dim"),
                      ("n", "n"), ("u", "u"), ("eps", "epsilon"), ("k", "k"),
                      ("j", "j"), ("blocks", "blocks"), ("reps", "reps"),
                      ("alpha", "alpha"), ("seed", "seed"),
                      ("critical", "critical_source"),
                      ("calibration_reps", "calibration_reps")]:
        val = getattr(args, name, None)
        if val is not None:
            base[key] = val
    base["threads"] = _threads(args)
    return ExperimentConfig.from_dict(base)


def _threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        return args.threads
    env = os.environ.get("TAILCOND_THREADS")
    return int(env) if env else 1


def _cmd_experiment(args):
    config = _experiment_config(args)
    outdir = args.out
    if args.dims or args.thetas:
        dims = [int(x) for x in (args.dims or str(config.dim)).split(",")]
        thetas = [float(x) for x in (args.thetas or str(config.theta)).split(",")]
        rows = run_table(config, dims, thetas)
        if outdir:
            os.makedirs(outdir, exist_ok=True)
            write_table_csv(rows, os.path.join(outdir, "table1.csv"))
        else:
            for r in rows:
                print(r)
        return
    report = run_experiment(config)
    summary = (f"conditional rejection rate: "
               f"{report.rejection_rate_conditional:.3f}% | unconditional: "
               f"{report.rejection_rate_unconditional:.3f}% | shortfalls: "
               f"{report.shortfall_count}")
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, "report.json"), "w") as fh:
            fh.write(report.to_json() + "\n")
        report.write_runs_csv(os.path.join(outdir, "runs.csv"))
        print(summary)
    else:
        print(report.to_json())
        print(summary, file=sys.stderr)


def _cmd_figure(args):
    config = _experiment_config(args)
    outdir = args.out
    figure_data(config, outdir)
    from .figures import render_figure_bundle
    render_figure_bundle(outdir)
    print(f"wrote fig1_panel{{1..6}}.csv and .svg under {outdir}")


# -- parser -------------------------------------------------------------------

def _add_family_opts(p, *, with_norm=False):
    p.add_argument("--family", required=True,
                   choices=[f.value for f in Family])
    p.add_argument("--theta", type=float, required=True)
    if with_norm:
        p.add_argument("--norm", choices=["sum", "sup", "logistic"],
                       default="sum")
        p.add_argument("--q", type=float, default=1.0,
                       help="logistic norm exponent")


def _add_exp_opts(p):
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--scale", choices=sorted(PRESETS),
                   help="apply a size preset on top of other options")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--family", choices=[f.value for f in Family])
    p.add_argument("--theta", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--u", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--blocks", type=int, help="maxima repetitions N per test")
    p.add_argument("--reps", type=int, help="outer repetitions M")
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--critical", choices=["builtin", "monte-carlo"])
    p.add_argument("--calibration-reps", dest="calibration_reps", type=int)
    p.add_argument("--threads", type=int,
                   help="worker processes (default: TAILCOND_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tailcond",
        description="Archimedean/Archimax copulas, conditional tail "
                    "diagnostics and the maxima simulation pipeline")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("eval", help="evaluate the distribution function")
    _add_family_opts(p, with_norm=True)
    p.add_argument("--u", required=True, help="comma-separated coordinates")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("conditional", help="exact conditional df given one component")
    _add_family_opts(p, with_norm=True)
    p.add_argument("--u", type=float, required=True, help="conditioning level")
    p.add_argument("--j", type=int, default=0, help="conditioned coordinate (0-based)")
    p.add_argument("--v", required=True, help="comma-separated remaining coordinates")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_conditional)

    p = sub.add_parser("probe", help="tail condition and convergence probes")
    _add_family_opts(p, with_norm=True)
    p.add_argument("--kind", required=True,
                   choices=["C0", "C1", "C2", "C3", "doa", "cond-limit"])
    p.add_argument("--x", type=float, default=2.0, help="scale point for C0")
    p.add_argument("--x-vec", dest="x_vec", help="comma-separated x for doa/cond-limit")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--u", type=float, default=0.99)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--n-grid", dest="n_grid",
                   default="100,1000,10000,100000,1000000")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_probe)

    p = sub.add_parser("sample", help="draw i.i.d. copula observations")
    _add_family_opts(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("maxima", help="normalized componentwise maxima sample")
    _add_family_opts(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--mode", choices=["unconditional", "conditional"],
                   default="unconditional")
    p.add_argument("--u", type=float, default=0.99)
    p.add_argument("--eps", type=float, default=0.0005)
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--j", type=int)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_maxima)

    p = sub.add_parser("pickands", help="Pickands dependence estimate from maxima")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mesh", type=float)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_pickands)

    p = sub.add_parser("test", help="tail-independence hypothesis test")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--critical", choices=["builtin", "monte-carlo"],
                   default="monte-carlo")
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--mesh", type=float)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("calibrate", help="Monte Carlo critical value")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--blocks", type=int, default=100)
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--mesh", type=float)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("experiment", help="two-step pipeline / rejection table")
    _add_exp_opts(p)
    p.add_argument("--dims", help="comma-separated dimensions (table mode)")
    p.add_argument("--thetas", help="comma-separated thetas (table mode)")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("figure", help="illustration panels (CSV + SVG)")
    _add_exp_opts(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_figure)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except TailcondError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
