"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 input-format error,
4 numeric-precondition error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bqf, criteria, ensemble, figures, numtheory, signals, specfun

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4


class InputFormatError(Exception):
    pass


def fmt(x) -> str:
    return f"{float(x):.12g}"


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {kind.__name__} value: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return parse


def _nonneg_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid float value: {text!r}") from None
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _float_list(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid comma-separated reals: {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _out_dir(args) -> Path:
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _load_signal(args):
    if getattr(args, "curious", None):
        return signals.curious_signal(args.curious)
    if not args.signal:
        raise argparse.ArgumentTypeError("one of --signal or --curious is required")
    try:
        return signals.read_signal_csv(args.signal)
    except OSError as exc:
        raise InputFormatError(f"{args.signal}: {exc.strerror}") from None
    except signals.SignalFormatError as exc:
        raise InputFormatError(str(exc)) from None


# --- subcommands ----------------------------------------------------------

def cmd_specfun(args, out):
    mu = np.linspace(0.0, args.mu_max, args.points)
    path = _out_dir(args) / "specfun.csv"
    figures.write_csv(path, ["mu", "H", "G"], [mu, specfun.eval_H(mu), specfun.eval_G(mu)])
    print(f"wrote {path}", file=out)


def cmd_roots(args, out):
    c = specfun.constants()
    print(f"mu_zero    {fmt(c.mu_zero)}", file=out)
    print(f"h_max      {fmt(c.h_max)}", file=out)
    print(f"mu_at_max  {fmt(c.mu_at_max)}", file=out)
    eps = args.eps if args.eps else [1 / 6, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001]
    rows = [(e, specfun.mu_of_epsilon(e)) for e in eps]
    print("epsilon,mu_eps", file=out)
    for e, m in rows:
        print(f"{fmt(e)},{fmt(m)}", file=out)
    if args.out_dir:
        figures.write_csv(_out_dir(args) / "mu_of_epsilon.csv", ["epsilon", "mu_eps"],
                          [[r[0] for r in rows], [r[1] for r in rows]])


def cmd_synth(args, out):
    sig = _load_signal(args)
    curve = signals.sample_curve(sig, args.T, args.points)
    path = _out_dir(args) / "curve.csv"
    signals.write_curve_csv(curve, path)
    print(f"wrote {path}", file=out)


def cmd_bqf(args, out):
    sig = _load_signal(args)
    closed = bqf.fit_closed_form(sig, args.T)
    mom = bqf.compute_moments(sig, args.T)
    via = bqf.fit_via_moments(mom, args.T)
    oracle = bqf.fit_numeric_oracle(signals.sample_curve(sig, args.T, args.points))
    print(f"{'route':<14}{'alpha_star':>22}{'gamma_star':>22}", file=out)
    for name, fit in (("closed_form", closed), ("via_moments", via), ("numeric", oracle)):
        print(f"{name:<14}{fmt(fit.alpha_star):>22}{fmt(fit.gamma_star):>22}", file=out)
    print(f"I1 {fmt(mom.I1)}", file=out)
    print(f"I2 {fmt(mom.I2)}", file=out)


def cmd_criteria(args, out):
    sig = _load_signal(args)
    if args.require_d:
        try:
            criteria.diffusion_coefficient(sig, args.T)
        except criteria.NotDiffusiveError as exc:
            raise NumericError(str(exc)) from None
    rep = criteria.diffusion_criterion(sig, args.T, epsilon=args.eps, scan=args.scan)
    rows = [("gamma_star", fmt(rep.gamma_star)), ("diffusive", str(rep.diffusive).lower()),
            ("theorem2_holds", str(rep.theorem2_holds).lower()), ("A", fmt(rep.A)),
            ("D", fmt(rep.D) if rep.D is not None else "")]
    t3 = rep.theorem3
    if t3 is not None:
        rows += [("theorem3_epsilon", fmt(t3.epsilon)), ("theorem3_mu_eps", fmt(t3.mu_eps)),
                 ("theorem3_S", fmt(t3.S)), ("theorem3_R", fmt(t3.R)), ("theorem3_B", fmt(t3.B)),
                 ("theorem3_holds", str(t3.holds).lower())]
    elif args.scan:
        rows.append(("theorem3_holds", "false"))
    for note in rep.notes:
        rows.append(("note", note))
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}", file=out)
    if args.csv:
        path = _out_dir(args) / "criteria.csv"
        with path.open("w", newline="") as fh:
            fh.write("field,value\n")
            for k, v in rows:
                fh.write(f"{k},{v}\n")


def cmd_dos(args, out):
    res = numtheory.diff_of_squares(args.p)
    print(f"p {res.p}", file=out)
    print(f"count {len(res.solutions)}", file=out)
    print("solutions " + ("{}" if not res.solutions else
                          " ".join(f"({k},{j})" for k, j in res.solutions)), file=out)


def cmd_witness(args, out):
    try:
        w = numtheory.small_frequency_witness(args.b, args.eps)
    except numtheory.ApproximationSearchError as exc:
        raise NumericError(str(exc)) from None
    print("k " + ",".join(map(str, w.k_tuple)), file=out)
    print("j " + ",".join(map(str, w.j_tuple)), file=out)
    print(f"signed_nu {fmt(w.signed_nu)}", file=out)
    print(f"nu {fmt(w.nu)}", file=out)


def cmd_ensemble(args, out):
    try:
        model = ensemble.load_model(args.model)
    except OSError as exc:
        raise InputFormatError(f"{args.model}: {exc.strerror}") from None
    except ensemble.ModelFormatError as exc:
        raise InputFormatError(str(exc)) from None
    betas = [args.beta] if args.beta is not None else args.beta_grid
    if any(b < 0 for b in betas):
        raise argparse.ArgumentTypeError("beta values must be >= 0")
    rep = ensemble.diffusion_vs_temperature(model, betas, args.T, args.samples, args.seed,
                                            method=args.method, workers=args.workers)
    d = _out_dir(args)
    with (d / "h_matrix.csv").open("w", newline="") as fh:
        fh.write("beta,k,j,h,h_se\n")
        for est in rep.estimates:
            for k in range(model.N):
                for j in range(model.N):
                    fh.write(f"{fmt(est.beta)},{k + 1},{j + 1},{fmt(est.h[k, j])},"
                             f"{fmt(est.h_se[k, j])}\n")
    with (d / "diffusion.csv").open("w", newline="") as fh:
        fh.write("beta,tau,D,D_se,dD_dtau,dD_dtau_se,ess\n")
        for row in zip(rep.beta, rep.tau, rep.D, rep.D_se, rep.dD_dtau, rep.dD_dtau_se, rep.ess):
            fh.write(",".join("inf" if np.isinf(v) else fmt(v) for v in row) + "\n")
    for b, e in zip(rep.beta, rep.ess):
        if e < 0.01 * args.samples:
            print(f"warning: effective sample size {e:.3g} < 1% of samples at beta={fmt(b)}",
                  file=sys.stderr)
    print(f"wrote {d / 'h_matrix.csv'}", file=out)
    print(f"wrote {d / 'diffusion.csv'}", file=out)


def cmd_figure(args, out):
    ids = figures.FIGURES if args.fig == "all" else (args.fig,)
    for fig in ids:
        for p in figures.reproduce_figure(fig, args.out_dir):
            print(f"wrote {p}", file=out)


class NumericError(Exception):
    pass


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasidiff",
                                description="Diffusion criterion for quasi-periodic MSD signals.")
    sub = p.add_subparsers(dest="command", required=True)

    def signal_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--signal", help="CSV with header a,nu")
        g.add_argument("--curious", type=_positive(int), metavar="N",
                       help="use the curious signal with N terms")

    sp = sub.add_parser("specfun", help="tabulate H and G")
    sp.add_argument("--mu-max", type=_positive(float), default=50.0)
    sp.add_argument("--points", type=_positive(int), default=2001)
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_specfun)

    sp = sub.add_parser("roots", help="mu_zero, H_max and a mu(epsilon) table")
    sp.add_argument("--eps", type=_float_list, help="comma-separated epsilons in (0, 1/6]")
    sp.add_argument("--out-dir")
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("synth", help="sample a signal on [0, T]")
    signal_args(sp)
    sp.add_argument("--T", type=_positive(float), required=True)
    sp.add_argument("--points", type=_positive(int), default=1000)
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("bqf", help="best quadratic fit by three routes")
    signal_args(sp)
    sp.add_argument("--T", type=_positive(float), required=True)
    sp.add_argument("--points", type=_positive(int), default=100_001,
                    help="grid size for the numeric oracle")
    sp.set_defaults(func=cmd_bqf)

    sp = sub.add_parser("criteria", help="diffusion criterion report")
    signal_args(sp)
    sp.add_argument("--T", type=_positive(float), required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--eps", type=_positive(float))
    g.add_argument("--scan", action="store_true")
    sp.add_argument("--require-d", action="store_true",
                    help="fail with exit 4 unless the diffusion coefficient is defined")
    sp.add_argument("--csv", action="store_true", help="also write criteria.csv")
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_criteria)

    sp = sub.add_parser("numtheory", help="difference of squares and frequency witnesses")
    nsub = sp.add_subparsers(dest="nt_command", required=True)
    d = nsub.add_parser("dos")
    d.add_argument("--p", type=_positive(int), required=True)
    d.set_defaults(func=cmd_dos)
    w = nsub.add_parser("witness")
    w.add_argument("--b", type=_float_list, required=True)
    w.add_argument("--eps", type=_positive(float), required=True)
    w.set_defaults(func=cmd_witness)

    sp = sub.add_parser("ensemble", help="Gibbs-ensemble h matrix and D(tau)")
    sp.add_argument("--model", required=True, help="model JSON")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--beta", type=_nonneg_float)
    g.add_argument("--beta-grid", type=_float_list)
    sp.add_argument("--T", type=_positive(float), required=True)
    sp.add_argument("--samples", type=_positive(int), default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=("exact", "importance"), default="exact")
    sp.add_argument("--workers", type=_positive(int), default=1)
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_ensemble)

    sp = sub.add_parser("figure", help="reproduce a figure as CSV + SVG")
    sp.add_argument("fig", choices=figures.FIGURES + ("all",))
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_figure)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except argparse.ArgumentTypeError as exc:
        print(f"quasidiff: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputFormatError as exc:
        print(f"quasidiff: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, ValueError, ArithmeticError) as exc:
        print(f"quasidiff: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"quasidiff: I/O error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
