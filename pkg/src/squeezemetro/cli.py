"""Command-line entry point: ``squeezemetro <subcommand> [options]``.

Exit codes: 0 success, 1 tolerance failure, 2 usage or I/O error.  Defaults may be
supplied by a ``key=value`` file named in ``$SQUEEZEMETRO_CONFIG``; command-line
flags take precedence.
"""

import argparse
import os
import sys
import warnings

from .estimation import (
    SingularOperatingPoint,
    coherent_baseline,
    optimize_r,
    sensitivity,
    singularity_residual,
    su11_sum_singularity,
)
from .fisher import ChannelFamily, cr_bound, qfi_bright, qfi_closed, qfi_general
from .gaussian import ProbeConfig
from .reproduction import (
    CLOSED_FORM,
    DEFAULT_U,
    MOMENT,
    RunConfig,
    oracle_suite,
    rows_to_csv,
    rows_to_json,
    sweep,
    table_cells,
)
from .schemes import Detection, Medium, SchemeSpec

CONFIG_ENV = "SQUEEZEMETRO_CONFIG"
ORACLE_TOL = 1e-6
# higher than the library default: the |u|=2, r=0.8 corner overflows 48 photons
ORACLE_CHECK_CUTOFF = 96


class UsageError(Exception):
    pass


def read_config(path):
    """Parse a flat ``key=value`` file; blank lines and ``#`` comments are ignored."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _add_medium(p):
    p.add_argument("--medium", choices=[m.value for m in Medium], default="loss")
    p.add_argument("--theta", type=float, default=None,
                   help="loss fraction alpha or gain G (default 0.05 / 1.05)")
    p.add_argument("--alpha", type=float, default=None, help="shorthand for --medium loss --theta")
    p.add_argument("--gain", type=float, default=None, help="shorthand for --medium gain --theta")


def _resolve_medium(args):
    if args.alpha is not None and args.gain is not None:
        raise UsageError("--alpha and --gain are mutually exclusive")
    if args.alpha is not None:
        medium, theta = Medium.LOSS, args.alpha
    elif args.gain is not None:
        medium, theta = Medium.GAIN, args.gain
    else:
        medium = Medium(args.medium)
        theta = args.theta
        if theta is None:
            theta = 0.05 if medium is Medium.LOSS else 1.05
    try:
        medium.check(theta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return medium, float(theta)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="squeezemetro",
        description="Absorption/gain metrology with two-mode bright squeezed light.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("reproduce-table1", "reproduce-table2"):
        p = sub.add_parser(name, help=f"recompute {name[-6:]} and compare with the published values")
        p.add_argument("--u", type=float, default=DEFAULT_U)
        p.add_argument("--engine", choices=[MOMENT, CLOSED_FORM], default=MOMENT)

    p = sub.add_parser("sweep", help="scaled sensitivities over a grid of r")
    _add_medium(p)
    p.add_argument("--u", type=float, default=DEFAULT_U)
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=3.5)
    p.add_argument("--r-steps", type=int, default=351)
    p.add_argument("--engine", choices=[MOMENT, CLOSED_FORM], default=MOMENT)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")

    p = sub.add_parser("qfi", help="quantum Fisher information and Cramer-Rao bound")
    _add_medium(p)
    p.add_argument("--u", type=float, default=DEFAULT_U)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--step", type=float, default=None,
                   help="central-difference step (default: analytic derivatives)")
    p.add_argument("--dump-state", metavar="PATH", default=None,
                   help="write the output Gaussian state as JSON")

    p = sub.add_parser("optimize", help="squeezing that maximises the quantum advantage")
    _add_medium(p)
    p.add_argument("--scheme", choices=[d.value for d in Detection], default="bd")
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=4.0)

    p = sub.add_parser("singularity", help="root of the SU(1,1) sum-signal singularity")
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("oracle-check", help="Fock-space vs Gaussian moment equivalence suite")
    p.add_argument("--cutoff", type=int, default=ORACLE_CHECK_CUTOFF)
    p.add_argument("--tol", type=float, default=ORACLE_TOL)

    return parser, sub


def _apply_config(subparsers, values):
    for p in subparsers.choices.values():
        known = {a.dest for a in p._actions}
        p.set_defaults(**{k: v for k, v in values.items() if k in known})


def cmd_table(args, medium):
    cells = table_cells(medium, engine=args.engine, u=args.u)
    label = "theta" if medium is Medium.GAIN else "alpha"
    print(f"{label:>6} {'r':>5} {'column':>8} {'computed':>9} {'published':>9} {'diff':>8}  status")
    for c in cells:
        status = "ok" if c.ok else "MISMATCH"
        print(f"{c.theta:6.2f} {c.r:5.2f} {c.column:>8} {c.computed:9.4f} {c.published:9.2f} "
              f"{c.diff:+8.4f}  {status}")
    n_ok = sum(c.ok for c in cells)
    print(f"{n_ok}/{len(cells)} cells within +/-{cells[0].atol}")
    return 0 if n_ok == len(cells) else 1


def cmd_sweep(args):
    medium, theta = _resolve_medium(args)
    cfg = RunConfig(medium.value, theta, args.u, args.r_min, args.r_max, args.r_steps,
                    args.engine, args.out, args.format)
    try:
        rows = sweep(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = rows_to_csv(rows) if cfg.format == "csv" else rows_to_json(rows)
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    return 0


def cmd_qfi(args):
    medium, theta = _resolve_medium(args)
    family = ChannelFamily(medium, args.u, args.r)
    general = qfi_general(family, theta, step=args.step)
    dd, _ = family.derivative(theta)
    state = family(theta)
    bright = qfi_bright(dd, state.sigma)
    closed = qfi_closed(medium, args.u, args.r, theta)
    print(f"medium={medium.value} theta={theta:g} u={args.u:g} r={args.r:g}")
    print(f"qfi_general      {general.value:.12g}")
    print(f"  term_sigma     {general.term_sigma:.12g}")
    print(f"  term_disp      {general.term_disp:.12g}")
    print(f"qfi_bright       {bright.value:.12g}")
    print(f"qfi_closed_form  {closed:.12g}")
    bound = cr_bound(closed)
    coh = coherent_baseline(ProbeConfig(args.u, args.r), medium, theta)
    print(f"cr_bound         {bound:.12g}")
    print(f"qa_crb           {coh / bound:.12g}")
    if args.dump_state:
        with open(args.dump_state, "w") as fh:
            fh.write(state.to_json(indent=1))
    rel = abs(general.term_disp - closed) / closed if closed else abs(general.term_disp)
    return 0 if rel < 1e-6 else 1


def cmd_optimize(args):
    medium, theta = _resolve_medium(args)
    scheme = SchemeSpec(Detection(args.scheme), medium)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        opt = optimize_r(scheme, theta, (args.r_min, args.r_max))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(f"scheme={scheme.label} theta={theta:g}")
    print(f"r_opt   {opt.r_opt:.6f}")
    print(f"qa_opt  {opt.qa_opt:.6f}")
    return 0


def cmd_singularity(args):
    try:
        r_star = su11_sum_singularity(args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = singularity_residual(args.alpha, r_star)
    print(f"alpha={args.alpha:g}")
    print(f"r_star    {r_star:.10f}")
    print(f"residual  {res:.3e}")
    scheme = SchemeSpec(Detection.SU11_SUM, Medium.LOSS)
    for dr in (-0.01, 0.01):
        try:
            rep = sensitivity(scheme, ProbeConfig(1.0, r_star + dr), args.alpha)
            print(f"delta_alpha(r*{dr:+.2f}) per unit |u|  {rep.delta_theta:.6g}")
        except SingularOperatingPoint as exc:
            print(f"singular at r*{dr:+.2f}: {exc}")
    return 0 if abs(res) < 1e-10 else 1


def cmd_oracle_check(args):
    cases = oracle_suite(cutoff=args.cutoff)
    worst = 0.0
    for c in cases:
        tag = c.error or f"mean {c.mean_dev:.2e}  var {c.var_dev:.2e}"
        print(f"{c.scheme.label:>18} u={c.u:g} r={c.r:g} theta={c.theta:g}  {tag}")
        worst = max(worst, c.max_dev)
    print(f"cutoff={args.cutoff} max deviation {worst:.3e} (tol {args.tol:g})")
    return 0 if worst < args.tol else 1


def main(argv=None):
    parser, sub = build_parser()
    try:
        path = os.environ.get(CONFIG_ENV)
        if path:
            try:
                _apply_config(sub, read_config(path))
            except OSError as exc:
                raise UsageError(f"cannot read config {path}: {exc}") from None
        args = parser.parse_args(argv)
        handler = {
            "reproduce-table1": lambda a: cmd_table(a, Medium.LOSS),
            "reproduce-table2": lambda a: cmd_table(a, Medium.GAIN),
            "sweep": cmd_sweep,
            "qfi": cmd_qfi,
            "optimize": cmd_optimize,
            "singularity": cmd_singularity,
            "oracle-check": cmd_oracle_check,
        }[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
