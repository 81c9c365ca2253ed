"""Command-line front end.

Exit codes: 0 success, 1 domain error or negative result, 2 usage or parse
error, 3 I/O error.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .capacity import activation_gap
from .channels import (
    ChannelKind,
    GaussianChannel,
    is_entanglement_breaking_ta,
    is_ppt_channel,
    make_channel,
    ppt_margin,
    validate,
)
from .dilation import dilate
from .errors import GaussactError, InfinityError, InvalidChannel, NoActivation
from .experiments import (
    DEFAULT_NBAR_GRID,
    DEFAULT_T_GRID,
    KINDS,
    LOSSY,
    THERMAL,
    InputParams,
    OptimizerSettings,
    SweepSpec,
    evaluate_input,
    find_threshold,
    nbar,
    optimize_input,
    run_sweep,
    single_capacity,
)
from .records import ConfigError, fmt, parse_config, parse_float_list, to_csv, to_json

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SWEEP_KEYS = (
    "channel",
    "T",
    "N",
    "nbar",
    "nbar_min",
    "nbar_max",
    "nbar_points",
    "grid_points",
    "xtol",
    "input_slice",
    "format",
    "output",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt_matrix(m):
    return "\n".join("  " + " ".join(f"{v: .12f}" for v in row) for row in np.asarray(m))


def _load_custom(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except ValueError as exc:
        raise UsageError(f"cannot parse channel file {path}: {exc}") from exc
    try:
        return GaussianChannel(np.array(data["X"], dtype=float), np.array(data["Y"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"channel file {path} needs numeric 'X' and 'Y' matrices: {exc}") from exc


def _channel_from_args(args):
    if args.channel == "custom":
        if not args.file:
            raise UsageError("--channel custom requires --file")
        return _load_custom(args.file)
    if args.channel in ("lossy", "thermal") and args.T is None:
        raise UsageError(f"--channel {args.channel} requires --T")
    return make_channel(args.channel, T=args.T, N=args.N, n=args.modes)


def _add_channel_args(p):
    p.add_argument("--channel", required=True, choices=[k.value for k in ChannelKind])
    p.add_argument("--T", type=float)
    p.add_argument("--N", type=float, default=0.0)
    p.add_argument("--modes", type=int, default=1, help="mode count for the identity channel")
    p.add_argument("--file", help="JSON file with 'X' and 'Y' for a custom channel")


def cmd_validate(args, out):
    ch = _channel_from_args(args)
    v = validate(ch)
    out.write(f"channel: {ch!r}\n")
    out.write(f"CP: {str(v.valid).lower()} (min eigenvalue {fmt(v.min_eigenvalue)})\n")
    if ch.is_square:
        out.write(f"PPT: {str(is_ppt_channel(ch)).lower()} (min eigenvalue {fmt(ppt_margin(ch))})\n")
    if ch.kind is ChannelKind.THERMAL_ATTENUATOR:
        eb = is_entanglement_breaking_ta(ch.params["T"], ch.params["N"])
        out.write(f"EB: {str(eb).lower()}\n")
    return EXIT_OK if v.valid else EXIT_DOMAIN


def _kind(args):
    if args.channel:
        return args.channel
    return LOSSY if args.N == 0 else THERMAL


def cmd_eval(args, out):
    kind = _kind(args)
    cap = single_capacity(kind, args.T, args.N)
    if args.nbar is not None:
        if args.x is not None or args.y is not None:
            raise UsageError("give either --nbar or --x/--y, not both")
        settings = OptimizerSettings(args.grid_points, args.xtol)
        p, res = optimize_input(kind, args.T, args.N, args.nbar, settings)
    else:
        if args.x is None or args.y is None:
            raise UsageError("give --nbar or both --x and --y")
        p = InputParams(args.x, args.y)
        res = evaluate_input(kind, args.T, args.N, p)
    try:
        gap = activation_gap(res.i_c, cap)
    except InfinityError:
        gap = -math.inf
    fields = [
        ("channel", kind),
        ("T", fmt(args.T)),
        ("Nbar_env", fmt(args.N)),
        ("nbar_in", fmt(nbar(p))),
        ("x", fmt(p.x)),
        ("y", fmt(p.y)),
        ("Ic_bits", fmt(res.i_c)),
        ("H_out_bits", fmt(res.h_out)),
        ("H_env_bits", fmt(res.h_env)),
        ("capacity_bits", fmt(cap.value)),
        ("capacity_kind", cap.kind.value),
        ("gap_bits", fmt(gap)),
    ]
    for k, v in fields:
        out.write(f"{k}: {v}\n")
    return EXIT_OK


def _sweep_settings(args):
    cfg = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        cfg = parse_config(text, SWEEP_KEYS)
    for key in SWEEP_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = str(val)
    try:
        kind = cfg.get("channel", LOSSY)
        if kind not in KINDS:
            raise ConfigError(f"channel must be one of {KINDS}, got {kind!r}")
        t_grid = parse_float_list(cfg["T"]) if "T" in cfg else DEFAULT_T_GRID
        if "nbar" in cfg:
            if any(k in cfg for k in ("nbar_min", "nbar_max", "nbar_points")):
                raise ConfigError("use either 'nbar' or 'nbar_min/nbar_max/nbar_points'")
            n_grid = parse_float_list(cfg["nbar"])
        elif any(k in cfg for k in ("nbar_min", "nbar_max", "nbar_points")):
            lo = float(cfg.get("nbar_min", 0.1))
            hi = float(cfg.get("nbar_max", 20.0))
            count = int(cfg.get("nbar_points", 50))
            if not (0 < lo <= hi) or count < 1:
                raise ConfigError("need 0 < nbar_min <= nbar_max and nbar_points >= 1")
            n_grid = tuple(float(v) for v in np.geomspace(lo, hi, count))
        else:
            n_grid = DEFAULT_NBAR_GRID
        settings = OptimizerSettings(int(cfg.get("grid_points", 64)), float(cfg.get("xtol", 1e-9)))
        spec = SweepSpec(
            T_grid=t_grid,
            nbar_grid=n_grid,
            N=float(cfg.get("N", 0.0)),
            kind=kind,
            settings=settings,
            input_slice=cfg.get("input_slice", "optimized"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    fmt_name = cfg.get("format", "csv")
    if fmt_name not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt_name!r}")
    return spec, fmt_name, cfg.get("output", "-")


def cmd_sweep(args, out):
    try:
        spec, fmt_name, output = _sweep_settings(args)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    records = run_sweep(spec)
    if fmt_name == "csv":
        text = to_csv(records, stamp=f"gaussact {__version__}" if args.stamp else None)
    else:
        text = to_json(records)
    if output == "-":
        out.write(text)
    else:
        tmp = output + ".part"
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, output)
    failed = [r for r in records if r.error]
    for r in failed:
        sys.stderr.write(f"T={fmt(r.T)} nbar={fmt(r.nbar)}: {r.error}\n")
    return EXIT_OK


def cmd_threshold(args, out):
    settings = OptimizerSettings(args.grid_points, args.xtol)
    try:
        res = find_threshold(args.N, args.nbar, tol=args.tol, settings=settings)
    except NoActivation as exc:
        out.write(f"no activation: {exc}\n")
        return EXIT_DOMAIN
    out.write(f"T_star: {fmt(res.T)}\n")
    out.write(f"gap_at_T_star: {fmt(res.gap_lower)}\n")
    out.write(f"T_upper: {fmt(res.T_upper)}\n")
    out.write(f"gap_at_T_upper: {fmt(res.gap_upper)}\n")
    return EXIT_OK


def _test_states(n, count=50, seed=0):
    from scipy.linalg import expm

    from .symplectic import symplectic_form

    rng = np.random.default_rng(seed)
    j = symplectic_form(n)
    for _ in range(count):
        h = rng.normal(size=(2 * n, 2 * n))
        s = expm(0.3 * j @ (h + h.T))
        lam = np.repeat(1.0 + rng.exponential(1.0, size=n), 2)
        yield s @ np.diag(lam) @ s.T


def cmd_dilate(args, out):
    ch = _channel_from_args(args)
    try:
        d = dilate(ch, method=args.method)
    except InvalidChannel as exc:
        out.write(f"invalid channel: {exc}\n")
        return EXIT_DOMAIN
    recon = max(d.reconstruction_residual(g) for g in _test_states(d.n_modes))
    out.write(f"channel: {ch!r}\n")
    out.write(f"env_modes: {d.env_modes}\n")
    out.write(f"S:\n{_fmt_matrix(d.S)}\n")
    out.write(f"env_state:\n{_fmt_matrix(d.env_state)}\n")
    out.write(f"symplectic_residual: {d.symplectic_residual():.3e}\n")
    out.write(f"reconstruction_residual: {recon:.3e}\n")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="gaussact", description="Gaussian channel capacity activation numerics")
    parser.add_argument("--version", action="version", version=f"gaussact {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check complete positivity, PPT and entanglement breaking")
    _add_channel_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dilate", help="print a symplectic dilation and its residuals")
    _add_channel_args(p)
    p.add_argument("--method", choices=("auto", "general"), default="auto")
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("eval", help="coherent information and gap at one point")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--N", type=float, default=0.0)
    p.add_argument("--channel", choices=KINDS)
    p.add_argument("--nbar", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--grid-points", type=int, default=64)
    p.add_argument("--xtol", type=float, default=1e-9)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="optimized gap over a (T, nbar) grid")
    p.add_argument("--config", help="flat 'key = value' file; flags override it")
    p.add_argument("--channel", choices=KINDS)
    p.add_argument("--T", help="comma-separated transmissivities")
    p.add_argument("--N", type=float)
    p.add_argument("--nbar", help="comma-separated input photon numbers")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--output", help="output path, '-' for stdout")
    p.add_argument("--input-slice", dest="input_slice", choices=("optimized", "diagonal"))
    p.add_argument("--stamp", action="store_true", help="prefix CSV with a version comment line")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("threshold", help="largest T with a positive optimized gap")
    p.add_argument("--nbar", type=float, required=True)
    p.add_argument("--N", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--grid-points", type=int, default=64)
    p.add_argument("--xtol", type=float, default=1e-9)
    p.set_defaults(func=cmd_threshold)
    return parser


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"gaussact: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"gaussact: I/O error: {exc}\n")
        return EXIT_IO
    except (GaussactError, ValueError) as exc:
        sys.stderr.write(f"gaussact: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
