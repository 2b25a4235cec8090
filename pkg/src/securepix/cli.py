"""Command-line front end.

Subcommands: keygen, encrypt, decrypt, metrics, curves, mc-report.  All
randomness flows through explicit --seed flags and every command is
deterministic given its flags, config, and seeds.  Configuration precedence
is --set overrides > --config file (or $SECUREPIX_CONFIG) > built-in
defaults.  Error classes map to distinct nonzero exit codes (see errors.py);
argparse usage errors exit with 2.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import codec, metrics
from .array import ArrayConfig, pva_for_level, random_key
from .config import RunConfig, apply_override, load_config
from .errors import ConfigError, SecurePixError
from .fefet import PolarizationState, conductance, switched_fraction
from .frame import read_netpbm, write_netpbm
from .variation import sample_pixel

ENV_CONFIG = "SECUREPIX_CONFIG"


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file (or $SECUREPIX_CONFIG)")
    parser.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.defaults()
    path = args.config or os.environ.get(ENV_CONFIG)
    if path:
        cfg = load_config(path, base=cfg)
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, raw = item.split("=", 1)
        cfg = apply_override(cfg, key.strip(), raw.strip())
    return cfg


def _fmt(value: float) -> str:
    return "inf" if value == float("inf") else f"{value:.9g}"


def cmd_keygen(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    levels = args.levels if args.levels is not None else cfg.levels
    arr = ArrayConfig(
        rows=args.rows,
        cols=args.cols,
        levels=levels,
        pva_min=cfg.pva_min,
        pva_max=cfg.pva_max,
        half_select_kappa=cfg.half_select_kappa,
    )
    key_matrix = random_key(arr, args.seed)
    key = codec.KeyFile(
        rows=arr.rows,
        cols=arr.cols,
        levels=arr.levels,
        pva_min=arr.pva_min,
        pva_max=arr.pva_max,
        matrix=key_matrix,
        seed=args.seed,
    )
    codec.write_key(args.out, key)
    print(f"key space: {key.key_space_bits():g} bits")
    return 0


def cmd_encrypt(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    if args.no_variation:
        cfg = replace(cfg, variation=replace(cfg.variation, enabled=False))
    key = codec.read_key(args.key)
    image, _ = read_netpbm(args.input)
    result = codec.encrypt(image, key, cfg, variation_seed=args.seed)
    write_netpbm(args.output, result.frame, metadata=result.metadata)
    print(f"half-select audit: max |dp| = {result.disturb_report.max_delta_p!r}")
    return 0


def cmd_decrypt(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    key = codec.read_key(args.key)
    image, _ = read_netpbm(args.input)
    recovered = codec.decrypt(image, key, cfg)
    write_netpbm(args.output, recovered)
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    image, _ = read_netpbm(args.image)
    rows: list[tuple[str, float]] = []
    report = metrics.correlation_report(image)
    rows.append(("horizontal_corr", report.horizontal))
    rows.append(("vertical_corr", report.vertical))
    rows.append(("diagonal_corr", report.diagonal))
    if args.ref:
        ref, _ = read_netpbm(args.ref)
        rows.append(("psnr_db", metrics.psnr(image, ref)))
    if args.csv:
        print("metric,value")
        for name, value in rows:
            print(f"{name},{_fmt(value)}")
    else:
        for name, value in rows:
            print(f"{name} = {_fmt(value)}")
    return 0


def cmd_curves(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for level in range(1, cfg.levels + 1):
        lut = codec.nominal_level_curve(level, cfg, n_points=args.points)
        lut.write_csv(out_dir / f"curve_level_{level:02d}.csv")
    print(f"wrote {cfg.levels} curves to {out_dir}")
    return 0


def cmd_mc_report(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    # this command is the Monte Carlo study, so sampling is always on
    spec = replace(cfg.variation, enabled=True)
    fe = cfg.pixel.fe
    arr = cfg.array_config(1, 1)
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write("level,pva,p_mean,p_std,p_min,p_max,g_mean,g_std,g_min,g_max\n")
        for level in range(1, cfg.levels + 1):
            pva = pva_for_level(level, arr)
            p_vals = np.empty(args.samples)
            g_vals = np.empty(args.samples)
            for i in range(args.samples):
                sample = sample_pixel(args.seed, 0, i, spec)
                p = switched_fraction(pva, fe, sample.thickness_factor)
                p_vals[i] = p
                g_vals[i] = conductance(PolarizationState(p), fe, sample.dvth_fe)
            fh.write(
                f"{level},{pva!r},"
                f"{float(p_vals.mean())!r},{float(p_vals.std())!r},"
                f"{float(p_vals.min())!r},{float(p_vals.max())!r},"
                f"{float(g_vals.mean())!r},{float(g_vals.std())!r},"
                f"{float(g_vals.min())!r},{float(g_vals.max())!r}\n"
            )
    print(f"wrote mc report for {cfg.levels} levels to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="securepix",
        description="In-pixel FeFET image encryption: key management, codec, and reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a random per-pixel level key (.spk)")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--levels", type=int, default=None, help="defaults to array.levels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a PGM/PPM image with a key")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--key", required=True)
    p.add_argument("--seed", type=int, default=0, help="process-variation seed")
    p.add_argument("--no-variation", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="recover an image using the key's lookup tables")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--key", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("metrics", help="adjacent-pixel correlations and optional PSNR")
    p.add_argument("image")
    p.add_argument("ref", nargs="?", default=None)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("curves", help="export the nominal per-level transfer curves")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--points", type=int, default=1024)
    _add_config_flags(p)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("mc-report", help="Monte Carlo moments of p and conductance per level")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_mc_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SecurePixError as exc:
        print(f"securepix {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
