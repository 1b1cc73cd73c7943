"""Command line front end.

Subcommands:
  run         Monte-Carlo rate experiment, CSV to stdout or --out.
  sweep       Re-run the experiment along one search-control axis.
  complexity  Evaluation counts of both schemes and their ratio.
"""

from __future__ import annotations

import argparse
import sys

from .codebook import CodebookSpec
from .exceptions import BeamformError
from .full_search import fs_complexity
from .harness import (
    CASE_PRESETS,
    SWEEP_AXES,
    build_config,
    emit_csv,
    emit_sweep_csv,
    load_config_file,
    parameter_sweep,
    parse_snr_spec,
    run_experiment,
)
from .turbo import TurboParams, ts_complexity

_AXIS_ALIASES = {
    "k": "k_iterations",
    "m": "m_restarts",
    "restarts": "m_restarts",
    "max-iter": "max_iter",
    "max-len": "max_len",
}


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--nt", type=int, help="transmit antennas")
    p.add_argument("--nr", type=int, help="receive antennas")
    p.add_argument("--nrf", type=int, help="RF chains per side (= stream count)")
    p.add_argument("--bits", type=int, help="codebook resolution for both sides")
    p.add_argument("--snr", help="SNR in dB: single value, comma list, or start:step:stop")
    p.add_argument("--trials", type=int, help="number of Monte-Carlo trials")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--scheme", help="comma list from {fs, turbo_ts}")
    p.add_argument("--max-iter", type=int, help="tabu step cap per restart")
    p.add_argument("--max-len", type=int, help="non-improving steps before stopping")
    p.add_argument("--restarts", type=int, help="stratified restarts per side search")
    p.add_argument("--k", type=int, help="alternating rounds")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--out", help="output CSV path (default: stdout)")


def _config_from_args(args: argparse.Namespace):
    file_values = load_config_file(args.config) if args.config else {}
    overrides = {}
    simple = {
        "nt": "nt",
        "nr": "nr",
        "nrf": "n_rf",
        "trials": "trials",
        "seed": "seed",
        "max_iter": "max_iter",
        "max_len": "max_len",
        "restarts": "m_restarts",
        "k": "k_iterations",
        "workers": "workers",
    }
    for flag, field in simple.items():
        value = getattr(args, flag)
        if value is not None:
            overrides[field] = value
    if args.bits is not None:
        overrides["bits_t"] = args.bits
        overrides["bits_r"] = args.bits
    if args.snr is not None:
        overrides["snr_db_list"] = parse_snr_spec(args.snr)
    if args.scheme is not None:
        overrides["schemes"] = tuple(s.strip() for s in args.scheme.split(",") if s.strip())
    return build_config(file_values, overrides)


def _write_out(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    records = run_experiment(config)
    _write_out(emit_csv(records), args.out)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    axis = _AXIS_ALIASES.get(args.axis, args.axis)
    values = [int(v) for v in args.values.split(",") if v.strip()]
    points = parameter_sweep(config, axis, values)
    _write_out(emit_sweep_csv(points), args.out)
    return 0


def _cmd_complexity(args: argparse.Namespace) -> int:
    bits_list = [int(b) for b in args.bits.split(",") if b.strip()]
    if not bits_list:
        raise ValueError("at least one bits value is required")
    for bits in bits_list:
        preset = CASE_PRESETS.get(bits, {})
        max_iter = args.max_iter or preset.get("max_iter")
        if max_iter is None:
            raise ValueError(
                f"no preset search controls for bits={bits}; pass --max-iter"
            )
        max_len = args.max_len or preset.get("max_len") or max_iter
        m = args.restarts or preset.get("m_restarts", 1)
        k = args.k or 4
        # Codebooks with arbitrary many antennas share the same counts; the
        # antenna number is irrelevant here, use the RF chain count.
        spec = CodebookSpec(n_antennas=args.nrf, n_rf=args.nrf, bits=bits)
        params = TurboParams.shared(
            max_iter=max_iter, max_len=min(max_len, max_iter), m_restarts=m, k_iterations=k
        )
        fs_evals = fs_complexity(spec, spec)
        ts_evals = ts_complexity(params, spec, spec)
        ratio = 100.0 * ts_evals / fs_evals
        print(
            f"bits={bits} n_rf={args.nrf} fs_evals={fs_evals} "
            f"ts_evals={ts_evals} ratio_pct={ratio:.2f}"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beamform",
        description="Codebook beam selection: exhaustive and alternating tabu search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Monte-Carlo rate experiment")
    _add_run_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one search control")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--axis", required=True,
                         help=f"one of {', '.join(SWEEP_AXES)} (aliases: k, m)")
    p_sweep.add_argument("--values", required=True, help="comma list of integer values")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cx = sub.add_parser("complexity", help="evaluation counts and ratio")
    p_cx.add_argument("--bits", required=True, help="comma list of codebook resolutions")
    p_cx.add_argument("--nrf", type=int, default=2, help="RF chains per side")
    p_cx.add_argument("--max-iter", type=int, help="override the preset step cap")
    p_cx.add_argument("--max-len", type=int, help="override the preset stagnation cap")
    p_cx.add_argument("--restarts", type=int, help="override the preset restart count")
    p_cx.add_argument("--k", type=int, help="override the alternating round count")
    p_cx.set_defaults(func=_cmd_complexity)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BeamformError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
