"""Command-line front end: ``hankelorder {synth,estimate,bench,bounds,spectrum,tightness}``.

Exit codes: 0 success, 2 usage error, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import bench, thresholds
from .criteria import CRITERIA
from .hankel import HankelShape, hankel, svd_subspaces
from .selectors import RULES, OrderSelectionError, select_constrained, select_ester, select_samos, select_threshold
from .signal_model import PRESET_IDS, SignalSpec, add_noise, preset, synthesize

log = logging.getLogger("hankelorder")


class UsageError(Exception):
    pass


def parse_float(text: str) -> float:
    text = text.strip().lower()
    if text in ("inf", "+inf", "infinity"):
        return math.inf
    return float(text)


def parse_grid(text: str) -> list[float]:
    """Comma list of values and ``start:step:stop`` ranges (inclusive), e.g. ``0:5:30,inf``."""
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            start, step, stop = (float(p) for p in part.split(":"))
            if step <= 0:
                raise argparse.ArgumentTypeError(f"range step must be positive in {part!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            values.extend(start + i * step for i in range(count))
        else:
            values.append(parse_float(part))
    if not values:
        raise argparse.ArgumentTypeError(f"empty grid {text!r}")
    return values


def _grid(text):
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def read_signal_csv(path) -> np.ndarray:
    """Read ``re,im`` rows (no header) into a complex vector."""
    samples = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 2 columns 're,im', got {len(row)}")
            try:
                re_, im_ = float(row[0]), float(row[1])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: cannot parse {','.join(row)!r} as numbers") from None
            if not (math.isfinite(re_) and math.isfinite(im_)):
                raise ValueError(f"{path}: line {lineno}: non-finite sample")
            samples.append(complex(re_, im_))
    if not samples:
        raise ValueError(f"{path}: no samples")
    return np.array(samples)


def write_signal_csv(fh, samples):
    writer = csv.writer(fh, lineterminator="\n")
    for v in samples:
        writer.writerow([repr(float(v.real)), repr(float(v.imag))])


def _add_signal_args(p, *, snr_default="inf"):
    p.add_argument("--preset", type=int, choices=PRESET_IDS, help="benchmark example id")
    p.add_argument("--spec", type=Path, help="signal spec JSON (modes, length, dt)")
    p.add_argument("--length", type=int, help="number of samples (default 129)")
    p.add_argument("--dt", type=float, help="sample spacing (default per preset)")
    p.add_argument("--snr", type=parse_float, default=parse_float(snr_default), help="SNR in dB, 'inf' for no noise")
    p.add_argument("--noise", choices=("complex", "real"), default="complex")
    p.add_argument("--seed", type=int, default=0)


def _signal_from_args(args) -> SignalSpec:
    if args.preset is not None and args.spec is not None:
        raise UsageError("give either --preset or --spec, not both")
    if args.spec is not None:
        spec = SignalSpec.from_dict(json.loads(args.spec.read_text()))
        return spec.with_options(length=args.length, dt=args.dt)
    if args.preset is None:
        raise UsageError("a signal source is required (--preset or --spec)")
    kwargs = {} if args.length is None else {"length": args.length}
    return preset(args.preset, dt=args.dt, **kwargs)


def cmd_synth(args):
    spec = _signal_from_args(args)
    if args.json:
        print(json.dumps(spec.to_dict(args.preset), indent=2))
        return 0
    noisy = add_noise(synthesize(spec), args.snr, args.noise, np.random.default_rng(args.seed))
    if args.out is None:
        write_signal_csv(sys.stdout, noisy.samples)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            write_signal_csv(fh, noisy.samples)
    log.info("eta=%r", noisy.eta)
    return 0


def cmd_estimate(args):
    if args.input is not None and (args.preset is not None or args.spec is not None):
        raise UsageError("give either --input or a generated signal, not both")
    needs_tau = args.rule in ("threshold", "constrained")
    generated = args.preset is not None or args.spec is not None
    if needs_tau and args.eta is None and not generated:
        # a generated signal carries its true noise level; a file does not
        raise UsageError(f"--eta is required for rule {args.rule!r}")
    if args.input is not None:
        y = read_signal_csv(args.input)
        eta = args.eta
    else:
        spec = _signal_from_args(args)
        noisy = add_noise(synthesize(spec), args.snr, args.noise, np.random.default_rng(args.seed))
        y = noisy.samples
        eta = noisy.eta if args.eta is None else args.eta
    if args.m is None:
        shape = HankelShape.square(y.size)
    else:
        shape = HankelShape(args.m, y.size - args.m + 1)
    subspaces = svd_subspaces(hankel(y, shape))
    if args.rule == "ester":
        result = select_ester(subspaces, args.s_max)
    elif args.rule == "samos":
        result = select_samos(subspaces, args.s_max)
    else:
        default = thresholds.GAVISH if args.rule == "threshold" else (
            thresholds.COMPLEX_HANKEL if args.noise == "complex" else thresholds.REAL_HANKEL
        )
        tau = thresholds.threshold(args.threshold or default, shape.m, shape.n, eta, args.beta)
        if args.rule == "threshold":
            result = select_threshold(subspaces.singular_values, tau)
        else:
            result = select_constrained(subspaces, tau, args.criterion, args.s_max)
    out = result.to_dict()
    out.update(eta=eta, m=shape.m, n=shape.n)
    print(json.dumps(out, indent=2))
    return 0


_BENCH_FLAGS = ("preset", "spec", "length", "dt", "snr", "trials", "rules", "seed", "noise", "beta", "m", "s_max")


def cmd_bench(args):
    if args.config is not None:
        given = [f"--{name.replace('_', '-')}" for name in _BENCH_FLAGS if getattr(args, name) is not None]
        if given:
            raise UsageError(f"--config cannot be combined with {', '.join(given)}")
        config = bench.BenchConfig.from_dict(json.loads(args.config.read_text()))
    else:
        if args.snr is None:
            raise UsageError("--snr is required without --config")
        args_sig = argparse.Namespace(preset=args.preset, spec=args.spec, length=args.length, dt=args.dt)
        spec = _signal_from_args(args_sig)
        config = bench.BenchConfig(
            spec,
            args.snr,
            trials=500 if args.trials is None else args.trials,
            rules=",".join(RULES) if args.rules is None else args.rules,
            master_seed=0 if args.seed is None else args.seed,
            noise_kind=args.noise or "complex",
            beta=thresholds.DEFAULT_BETA if args.beta is None else args.beta,
            m=args.m,
            s_max=args.s_max,
            example_id=args.preset,
        )
    result = bench.run_trials(config, threads=args.threads)
    try:
        paths = bench.write_bench(result, args.out)
    except OSError as exc:
        raise RuntimeError(f"cannot write results to {args.out}: {exc}") from exc
    for line in result.summary_lines():
        print(line)
    log.info("wrote %s", ", ".join(str(p) for p in paths.values()))
    return 0


def _emit_rows(rows, columns, out):
    if out is None:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    else:
        bench.write_rows(out, rows, columns)


def cmd_bounds(args):
    rows = bench.norm_bound_sweep(args.n, args.eta, args.trials, args.beta, args.seed, threads=args.threads)
    _emit_rows(rows, bench.NORM_SWEEP_COLUMNS, args.out)
    return 0


def cmd_spectrum(args):
    hist = bench.spectrum_histogram(args.kind, args.m, args.n, args.eta, args.bins, args.seed, args.draws, args.noise)
    _emit_rows(hist.rows(), bench.SPECTRUM_COLUMNS, args.out)
    edge = 1 + math.sqrt(hist.c)
    log.info(
        "fraction outside MP support +/-0.05: %.4f; draws with max sv above %.4f: %d/%d",
        hist.fraction_outside(0.05), edge, int(np.sum(hist.max_per_draw > edge)), hist.max_per_draw.size,
    )
    return 0


def cmd_tightness(args):
    rows = bench.bound_tightness_sweep(args.r, args.s_max, args.trials, args.seed, args.length)
    _emit_rows(rows, bench.TIGHTNESS_COLUMNS, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hankelorder", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a (noisy) preset signal as re,im CSV")
    _add_signal_args(p)
    p.add_argument("--json", action="store_true", help="print the signal spec as JSON instead")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("estimate", help="estimate the model order of one signal")
    p.add_argument("--input", type=Path, help="re,im CSV without header")
    _add_signal_args(p)
    p.add_argument("--rule", choices=RULES, default="constrained")
    p.add_argument("--eta", type=float, help="noise level; required for threshold rules with --input")
    p.add_argument("--beta", type=float, default=thresholds.DEFAULT_BETA)
    p.add_argument("--threshold", help="threshold kind: t1/complex, t2/real, t3/gavish")
    p.add_argument("--criterion", choices=CRITERIA, default="samos")
    p.add_argument("--m", type=int, help="Hankel rows (default: square)")
    p.add_argument("--s-max", type=int)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="Monte Carlo COR curves and order histograms")
    p.add_argument("--config", type=Path, help="JSON config (exclusive with the flags below)")
    p.add_argument("--preset", type=int, choices=PRESET_IDS)
    p.add_argument("--spec", type=Path)
    p.add_argument("--length", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--snr", type=_grid, help="e.g. 0:5:30 or 0,10,inf")
    p.add_argument("--trials", type=int)
    p.add_argument("--rules", help=f"comma list from {RULES}; options as rule:key=value")
    p.add_argument("--seed", type=int)
    p.add_argument("--noise", choices=("complex", "real"))
    p.add_argument("--beta", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--s-max", type=int)
    p.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
    p.add_argument("--out", type=Path, default=Path("bench_out"))
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("bounds", help="||H_w||_2 spread against the real and Gavish thresholds")
    p.add_argument("--n", type=_int_list, default=[64, 128, 256, 512])
    p.add_argument("--eta", type=_grid, default=[0.25, 0.5, 1.0, 2.0, 4.0])
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--beta", type=float, default=thresholds.DEFAULT_BETA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("spectrum", help="singular value histogram of i.i.d. or Hankel noise")
    p.add_argument("--kind", choices=("iid", "hankel"), default="iid")
    p.add_argument("--m", type=int, default=1024)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--draws", type=int, default=1)
    p.add_argument("--noise", choices=("complex", "real"), default="real")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("tightness", help="gap between ESTER/SAMOS costs and their angle bounds")
    p.add_argument("--r", type=_int_list, default=[2, 4, 6, 8])
    p.add_argument("--s-max", type=int)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--length", type=int, default=65)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_tightness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hankelorder {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OrderSelectionError, RuntimeError, OSError, np.linalg.LinAlgError) as exc:
        print(f"hankelorder {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
