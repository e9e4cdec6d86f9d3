"""Command-line interface.

Every run writes its outputs plus ``manifest.json`` into ``--out``. The
manifest records the parsed arguments, seed, package version and the
SHA-256 of each output; ``fourier-epps replay manifest.json --out DIR``
re-executes the run.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .ct import CtConfig, ct_spot_covariance, ct_spot_variance
from .data import TickSeries, common_start, ingest_taq, previous_tick, read_taq_csv, read_ticks_csv, write_ticks_csv
from .epps import ESTIMATORS, epps_curve, saturation_dt, surface_dt, surface_m
from .errors import ConfigError, DataError, NoSaturation, NumericalError
from .mm import KERNELS, MmConfig, _correlation, mm_integrated, mm_spot, n_from_dt
from .models import MODELS, build_params, poisson_sample, read_params_file, simulate

logger = logging.getLogger("fourier_epps")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 2, 3, 4
MANIFEST = "manifest.json"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument types


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _range_list(text: str, cast=float) -> list:
    """``a:b[:step]`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            parts = [cast(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            lo, hi = parts[:2]
            step = parts[2] if len(parts) == 3 else cast(1)
            if step <= 0 or hi < lo:
                raise ValueError
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return [cast(lo + i * step) for i in range(count)]
        return [cast(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b[:step] or a comma list, got {text!r}") from None


def _float_list(text):
    return _range_list(text, float)


def _int_list(text):
    return _range_list(text, int)


# ---------------------------------------------------------------------------
# output helpers


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_csv(path: Path, header: list[str], columns: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([_fmt(v) for v in row])


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class Outputs:
    """Planned output files of one run; refuses to clobber unless forced."""

    def __init__(self, out_dir: Path, force: bool, inputs=()):
        self.dir = out_dir
        self.force = force
        self.inputs = {Path(p).resolve() for p in inputs}
        self.files: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.dir / name
        if p.resolve() in self.inputs:
            raise UsageError(f"output {p} would overwrite an input file")
        if p in self.files:
            raise UsageError(f"output {p} is produced twice")
        if p.exists() and not self.force:
            raise UsageError(f"output {p} exists; pass --force to overwrite")
        self.files.append(p)
        return p

    def check_manifest(self):
        self.path(MANIFEST)
        self.files.pop()


def _spot_columns(sp):
    s22 = sp.s22 if sp.s22 is not None else np.full_like(sp.s11, np.nan)
    s12 = sp.s12 if sp.s12 is not None else np.full_like(sp.s11, np.nan)
    rho = sp.rho if sp.rho is not None else np.full_like(sp.s11, np.nan)
    return [sp.eval_times, sp.s11, s22, s12, rho, sp.valid]


# ---------------------------------------------------------------------------
# input helpers


def _load_ticks(paths: list[str], session_length: float | None) -> list[TickSeries]:
    if not 1 <= len(paths) <= 2:
        raise UsageError("expected one or two tick CSV files")
    raw = [read_ticks_csv(p) for p in paths]
    T = session_length if session_length is not None else max(s.times[-1] for s in raw)
    return [TickSeries(s.times, s.log_prices, T) for s in raw]


def _pair(series: list[TickSeries]) -> tuple[TickSeries, TickSeries]:
    return (series[0], series[-1])


def _resolve_N(args, T: float) -> int:
    if args.N is not None:
        return args.N
    if args.dt is None:
        raise UsageError("one of --N or --dt is required")
    return n_from_dt(args.dt, T)


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(args, out: Outputs) -> None:
    sim_file = out.path("simpath.csv")
    tick_files = [out.path(f"ticks{i + 1}.csv") for i in range(2)] if args.async_mean else []
    out.check_manifest()
    values = read_params_file(args.params) if args.params else {}
    params = build_params(args.model, values)
    path = simulate(params, args.n, args.T, args.seed)
    ts = path.true_sigma
    _write_csv(sim_file, ["t", "x1", "x2", "s11", "s22", "s12"],
               [path.times, path.log_prices[0], path.log_prices[1], ts[:, 0], ts[:, 1], ts[:, 2]])
    for asset, (mean, f) in enumerate(zip(args.async_mean or (), tick_files)):
        ticks = poisson_sample(path, asset, mean, seed=args.seed, session_seconds=args.session_seconds)
        write_ticks_csv(ticks, f)
        logger.info("asset %d: %d ticks", asset + 1, len(ticks))


def cmd_estimate_spot(args, out: Outputs) -> None:
    f = out.path("spot.csv")
    out.check_manifest()
    series = _load_ticks(args.inputs, args.session_length)
    si, sj = _pair(series)
    T = si.session_length
    if args.estimator == "mm":
        cfg = MmConfig(_resolve_N(args, T), args.M, args.grid)
        sp = mm_spot(si, sj, cfg, method=args.method)
    else:
        if args.dt is None:
            raise UsageError("--estimator ct requires --dt")
        if args.N is not None:
            raise UsageError("--N applies to --estimator mm only")
        cfg = CtConfig(args.M, args.grid)
        if len(series) == 1:
            sp = ct_spot_variance(previous_tick(si, args.dt, si.times[0], T), cfg)
        else:
            t0 = common_start(si, sj)
            sp = ct_spot_covariance(previous_tick(si, args.dt, t0, T), previous_tick(sj, args.dt, t0, T), cfg)
    _write_csv(f, ["t", "s11", "s22", "s12", "rho", "valid"], _spot_columns(sp))


def cmd_estimate_integrated(args, out: Outputs) -> None:
    f = out.path("integrated.csv")
    out.check_manifest()
    si, sj = _pair(_load_ticks(args.inputs, args.session_length))
    N = _resolve_N(args, si.session_length)
    s11 = mm_integrated(si, si, N, args.kernel, args.method)
    s22 = mm_integrated(sj, sj, N, args.kernel, args.method)
    s12 = mm_integrated(si, sj, N, args.kernel, args.method)
    rho, valid = _correlation(np.array([s11]), np.array([s22]), np.array([s12]))
    _write_csv(f, ["N", "s11", "s22", "s12", "rho", "valid"], [[N], [s11], [s22], [s12], rho, valid])


def cmd_epps(args, out: Outputs) -> None:
    f = out.path("epps.csv")
    side = out.path("epps.json")
    out.check_manifest()
    if not 0 < args.tail < 1:
        raise UsageError("--tail must lie in (0, 1)")
    si, sj = _pair(_load_ticks(args.inputs, args.session_length))
    curve = epps_curve(si, sj, args.dts, kernel=args.kernel, method=args.method)
    _write_csv(f, ["dt", "N", "rho"], [curve.dts, curve.Ns, curve.rhos])
    try:
        dt_star = saturation_dt(curve, args.band, args.tail)
    except (NoSaturation, ConfigError) as exc:
        logger.warning("no saturation time-scale: %s", exc)
        dt_star = None
    side.write_text(json.dumps({"saturation_dt": dt_star, "band": args.band, "tail_fraction": args.tail},
                               indent=2) + "\n", encoding="utf-8")
    print(f"saturation_dt = {dt_star}")


def cmd_surface(args, out: Outputs) -> None:
    f = out.path("surface.csv")
    side = out.path("surface.json")
    out.check_manifest()
    si, sj = _pair(_load_ticks(args.inputs, args.session_length))
    if args.sweep == "dt":
        if args.dts is None or args.M is None:
            raise UsageError("--sweep dt requires --dts and --M")
        surf = surface_dt(si, sj, args.dts, args.M, args.estimator, args.grid, args.threads)
    else:
        if args.dt is None or args.Ms is None:
            raise UsageError("--sweep M requires --dt and --Ms")
        if min(args.Ms) < 1:
            raise UsageError("--Ms must be positive")
        surf = surface_m(si, sj, args.dt, args.Ms, args.estimator, args.grid, args.threads)
    n1, n2 = surf.values.shape
    _write_csv(f, ["axis1", "t", "rho"],
               [np.repeat(surf.axis1, n2), np.tile(surf.axis2, n1), surf.values.ravel()])
    meta = {
        "kind": "DtByTime" if surf.kind == "dt" else "MByTime",
        "axis1_name": "dt" if surf.kind == "dt" else "M",
        "axis1": [float(v) for v in surf.axis1],
        "axis2_name": "t",
        "axis2_start": float(surf.axis2[0]),
        "axis2_stop": float(surf.axis2[-1]),
        "axis2_points": int(n2),
        "estimator": args.estimator,
        "session_length": si.session_length,
    }
    side.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def cmd_ingest(args, out: Outputs) -> None:
    f = out.path("ticks.csv")
    out.check_manifest()
    series = ingest_taq(read_taq_csv(args.input), args.session_open, args.session_length)
    write_ticks_csv(series, f)


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate-spot": cmd_estimate_spot,
    "estimate-integrated": cmd_estimate_integrated,
    "epps-curve": cmd_epps,
    "surface": cmd_surface,
    "ingest-taq": cmd_ingest,
}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    g.add_argument("--out", default=".", help="output directory (default: current directory)")
    g.add_argument("--force", action="store_true", help="overwrite existing outputs")
    g.add_argument("--threads", type=_positive_int, default=1, help="worker threads for sweeps")
    g.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="fourier-epps", description="Fourier spot volatility and Epps-effect toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate a bivariate model path")
    p.add_argument("model", choices=MODELS)
    p.add_argument("--params", help="key = value parameter file")
    p.add_argument("--n", type=_positive_int, default=28800, help="number of Euler steps")
    p.add_argument("--T", type=_positive_float, default=1.0, help="horizon in sessions")
    p.add_argument("--async-mean", nargs=2, type=_positive_float, metavar=("S1", "S2"),
                   help="also write Poisson-sampled tick files with these mean inter-arrivals (seconds)")
    p.add_argument("--session-seconds", type=_positive_float, default=None,
                   help="session length in seconds for --async-mean (default: one second per step)")

    def inputs(p):
        p.add_argument("inputs", nargs="+", help="one or two t,x tick CSV files")
        p.add_argument("--session-length", type=_positive_float, default=None,
                       help="session length in the files' time unit (default: last tick time)")
        p.add_argument("--method", choices=("fast", "direct"), default="fast")

    p = sub.add_parser("estimate-spot", parents=[common], help="spot (co)variance path")
    inputs(p)
    p.add_argument("--estimator", choices=ESTIMATORS, default="mm")
    nd = p.add_mutually_exclusive_group()
    nd.add_argument("--N", type=_positive_int)
    nd.add_argument("--dt", type=_positive_float)
    p.add_argument("--M", type=_positive_int, required=True)
    p.add_argument("--grid", type=_positive_int, default=1000, help="evaluation points")

    p = sub.add_parser("estimate-integrated", parents=[common], help="integrated MM (co)variance")
    inputs(p)
    nd = p.add_mutually_exclusive_group(required=True)
    nd.add_argument("--N", type=_positive_int)
    nd.add_argument("--dt", type=_positive_float)
    p.add_argument("--kernel", choices=KERNELS, default="dirichlet")

    p = sub.add_parser("epps-curve", parents=[common], help="integrated correlation against dt")
    inputs(p)
    p.add_argument("--dts", type=_float_list, required=True, help="a:b[:step] or comma list, seconds")
    p.add_argument("--kernel", choices=KERNELS, default="dirichlet")
    p.add_argument("--band", type=_positive_float, default=0.05)
    p.add_argument("--tail", type=_positive_float, default=0.25)

    p = sub.add_parser("surface", parents=[common], help="spot correlation surface")
    inputs(p)
    p.add_argument("--sweep", choices=("dt", "M"), required=True)
    p.add_argument("--estimator", choices=ESTIMATORS, default="mm")
    p.add_argument("--dts", type=_float_list, help="dt values for --sweep dt")
    p.add_argument("--M", type=_positive_int, help="M for --sweep dt")
    p.add_argument("--dt", type=_positive_float, help="dt for --sweep M")
    p.add_argument("--Ms", type=_int_list, help="M values for --sweep M")
    p.add_argument("--grid", type=_positive_int, default=1000)

    p = sub.add_parser("ingest-taq", parents=[common], help="convert time,price,volume trades to ticks")
    p.add_argument("input")
    p.add_argument("--session-open", type=float, default=0.0)
    p.add_argument("--session-length", type=_positive_float, default=None)

    p = sub.add_parser("replay", help="re-run a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", required=True, help="output directory for the replay")
    p.add_argument("--force", action="store_true")
    return parser


# ---------------------------------------------------------------------------
# driver


def _input_paths(args) -> list[str]:
    if hasattr(args, "inputs"):
        return list(args.inputs)
    if hasattr(args, "input"):
        return [args.input]
    if getattr(args, "params", None):
        return [args.params]
    return []


def _absolutize(argv: list[str], args) -> list[str]:
    """Record input paths as absolute so the manifest replays from anywhere."""
    paths = set(_input_paths(args))
    out = []
    for a in argv:
        out.append(str(Path(a).resolve()) if a in paths else a)
    return out


def _strip_destination(argv: list[str]) -> list[str]:
    """Drop ``--out`` and ``--force``: a replay chooses its own destination."""
    res, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--out":
            skip = True
        elif not (a.startswith("--out=") or a == "--force"):
            res.append(a)
    return res


def run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(getattr(args, "verbose", 0), 2),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "replay":
        return _replay(args)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = Outputs(out_dir, args.force, _input_paths(args))
    COMMANDS[args.command](args, outputs)

    recorded = {k: v for k, v in vars(args).items() if k not in ("out", "force", "verbose")}
    manifest = {
        "program": "fourier-epps",
        "version": __version__,
        "command": args.command,
        "seed": args.seed,
        "argv": _strip_destination(_absolutize(argv, args)),
        "args": recorded,
        "outputs": {p.name: _sha256(p) for p in outputs.files},
    }
    (out_dir / MANIFEST).write_text(json.dumps(manifest, indent=2, default=str) + "\n", encoding="utf-8")
    return EXIT_OK


def _replay(args) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        argv = list(manifest["argv"])
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"cannot read manifest {args.manifest}: {exc}") from None
    if manifest.get("version") != __version__:
        logger.warning("manifest written by version %s, running %s", manifest.get("version"), __version__)
    argv += ["--out", args.out] + (["--force"] if args.force else [])
    code = run(argv)
    fresh = json.loads((Path(args.out) / MANIFEST).read_text(encoding="utf-8"))
    mismatched = [k for k, h in manifest.get("outputs", {}).items() if fresh["outputs"].get(k) != h]
    if mismatched:  # reported as a numerical failure: same inputs, different bytes
        logger.error("replayed outputs differ: %s", ", ".join(mismatched))
        return EXIT_NUMERICAL
    print(f"replay reproduced {len(fresh['outputs'])} output(s) byte-for-byte")
    return code


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        return run(argv)
    except SystemExit as exc:  # argparse
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, ConfigError) as exc:
        print(f"fourier-epps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"fourier-epps: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, FloatingPointError) as exc:
        print(f"fourier-epps: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"fourier-epps: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
