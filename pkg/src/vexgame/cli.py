"""Command-line entry point: ``vexgame <command> [options]``.

Commands: ``paths gen``, ``game run``, ``sweep``, ``force run``, ``analyze``.
Every option can also come from an INI file given with ``--config``; the
section is named after the command (``[paths gen]``, ``[sweep]``, ...) and
``[common]`` applies to all of them. Flags on the command line win.

Exit status: 0 on success, 1 on invalid input, 2 on a failure while running.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import logging
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    holder_ratio_max,
    in_event_lower,
    in_event_range,
    in_event_upper,
    p_variation,
    predict_log_capital,
    summarize,
    vex_estimate,
)
from .forcing import MultiScaleConfig, dyadic_ladder, run_multiscale, two_account
from .game import GridParams, RoundBudgetExceeded, continuous_capital, run_embedded_game, scan_hits
from .pathgen import KINDS, PathSpec, format_path, generate, read_path
from .strategy import BetaBinomialParams, beta_binomial_bets, log_capital_from_counts

log = logging.getLogger("vexgame")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2
QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)
# options that only say where results go; they do not change the results
OUTPUT_KEYS = {"out", "hits", "table", "config", "log_level"}


class UsageError(Exception):
    """Invalid command line, config file or input value."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- value parsing -------------------------------------------------------------


def float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def pair(text: str) -> tuple[float, float]:
    vals = float_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return vals[0], vals[1]


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _seed_list(args) -> list[int]:
    if args.seeds is not None:
        seeds = sorted(set(args.seeds))
    else:
        if args.n_seeds is None or args.n_seeds < 1:
            raise UsageError("give --seeds or a positive --n-seeds")
        seeds = list(range(args.base_seed, args.base_seed + args.n_seeds))
    if not seeds:
        raise UsageError("seed list is empty")
    return seeds


# -- output ----------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer, bool, np.bool_)):
        return obj.item() if isinstance(obj, np.generic) else obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # repr of a float is the shortest string that reads back to the same double
        return x if math.isfinite(x) else repr(x)
    return obj


def dump_report(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def format_table(header: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(row.get(h)) for h in header])
    return buf.getvalue()


def atomic_write(destination, text: str) -> None:
    """Write via a temp file in the same directory, so readers never see partial output."""
    dest = Path(destination)
    fd, tmp = tempfile.mkstemp(dir=dest.parent, prefix=f".{dest.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, dest)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(destination, text: str) -> None:
    if destination in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(destination, text)


def _check_output(destination) -> None:
    if destination in (None, "-"):
        return
    parent = Path(destination).parent
    if not parent.is_dir():
        raise UsageError(f"output directory {str(parent)!r} does not exist")


def _check_input(source) -> None:
    if not Path(source).is_file():
        raise UsageError(f"input file {str(source)!r} not found")


def _load_path(source):
    _check_input(source)
    try:
        return read_path(source)
    except ValueError as exc:
        raise UsageError(f"{source}: {exc}") from None


def provenance(args, seeds=()) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in OUTPUT_KEYS and not callable(v)}
    blob = json.dumps(_jsonable(config), sort_keys=True)
    return {
        "tool": "vexgame",
        "version": __version__,
        "command": args.command_name,
        "config": config,
        "config_hash": hashlib.sha256(blob.encode()).hexdigest(),
        "seeds": sorted(seeds),
    }


# -- shared option groups ------------------------------------------------------------


def _add_spec_options(p, sweep=False):
    p.add_argument("--kind", choices=KINDS, default="fbm")
    if sweep:
        p.add_argument("--hurst", type=float_list, default=[0.5], help="comma-separated Hurst indices")
    else:
        p.add_argument("--hurst", type=float, default=0.5)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--n-points", type=int, default=1025)
    p.add_argument("--s0", type=float, default=1.0, help="initial price")
    p.add_argument("--slope", type=float, default=0.0)
    p.add_argument("--amplitude", type=float, default=0.0)
    p.add_argument("--frequency", type=float, default=1.0)
    p.add_argument("--weierstrass-base", type=float, default=2.0)
    p.add_argument("--weierstrass-holder", type=float, default=0.5)


def _add_seed_options(p):
    p.add_argument("--seeds", type=int_list, help="explicit comma-separated seeds")
    p.add_argument("--n-seeds", type=int, default=1)
    p.add_argument("--base-seed", type=int, default=0)


def _add_prior_options(p):
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--max-rounds", type=int, default=10**7, help="round budget per game")


def _add_ladder_options(p):
    p.add_argument("--a1", type=float, default=2.0)
    p.add_argument("--a2", type=float, default=2.0)
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, default=5)


def _spec(args, hurst, seed) -> PathSpec:
    try:
        return PathSpec(
            kind=args.kind,
            hurst=hurst,
            sigma=args.sigma,
            horizon=args.horizon,
            n_points=args.n_points,
            initial_price=args.s0,
            seed=seed,
            slope=args.slope,
            amplitude=args.amplitude,
            frequency=args.frequency,
            weierstrass_base=args.weierstrass_base,
            weierstrass_holder=args.weierstrass_holder,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _prior(args) -> BetaBinomialParams:
    try:
        return BetaBinomialParams(args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _multiscale(args, **extra) -> MultiScaleConfig:
    try:
        return MultiScaleConfig(
            a1=args.a1,
            a2=args.a2,
            k_min=args.kmin,
            k_max=args.kmax,
            prior=_prior(args),
            max_rounds=args.max_rounds,
            **extra,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _window(args, path) -> tuple[float, float]:
    t1 = 0.0 if args.t1 is None else args.t1
    t2 = path.horizon if args.t2 is None else args.t2
    if not 0 <= t1 < t2 <= path.horizon:
        raise UsageError(f"window [{t1}, {t2}] must satisfy 0 <= t1 < t2 <= {path.horizon}")
    return t1, t2


def _summary_dict(s) -> dict:
    return {
        "n_star": s.n_star,
        "h": s.heads,
        "t": s.tails,
        "TV": s.total_variation,
        "L": s.net_move,
        "sigma": s.sigma,
        "p": s.p,
        "L_T": s.log_move,
    }


def _prediction_dict(pred) -> dict | None:
    if pred is None:
        return None
    return {
        "regime": pred.regime_name,
        "n_star_kl": pred.kl_growth,
        "logK_eq12": pred.leading,
        "regime_growth": pred.regime,
        "logK_regime": None,  # filled by the caller, which knows n*
        "l2_coefficient": pred.l2_coefficient,
        "expansion": pred.expansion,
    }


# -- commands --------------------------------------------------------------------------


def cmd_paths_gen(args) -> int:
    _require(args, "out")
    seeds = _seed_list(args)
    if len(seeds) > 1 and "{seed}" not in args.out:
        raise UsageError("--out must contain '{seed}' when generating several seeds")
    specs = [(seed, _spec(args, args.hurst, seed)) for seed in seeds]
    targets = [args.out.replace("{seed}", str(seed)) for seed in seeds]
    for t in targets:
        _check_output(t)
    for (seed, spec), target in zip(specs, targets):
        atomic_write(target, format_path(generate(spec)))
        log.info("wrote %s (seed %d, %d points)", target, seed, spec.n_points)
    return EXIT_OK


def _grid_from_args(args) -> tuple[GridParams, tuple[float, float, int] | None]:
    """Grid plus the ``(a1, a2, k)`` form used by the regime formulas."""
    given = {
        "delta": args.delta1 is not None or args.delta2 is not None,
        "eta": args.eta1 is not None or args.eta2 is not None,
        "scale": args.k is not None,
    }
    if sum(given.values()) != 1:
        raise UsageError("give exactly one of --delta1/--delta2, --eta1/--eta2 or --a1/--a2/--k")
    try:
        if given["scale"]:
            grid = GridParams.from_scale(args.a1, args.a2, args.k)
            return grid, (args.a1, args.a2, args.k)
        if given["delta"]:
            _require(args, "delta1", "delta2")
            grid = GridParams.from_deltas(args.delta1, args.delta2)
        else:
            _require(args, "eta1", "eta2")
            grid = GridParams(args.eta1, args.eta2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if grid.eta1 < 1 and grid.eta2 < 1:
        # any grid is a single scale k = 1 with a_i = 1 / eta_i
        return grid, (1 / grid.eta1, 1 / grid.eta2, 1)
    return grid, None


def cmd_game_run(args) -> int:
    _require(args, "path")
    _check_output(args.out)
    _check_output(args.hits)
    path = _load_path(args.path)
    grid, scale = _grid_from_args(args)
    prior = _prior(args)
    t1, t2 = _window(args, path)

    hits = scan_hits(path, grid, t1, t2, max_rounds=args.max_rounds)
    bets = beta_binomial_bets(hits.outcomes, prior, grid.rho)
    traj = continuous_capital(path, hits, bets)
    discrete = run_embedded_game(hits, bets[:-1], grid.rho)
    summary = summarize(hits, grid)
    pred = None if scale is None else predict_log_capital(summary, *scale)
    pred_d = _prediction_dict(pred)
    if pred_d is not None:
        pred_d["logK_regime"] = pred.regime - 0.5 * math.log(summary.n_star)

    report = {
        "provenance": provenance(args),
        "grid": {"eta1": grid.eta1, "eta2": grid.eta2, "delta1": grid.delta1, "delta2": grid.delta2, "rho": grid.rho},
        "window": {"t1": t1, "t2": t2},
        "summary": _summary_dict(summary),
        "capital": {
            "logK_exact": traj.log_horizon_capital,
            "logK_completed": float(log_capital_from_counts(hits.heads, hits.tails, prior, grid.rho)),
            "open_bet": traj.open_bet,
            "open_factor": traj.open_factor,
        },
        "prediction": pred_d,
    }
    if args.hits:
        # row i holds the capital after round i and the bet placed for round i + 1
        rows = [
            {"round": i, "time": t, "outcome": x, "log_price": lp, "next_bet": nu, "logK": lk}
            for (i, t, x, lp), nu, lk in zip(hits.rows(), bets, discrete.log_capital)
        ]
        _emit(args.hits, format_table(["round", "time", "outcome", "log_price", "next_bet", "logK"], rows))
    _emit(args.out, dump_report(report))
    return EXIT_OK


def _quantiles(values) -> dict:
    v = np.sort(np.asarray(values, dtype=np.float64))
    if v.size == 0:
        return {f"q{round(q * 100):02d}": None for q in QUANTILES}
    return {f"q{round(q * 100):02d}": float(np.quantile(v, q)) for q in QUANTILES}


SWEEP_TABLE = [
    "hurst", "k", "n_seeds", "n_skipped",
    "logK_q10", "logK_q25", "logK_q50", "logK_q75", "logK_q90",
    "abs_logK_q50", "TV_q50", "n_star_q50",
]  # fmt: skip


def run_sweep(args) -> tuple[dict, list[dict]]:
    seeds = _seed_list(args)
    hursts = sorted(set(args.hurst))
    if not hursts:
        raise UsageError("--hurst list is empty")
    for h in hursts:
        _spec(args, h, seeds[0])
    cfg = _multiscale(args)
    # canonical order, so permuted inputs give identical reports
    args.seeds, args.hurst = seeds, hursts

    per_seed = []
    for h in hursts:
        for seed in seeds:
            path = generate(_spec(args, h, seed))
            move = float(path.log_prices[-1] - path.log_prices[0])
            rec = {"hurst": h, "seed": seed, "L_T": move, "excluded": abs(move) < args.min_abs_move, "scales": []}
            if not rec["excluded"]:
                for r in run_multiscale(path, cfg):
                    s = r.summary
                    rec["scales"].append(
                        {
                            "k": r.k,
                            "skipped": r.skipped,
                            "note": r.note,
                            "n_star": None if s is None else s.n_star,
                            "TV": None if s is None else s.total_variation,
                            "logK": r.log_capital,
                        }
                    )
            per_seed.append(rec)

    rows = []
    for h in hursts:
        kept = [r for r in per_seed if r["hurst"] == h and not r["excluded"]]
        for k in cfg.scales:
            played = [s for r in kept for s in r["scales"] if s["k"] == k and not s["skipped"]]
            logk = [s["logK"] for s in played]
            q = _quantiles(logk)
            rows.append(
                {
                    "hurst": h,
                    "k": k,
                    "n_seeds": len(played),
                    "n_skipped": len(kept) - len(played),
                    **{f"logK_{name}": v for name, v in q.items()},
                    "abs_logK_q50": _quantiles(np.abs(logk))["q50"],
                    "TV_q50": _quantiles([s["TV"] for s in played])["q50"],
                    "n_star_q50": _quantiles([s["n_star"] for s in played])["q50"],
                }
            )
    report = {
        "provenance": provenance(args, seeds),
        "aggregate": rows,
        "excluded": [{"hurst": r["hurst"], "seed": r["seed"], "L_T": r["L_T"]} for r in per_seed if r["excluded"]],
        "per_seed": per_seed,
    }
    return report, rows


def cmd_sweep(args) -> int:
    _check_output(args.out)
    _check_output(args.table)
    report, rows = run_sweep(args)
    if args.table:
        _emit(args.table, format_table(SWEEP_TABLE, rows))
    _emit(args.out, dump_report(report))
    return EXIT_OK


SCALE_COLUMNS = ["k", "n_star", "h", "t", "TV", "L", "sigma", "p", "logK_exact", "logK_eq12", "logK_regime"]


def cmd_force_run(args) -> int:
    _require(args, "path")
    _check_output(args.out)
    path = _load_path(args.path)
    t1, t2 = _window(args, path)
    cfg = _multiscale(args, range_threshold=args.A, target=args.C, t1=t1, t2=t2, n_accounts=args.accounts)

    split = two_account(path, cfg)
    ladder = dyadic_ladder(path, cfg)
    scales = []
    for rec in split.first:
        row = rec.as_row()
        row["skipped"] = rec.skipped
        row["note"] = rec.note
        scales.append(row)
    log_target = math.log(cfg.target)
    above = [r["k"] for r in scales if r["logK_exact"] is not None and r["logK_exact"] > log_target]
    report = {
        "provenance": provenance(args),
        "window": {"t1": t1, "t2": t2},
        "scales": scales,
        "two_account": {
            "t_a": split.t_a,
            "range_exceeded": split.range_exceeded,
            "L_first": split.log_move_first,
            "L_second": split.log_move_second,
            "max_abs_L": split.max_abs_move,
            "anchor_guarantee": split.anchor_guarantee(cfg.range_threshold),
            "per_k": [
                {"k": k, "logK_first": a, "logK_second": b, "logK_total": c} for k, a, b, c in split.log_capitals()
            ],
        },
        "ladder": {
            "ks": list(ladder.ks),
            "freeze_times": list(ladder.freeze_times),
            "final_logK": list(ladder.final_log_capitals),
            "skipped": list(ladder.skipped),
            "n_frozen": ladder.n_frozen,
            "total_initial": float(ladder.total[0]),
            "total_final": float(ladder.total[-1]),
        },
        "forcing": {"target": cfg.target, "scales_above_target": above, "witness": bool(above)},
    }
    _emit(args.out, dump_report(report))
    return EXIT_OK


def cmd_analyze(args) -> int:
    _require(args, "path")
    _check_output(args.out)
    path = _load_path(args.path)
    t1, t2 = _window(args, path)
    if any(p < 1 for p in args.p):
        raise UsageError("--p values must be >= 1")
    values = path.window(t1, t2)[1]
    vex = vex_estimate(path, p_grid=args.p_grid, levels=args.levels, t1=t1, t2=t2)
    report = {
        "provenance": provenance(args),
        "window": {"t1": t1, "t2": t2},
        "p_variation": [{"p": p, "estimate": p_variation(values, p, depth=args.depth)} for p in args.p],
        "vex": {"vex": vex.vex, "holder": vex.holder, "p_grid": vex.p_grid, "slopes": vex.slopes},
        "events": {},
    }
    events = report["events"]
    try:
        if args.upper is not None:
            h, c = args.upper
            events["upper"] = {
                "hurst": h, "C": c,
                "max_ratio": holder_ratio_max(path, h, t1, t2),
                "inside": in_event_upper(path, h, c, t1, t2),
            }  # fmt: skip
        if args.lower is not None:
            h, c = args.lower
            anchors = np.linspace(t1, t2, args.anchors)
            events["lower"] = {"hurst": h, "C": c, "inside": in_event_lower(path, h, c, t1, t2, args.eps, anchors)}
        if args.range is not None:
            events["range"] = {"A": args.range, "inside": in_event_range(path, args.range, t1, t2)}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args.out, dump_report(report))
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vexgame", description="Limit-order games on continuous price paths.")
    parser.add_argument("--version", action="version", version=f"vexgame {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="INI file with defaults for this command")
        p.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)

    def window(p):
        p.add_argument("--t1", type=float)
        p.add_argument("--t2", type=float)

    paths = sub.add_parser("paths", help="price path files").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = paths.add_parser("gen", help="generate path file(s)")
    common(p)
    _add_spec_options(p)
    _add_seed_options(p)
    p.add_argument("--out", help="output file; use {seed} for several seeds")
    p.set_defaults(func=cmd_paths_gen, command_name="paths gen")

    game = sub.add_parser("game", help="single limit-order game").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = game.add_parser("run", help="scan one path on one grid and bet")
    common(p)
    window(p)
    p.add_argument("--path", help="path file")
    p.add_argument("--delta1", type=float)
    p.add_argument("--delta2", type=float)
    p.add_argument("--eta1", type=float)
    p.add_argument("--eta2", type=float)
    p.add_argument("--a1", type=float, default=2.0)
    p.add_argument("--a2", type=float, default=2.0)
    p.add_argument("--k", type=int)
    _add_prior_options(p)
    p.add_argument("--hits", help="CSV export of the hit sequence")
    p.add_argument("--out", help="JSON report (default stdout)")
    p.set_defaults(func=cmd_game_run, command_name="game run")

    p = sub.add_parser("sweep", help="Monte Carlo multiscale capital over seeds")
    common(p)
    _add_spec_options(p, sweep=True)
    _add_seed_options(p)
    _add_ladder_options(p)
    _add_prior_options(p)
    p.add_argument("--min-abs-move", type=float, default=0.0, help="drop seeds with |log S(T) - log S(0)| below this")
    p.add_argument("--table", help="CSV table of per-(hurst, k) quantiles")
    p.add_argument("--out", help="JSON report (default stdout)")
    p.set_defaults(func=cmd_sweep, command_name="sweep")

    force = sub.add_parser("force", help="account constructions").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = force.add_parser("run", help="multiscale games, two-account split and dyadic ladder")
    common(p)
    window(p)
    p.add_argument("--path", help="path file")
    _add_ladder_options(p)
    _add_prior_options(p)
    p.add_argument("--A", type=float, default=1.0, help="range threshold")
    p.add_argument("--C", type=float, default=100.0, help="target capital")
    p.add_argument("--accounts", type=int, default=8)
    p.add_argument("--out", help="JSON report (default stdout)")
    p.set_defaults(func=cmd_force_run, command_name="force run")

    p = sub.add_parser("analyze", help="p-variation, variation exponent and event checks")
    common(p)
    window(p)
    p.add_argument("--path", help="path file")
    p.add_argument("--p", type=float_list, default=[1.0, 2.0], help="p values for p-variation")
    p.add_argument("--depth", type=int, help="finest dyadic level (default: grid resolution)")
    p.add_argument("--p-grid", type=float_list, default=None, help="p grid for the exponent fit")
    p.add_argument("--levels", type=int_list, default=None, help="dyadic levels for the exponent fit")
    p.add_argument("--upper", type=pair, help="H,C for the Hölder upper event")
    p.add_argument("--lower", type=pair, help="H,C for the jaggedness lower event")
    p.add_argument("--eps", type=float_list, default=None, help="eps grid for the lower event")
    p.add_argument("--anchors", type=int, default=256)
    p.add_argument("--range", type=float, help="A for the range event")
    p.add_argument("--out", help="JSON report (default stdout)")
    p.set_defaults(func=cmd_analyze, command_name="analyze")
    return parser


def _subparser_for(parser, argv):
    """The leaf parser selected by ``argv`` and its config section name."""
    names = [a for a in argv if not a.startswith("-")]
    node, section = parser, []
    while True:
        actions = [a for a in node._actions if isinstance(a, argparse._SubParsersAction)]
        if not actions or not names:
            return node, " ".join(section)
        choice = names.pop(0)
        if choice not in actions[0].choices:
            return node, " ".join(section)
        node = actions[0].choices[choice]
        section.append(choice)


def apply_config(parser, argv) -> None:
    """Install config-file values as defaults on the selected command parser."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    _check_input(known.config)
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read(known.config)
    except configparser.Error as exc:
        raise UsageError(f"{known.config}: {exc}") from None
    leaf, section = _subparser_for(parser, argv)
    dests = {a.dest for a in leaf._actions}
    values = {}
    for name in ("common", section):
        if cp.has_section(name):
            for key, raw in cp.items(name):
                dest = key.replace("-", "_")
                if dest not in dests or dest in ("help", "config"):
                    raise UsageError(f"{known.config}: unknown option {key!r} in section [{name}]")
                values[dest] = raw
    leaf.set_defaults(**values)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        apply_config(parser, argv)
        args = parser.parse_args(argv)
        logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except RoundBudgetExceeded as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - last-resort exit status
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
