"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 theorem precondition failure.
"""

import argparse
import csv
import io
import json
import sys
import time

from . import __version__, rng
from . import bounds as bd
from . import experiments as ex
from .errors import InvalidParameter, PreconditionViolated

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3

TABLE_HEADER = ["trials", "p", "red", "blue", "winner", "last_day", "count", "frequency"]
RHO_HEADER = ["k", "rho", "ci95", "v"]


def _fmt_p(p):
    return repr(float(p))


def _write_csv(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _write_jsonl(fh, header, rows):
    for r in rows:
        fh.write(json.dumps(dict(zip(header, r))) + "\n")


def _emit(args, header, rows):
    buf = io.StringIO(newline="")
    (_write_csv if args.format == "csv" else _write_jsonl)(buf, header, rows)
    body = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _write_manifest(args, params, workers, started):
    if not args.out:
        return
    manifest = {
        "tool": "majority-gnp",
        "version": __version__,
        "subcommand": args.command,
        "parameters": params,
        "master_seed": args.seed,
        "prng": rng.ALGORITHM,
        "workers": workers,
        "wall_seconds": round(time.perf_counter() - started, 3),
    }
    with open(args.out + ".manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _workers(args):
    return ex.default_workers() if args.workers is None else args.workers


def cmd_simulate(args, parser):
    if not 0.0 <= args.p <= 1.0:
        parser.error(f"argument --p: must lie in [0, 1], got {args.p}")
    if args.n < 1:
        parser.error("argument --n: must be positive")
    if args.trials < 1:
        parser.error("argument --trials: must be at least 1")
    if args.red is not None and not 0 <= args.red <= args.n:
        parser.error(f"argument --red: must lie in [0, n], got {args.red}")
    started = time.perf_counter()
    mode = ex.IID if args.iid else ex.FIXED
    cfg = ex.TrialConfig(
        n=args.n, p=args.p, trials=args.trials, master_seed=args.seed,
        red=args.red, initial_mode=mode, max_days=args.max_days,
    )
    workers = _workers(args)
    stats = ex.run_trials(cfg, workers=workers)
    rows = [
        [r["trials"], _fmt_p(r["p"]), r["red"], r["blue"], r["winner"], r["last_day"], r["count"], f"{r['frequency']:.4f}"]
        for r in ex.table_rows(stats)
    ]
    _emit(args, TABLE_HEADER, rows)
    params = {
        "n": args.n, "p": args.p, "red": args.red, "initial_mode": mode,
        "c": None if args.red is None else args.red - args.n / 2,
        "trials": args.trials, "max_days": args.max_days, "format": args.format,
    }
    _write_manifest(args, params, workers, started)
    return EXIT_OK


def _bound_params(args, parser):
    try:
        return bd.BoundParams(args.n, args.p, args.c, args.eps1, args.eps2, args.r)
    except InvalidParameter as e:
        parser.error(str(e))


def cmd_bounds(args, parser):
    params = _bound_params(args, parser)
    day1, eps1 = bd.check_conditions(params)
    try:
        rep = bd.theorem_report(params, p1_variant=args.p1_variant)
    except PreconditionViolated as e:
        if args.format == "json":
            print(json.dumps({"error": "precondition", "condition": e.condition,
                              "conditions_ok": {"day1": day1, "eps1": eps1}}))
        else:
            print(f"day-1 advantage condition: {day1}")
            print(f"2*eps1*n > 1: {eps1}")
            print(f"precondition failed: {e.condition}", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.format == "json":
        print(json.dumps(rep.to_dict(), sort_keys=True))
        return EXIT_OK
    print(f"n={params.n} p={params.p} c={params.c} eps1={params.eps1} eps2={params.eps2} r={params.r}")
    print(f"day-1 advantage condition: {day1}")
    print(f"2*eps1*n > 1: {eps1}")
    for t, m in enumerate(rep.milestones):
        print(f"milestone n^B_{t} = {m:.6g}")
    for t, v in enumerate(rep.p_values, 1):
        print(f"P{t} = {v:.6g}")
    print(f"total failure = {rep.total_failure:.6g}")
    print(f"win_lower_bound = {rep.win_lower_bound:.6f}")
    return EXIT_OK


def _parse_k_range(text):
    parts = text.split(":")
    if len(parts) == 1:
        lo = hi = int(parts[0])
    elif len(parts) == 2:
        lo, hi = int(parts[0]), int(parts[1])
    else:
        raise ValueError(text)
    if lo < 0 or hi < lo:
        raise ValueError(text)
    return lo, hi


def cmd_rho(args, parser):
    try:
        lo, hi = _parse_k_range(args.k)
    except ValueError:
        parser.error(f"argument --k: expected K or LO:HI with 0 <= LO <= HI, got {args.k!r}")
    if hi > args.n / 2:
        parser.error(f"argument --k: k must not exceed n/2 = {args.n / 2}")
    if args.trials < 1:
        parser.error("argument --trials: must be at least 1")
    if not 0.0 <= args.p <= 1.0:
        parser.error(f"argument --p: must lie in [0, 1], got {args.p}")
    started = time.perf_counter()
    workers = _workers(args)
    need = range(max(0, lo - 1), hi + 1)
    est = {k: ex.estimate_rho(k, args.n, args.p, args.trials, args.seed, workers, args.max_days) for k in need}
    rows = []
    for k in range(lo, hi + 1):
        e = est[k]
        v = "" if k == 0 else f"{e.red_win_freq - est[k - 1].red_win_freq:.6f}"
        rows.append([k, f"{e.red_win_freq:.6f}", f"{e.ci95_halfwidth:.6f}", v])
    _emit(args, RHO_HEADER, rows)
    params = {"n": args.n, "p": args.p, "k": [lo, hi], "trials": args.trials,
              "max_days": args.max_days, "format": args.format}
    _write_manifest(args, params, workers, started)
    return EXIT_OK


def cmd_verify(args, parser):
    if args.trials < 1:
        parser.error("argument --trials: must be at least 1")
    params = _bound_params(args, parser)
    try:
        rep = bd.theorem_report(params)
    except PreconditionViolated as e:
        print(f"precondition failed: {e.condition}", file=sys.stderr)
        return EXIT_PRECONDITION

    ok = True

    def line(passed, name, detail):
        nonlocal ok
        if passed is None:
            print(f"N/A   {name}: {detail}")
            return
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

    for chk in ex.golden_bound_checks():
        line(chk.passed, chk.name, f"value={chk.value:.6g}")

    red = args.n - int(args.n / 2 - args.c)
    cfg = ex.TrialConfig(n=args.n, p=args.p, trials=args.trials, master_seed=args.seed, red=red, max_days=args.max_days)
    stats = ex.run_trials(cfg, params, _workers(args))
    for m in ex.milestone_check(cfg, params, stats=stats):
        if m.applicable:
            line(m.passed, f"milestone day {m.day}", f"freq={m.frequency:.4f} ({m.hits}/{m.qualifying}) threshold={m.threshold:.4f}")
        else:
            line(None, f"milestone day {m.day}", "no trial met the previous milestone")

    won = stats.wins_by(ex.RED, 4) / stats.trials
    wl = rep.win_lower_bound
    thr = wl - 3 * (wl * (1 - wl) / stats.trials) ** 0.5
    line(won >= thr, "red unanimous by day 4", f"freq={won:.4f} threshold={thr:.4f}")
    return EXIT_OK if ok else EXIT_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="majority-gnp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def run_opts(sp):
        sp.add_argument("--trials", type=int, required=True)
        sp.add_argument("--seed", type=int, default=0, help="master seed (unsigned 64-bit)")
        sp.add_argument("--workers", type=int, default=None,
                        help=f"worker threads (default: ${ex.WORKERS_ENV} or CPU count)")
        sp.add_argument("--max-days", type=int, default=64)

    def bound_opts(sp, required=True, **defaults):
        sp.add_argument("--n", type=int, required=required and "n" not in defaults, default=defaults.get("n"))
        sp.add_argument("--p", type=float, required=required and "p" not in defaults, default=defaults.get("p"))
        sp.add_argument("--c", type=int, required=required and "c" not in defaults, default=defaults.get("c"))
        sp.add_argument("--eps1", type=float, default=0.01)
        sp.add_argument("--eps2", type=float, default=0.01)
        sp.add_argument("--r", type=float, default=0.3)

    sp = sub.add_parser("simulate", help="run seeded trials and write a winner/last-day table")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--red", type=int, help="initial Red camp size (vertices 0..red-1)")
    g.add_argument("--iid", action="store_true", help="colour each vertex uniformly at random")
    run_opts(sp)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["csv", "json-lines"], default="csv")
    sp.set_defaults(func=cmd_simulate, subparser=sp)

    sp = sub.add_parser("bounds", help="evaluate the day-by-day failure bounds")
    bound_opts(sp)
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.add_argument("--p1-variant", choices=[bd.P1_DAY1, bd.P1_PREAMBLE], default=bd.P1_DAY1)
    sp.set_defaults(func=cmd_bounds, subparser=sp)

    sp = sub.add_parser("rho", help="estimate Red win probability per initial advantage k")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, default=0.5)
    sp.add_argument("--k", required=True, help="K or LO:HI")
    run_opts(sp)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["csv", "json-lines"], default="csv")
    sp.set_defaults(func=cmd_rho, subparser=sp)

    sp = sub.add_parser("verify", help="check golden bound values and simulated milestone frequencies")
    bound_opts(sp, n=550, p=0.5, c=6)
    sp.add_argument("--trials", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--max-days", type=int, default=64)
    sp.set_defaults(func=cmd_verify, subparser=sp)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    sp = args.subparser
    if getattr(args, "workers", None) is not None and args.workers < 1:
        sp.error("argument --workers: must be at least 1")
    if getattr(args, "max_days", 1) < 1:
        sp.error("argument --max-days: must be at least 1")
    if not 0 <= getattr(args, "seed", 0) < 1 << 64:
        sp.error("argument --seed: must be an unsigned 64-bit integer")
    try:
        return args.func(args, args.subparser)
    except PreconditionViolated as e:
        print(f"precondition failed: {e.condition}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InvalidParameter as e:
        print(f"{sp.prog}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
