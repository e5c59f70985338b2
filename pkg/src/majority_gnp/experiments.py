"""Seeded Monte Carlo trials of majority dynamics on G(n, p)."""

import logging
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import ceil, sqrt

import numpy as np

from . import bounds as bd
from . import rng
from .dynamics import BLUE, DAY_CAP, DEFAULT_MAX_DAYS, RED, Coloring, run
from .errors import InvalidParameter, PreconditionViolated
from .graph import gen_gnp
from .rng import Seed

log = logging.getLogger(__name__)

FIXED = "fixed-counts"
IID = "iid-uniform"
WORKERS_ENV = "MAJORITY_GNP_WORKERS"
# blue sizes kept per trial for milestone statistics (days 0..4)
EARLY_DAYS = 5
Z95 = 1.96


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class TrialConfig:
    n: int
    p: float
    trials: int
    master_seed: int
    red: int | None = None
    initial_mode: str = FIXED
    max_days: int = DEFAULT_MAX_DAYS
    # start from the complement colouring (camps exchanged, same graphs)
    swap_colors: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter("n must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameter(f"p must lie in [0, 1], got {self.p}")
        if self.trials < 1:
            raise InvalidParameter("trials must be at least 1")
        if self.max_days < 1:
            raise InvalidParameter("max_days must be at least 1")
        if self.initial_mode == FIXED:
            if self.red is None or not 0 <= self.red <= self.n:
                raise InvalidParameter(f"fixed-counts mode needs 0 <= red <= n, got {self.red}")
        elif self.initial_mode != IID:
            raise InvalidParameter(f"unknown initial mode {self.initial_mode!r}")
        Seed(self.master_seed)

    def initial_coloring(self, seed):
        if self.initial_mode == FIXED:
            c = Coloring.first_red(self.n, self.red)
        else:
            c = Coloring.iid_uniform(self.n, seed)
        return c.swapped() if self.swap_colors else c


@dataclass
class AggregateStats:
    config: TrialConfig
    tally: dict
    undecided: dict
    # trials x EARLY_DAYS array of |B_t|, -1 where unknown (day-capped runs)
    early_blue: np.ndarray = field(repr=False)
    milestone_hits: tuple | None = None
    rng_metadata: dict = field(default_factory=dict)

    @property
    def trials(self):
        return self.config.trials

    @property
    def undecided_count(self):
        return sum(self.undecided.values())

    def wins(self, winner):
        return sum(c for (w, _), c in self.tally.items() if w == winner)

    def frequency(self, winner):
        return self.wins(winner) / self.trials

    def wins_by(self, winner, day):
        """Trials won by ``winner`` at or before ``day``."""
        return sum(c for (w, t), c in self.tally.items() if w == winner and t <= day)

    def modal_last_day(self):
        """Most frequent last day among decided trials (ties: earliest day)."""
        days = Counter()
        for (_, t), c in self.tally.items():
            days[t] += c
        if not days:
            return None
        return min(days, key=lambda t: (-days[t], t))


def _run_one(cfg, i):
    seed = Seed(cfg.master_seed, i)
    g = gen_gnp(cfg.n, cfg.p, seed)
    traj = run(g, cfg.initial_coloring(seed), cfg.max_days)
    early = [traj.blue_at(t) for t in range(EARLY_DAYS)]
    early = [-1 if b is None else b for b in early]
    return traj.winner, traj.last_day, traj.termination, early


def run_trials(cfg, bounds=None, workers=None):
    """Run ``cfg.trials`` independent trials; trial ``i`` uses ``Seed(master, i)``.

    Results are merged in trial order, so the output does not depend on
    ``workers``.
    """
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        results = [_run_one(cfg, i) for i in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda i: _run_one(cfg, i), range(cfg.trials)))

    tally, undecided = Counter(), Counter()
    early = np.empty((cfg.trials, EARLY_DAYS), dtype=np.int64)
    for i, (winner, last_day, term, eb) in enumerate(results):
        if winner is None:
            undecided[term] += 1
            if term == DAY_CAP:
                log.warning("trial %d hit the %d-day cap without repeating a state", i, cfg.max_days)
        else:
            tally[(winner, last_day)] += 1
        early[i] = eb

    hits = None
    if bounds is not None:
        ms = bd.milestones(bounds)
        hits = tuple(int(((early[:, t] >= 0) & (early[:, t] <= ms[t])).sum()) for t in range(EARLY_DAYS))

    return AggregateStats(
        config=cfg,
        tally=dict(sorted(tally.items())),
        undecided=dict(sorted(undecided.items())),
        early_blue=early,
        milestone_hits=hits,
        rng_metadata={"algorithm": rng.ALGORITHM, "master_seed": cfg.master_seed},
    )


def table_rows(stats):
    """Table rows keyed like the CSV schema, sorted by (winner, last_day).

    Undecided trials appear as a single ``none`` row with an empty last day.
    """
    cfg = stats.config
    if cfg.initial_mode == FIXED:
        red = cfg.n - cfg.red if cfg.swap_colors else cfg.red
        red, blue = str(red), str(cfg.n - red)
    else:
        red = blue = "iid"
    rows = []
    for (winner, day), count in stats.tally.items():
        rows.append((winner, day, count))
    if stats.undecided_count:
        rows.append(("none", None, stats.undecided_count))
    rows.sort(key=lambda r: (r[0], -1 if r[1] is None else r[1]))
    return [
        {
            "trials": cfg.trials,
            "p": cfg.p,
            "red": red,
            "blue": blue,
            "winner": w,
            "last_day": "" if d is None else d,
            "count": c,
            "frequency": c / cfg.trials,
        }
        for w, d, c in rows
    ]


@dataclass(frozen=True)
class RhoEstimate:
    k: int
    n: int
    p: float
    trials: int
    red_win_freq: float
    ci95_halfwidth: float


def ci95(freq, trials):
    if trials == 0:
        return 0.0
    return Z95 * sqrt(freq * (1 - freq) / trials)


def estimate_rho(k, n, p, trials, master_seed, workers=None, max_days=DEFAULT_MAX_DAYS):
    """Red win frequency from ``ceil(n/2) + k`` initial Red vertices.

    ``k = 0`` returns exactly 1/2 by colour symmetry without simulating.
    """
    if not 0 <= k <= n / 2:
        raise InvalidParameter(f"k must lie in [0, n/2], got {k}")
    if k == 0:
        return RhoEstimate(0, n, p, 0, 0.5, 0.0)
    cfg = TrialConfig(n=n, p=p, trials=trials, master_seed=master_seed, red=ceil(n / 2) + k, max_days=max_days)
    f = run_trials(cfg, workers=workers).frequency(RED)
    return RhoEstimate(k, n, p, trials, f, ci95(f, trials))


@dataclass(frozen=True)
class DefectorValue:
    k: int
    rho: float
    value: float
    ci95_halfwidth: float


def defector_values(k_max, n, p, trials_per_k, master_seed, workers=None, k_min=1):
    """Successive differences v(k) = rho(k) - rho(k-1) for k = k_min..k_max.

    Every k reuses the same master seed, so the estimates share graphs
    (common random numbers).  Half-widths are combined as if independent,
    which overstates them for positively correlated estimates.
    """
    if k_max < 1 or not 1 <= k_min <= k_max:
        raise InvalidParameter("need 1 <= k_min <= k_max")
    rhos = {k: estimate_rho(k, n, p, trials_per_k, master_seed, workers) for k in range(k_min - 1, k_max + 1)}
    out = []
    for k in range(k_min, k_max + 1):
        cur, prev = rhos[k], rhos[k - 1]
        out.append(
            DefectorValue(
                k, cur.red_win_freq, cur.red_win_freq - prev.red_win_freq, sqrt(cur.ci95_halfwidth**2 + prev.ci95_halfwidth**2)
            )
        )
    return out


def values_decreasing(values):
    """For each consecutive pair, whether v(k) >= v(k+1) holds within the CI."""
    return [
        (a.k, a.value + a.ci95_halfwidth + b.ci95_halfwidth >= b.value)
        for a, b in zip(values, values[1:])
    ]


@dataclass(frozen=True)
class MilestoneResult:
    day: int
    qualifying: int
    hits: int
    p_bound: float
    threshold: float | None
    frequency: float | None

    @property
    def applicable(self):
        return self.qualifying > 0

    @property
    def passed(self):
        """None when no trial met the previous milestone."""
        if not self.applicable:
            return None
        return self.frequency >= self.threshold


def milestone_frequencies(stats, report):
    ms, pv = report.milestones, report.p_values
    eb = stats.early_blue
    known = eb >= 0
    below = known & (eb <= np.asarray(ms)[None, :])
    out = []
    for t in range(1, EARLY_DAYS):
        q = int(below[:, t - 1].sum())
        h = int((below[:, t - 1] & below[:, t]).sum())
        p_t = pv[t - 1]
        pc = bd.clamp01(p_t)
        if q:
            thr = 1 - p_t - 3 * sqrt(pc * (1 - pc) / stats.trials)
            out.append(MilestoneResult(t, q, h, p_t, thr, h / q))
        else:
            out.append(MilestoneResult(t, 0, 0, p_t, None, None))
    return out


def milestone_check(cfg, bounds, workers=None, stats=None):
    """Per-day conditional milestone frequencies against 1 - P_t - 3 stderr.

    The standard error uses the total trial count.  Pass
    ``stats`` to reuse trials that were already run with ``cfg``.
    """
    if cfg.initial_mode != FIXED or cfg.swap_colors:
        raise InvalidParameter("milestone check needs fixed-counts mode")
    if cfg.n != bounds.n or cfg.p != bounds.p:
        raise InvalidParameter("trial config and bound parameters disagree on n or p")
    if cfg.n - cfg.red > cfg.n / 2 - bounds.c:
        raise PreconditionViolated("red >= n/2 + c")
    report = bd.theorem_report(bounds)
    if stats is None:
        stats = run_trials(cfg, bounds, workers)
    return milestone_frequencies(stats, report)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: float
    passed: bool


# reference values are rounded to 5 decimals: compare within half a unit
GOLDEN_SLACK = 0.5e-5


def golden_bound_checks():
    """Reference values at (550, 1/2, c, 0.01, 0.01, 0.3) for c = 6 and c = 4."""
    rep = bd.theorem_report(bd.BoundParams(550, 0.5, 6, 0.01, 0.01, 0.3))
    rep4 = bd.theorem_report(bd.BoundParams(550, 0.5, 4, 0.01, 0.01, 0.3))
    out = [
        Check(f"P{t} <= {lim}", v, lim, v <= lim + GOLDEN_SLACK)
        for t, v, lim in zip(range(1, 5), rep.p_values, (0.06866, 0.00144, 0.00010, 0.00005))
    ]
    out.append(Check("win bound (c=6) >= 0.93", rep.win_lower_bound, 0.93, rep.win_lower_bound >= 0.93))
    out.append(Check("win bound (c=4) >= 0.73", rep4.win_lower_bound, 0.73, rep4.win_lower_bound >= 0.73))
    return out

