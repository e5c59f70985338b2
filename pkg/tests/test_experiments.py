from math import sqrt

import numpy as np
import pytest

from majority_gnp import bounds as bd
from majority_gnp import experiments as ex
from majority_gnp.dynamics import BLUE, CYCLE, RED
from majority_gnp.errors import InvalidParameter, PreconditionViolated


def small_cfg(**kw):
    base = dict(n=41, p=0.5, trials=60, master_seed=7, red=22)
    base.update(kw)
    return ex.TrialConfig(**base)


def test_k4_balanced_never_decides():
    # K4 with two Red vertices flips forever with period 2
    stats = ex.run_trials(ex.TrialConfig(n=4, p=1.0, trials=10, master_seed=1, red=2), workers=1)
    assert stats.tally == {}
    assert stats.undecided == {CYCLE: 10}
    rows = ex.table_rows(stats)
    assert len(rows) == 1
    assert rows[0]["winner"] == "none" and rows[0]["last_day"] == "" and rows[0]["count"] == 10


def test_k4_three_red_wins_day_one():
    stats = ex.run_trials(ex.TrialConfig(n=4, p=1.0, trials=5, master_seed=1, red=3), workers=1)
    assert stats.tally == {(RED, 1): 5}
    assert stats.modal_last_day() == 1


def test_tally_conserves_trials():
    stats = ex.run_trials(small_cfg(n=30, red=15, p=0.3), workers=2)
    assert sum(stats.tally.values()) + stats.undecided_count == stats.trials
    assert sum(r["count"] for r in ex.table_rows(stats)) == stats.trials
    assert sum(r["frequency"] for r in ex.table_rows(stats)) == pytest.approx(1.0)


@pytest.mark.parametrize("mode", [ex.FIXED, ex.IID])
def test_worker_count_does_not_change_results(mode):
    cfg = small_cfg(initial_mode=mode, red=None if mode == ex.IID else 22)
    a = ex.run_trials(cfg, workers=1)
    b = ex.run_trials(cfg, workers=8)
    assert a.tally == b.tally and a.undecided == b.undecided
    assert np.array_equal(a.early_blue, b.early_blue)


def test_master_seed_changes_results():
    a = ex.run_trials(small_cfg(n=60, red=30, trials=40), workers=1)
    b = ex.run_trials(small_cfg(n=60, red=30, trials=40, master_seed=8), workers=1)
    assert not np.array_equal(a.early_blue, b.early_blue)


@pytest.mark.parametrize("red", [20, 21, 25])
def test_color_swap_exchanges_winners(red):
    # the rule is colour-symmetric, so on the same graphs the swapped start
    # produces the complementary trajectory
    cfg = small_cfg(n=42, red=red)
    a = ex.run_trials(cfg, workers=1)
    b = ex.run_trials(small_cfg(n=42, red=red, swap_colors=True), workers=1)
    flip = {RED: BLUE, BLUE: RED}
    assert b.tally == {(flip[w], t): c for (w, t), c in a.tally.items()}
    assert b.undecided == a.undecided
    known = a.early_blue >= 0
    assert np.array_equal(b.early_blue[known], 42 - a.early_blue[known])
    assert ex.table_rows(b)[0]["red"] == str(42 - red)


def test_iid_rows_label_camps():
    stats = ex.run_trials(small_cfg(initial_mode=ex.IID, red=None, trials=20), workers=1)
    rows = ex.table_rows(stats)
    assert all(r["red"] == "iid" and r["blue"] == "iid" for r in rows)
    # iid starts differ across trials
    assert len(set(stats.early_blue[:, 0].tolist())) > 1


def test_table_rows_sorted():
    stats = ex.run_trials(small_cfg(n=20, red=10, trials=80, p=0.4), workers=1)
    keys = [(r["winner"], -1 if r["last_day"] == "" else r["last_day"]) for r in ex.table_rows(stats)]
    assert keys == sorted(keys)


def test_wins_by_and_modal_day():
    stats = ex.run_trials(small_cfg(n=101, red=56, trials=50), workers=1)
    assert stats.wins_by(RED, 64) == stats.wins(RED)
    assert stats.wins_by(RED, 0) == 0
    days = {}
    for (_, t), c in stats.tally.items():
        days[t] = days.get(t, 0) + c
    best = max(days.values())
    assert stats.modal_last_day() == min(t for t, c in days.items() if c == best)


def test_config_validation():
    with pytest.raises(InvalidParameter):
        small_cfg(p=1.2)
    with pytest.raises(InvalidParameter):
        small_cfg(red=None)
    with pytest.raises(InvalidParameter):
        small_cfg(red=42)
    with pytest.raises(InvalidParameter):
        small_cfg(trials=0)
    with pytest.raises(InvalidParameter):
        small_cfg(initial_mode="other")
    with pytest.raises(InvalidParameter):
        small_cfg(master_seed=-1)


def test_ci95():
    assert ex.ci95(0.5, 100) == pytest.approx(1.96 * 0.05)
    assert ex.ci95(1.0, 100) == 0.0
    assert ex.ci95(0.3, 400) == pytest.approx(1.96 * sqrt(0.21 / 400))


def test_rho_conventions():
    assert ex.estimate_rho(0, 40, 0.5, 10, 1).red_win_freq == 0.5
    full = ex.estimate_rho(20, 40, 0.5, 10, 1, workers=1)
    assert full.red_win_freq == 1.0 and full.ci95_halfwidth == 0.0
    with pytest.raises(InvalidParameter):
        ex.estimate_rho(21, 40, 0.5, 10, 1)


def test_rho_odd_n_uses_ceiling():
    # n = 41, k = 1: 22 Red vs 19 Blue
    est = ex.estimate_rho(1, 41, 0.5, 30, 3, workers=1)
    cfg = ex.TrialConfig(n=41, p=0.5, trials=30, master_seed=3, red=22)
    assert est.red_win_freq == ex.run_trials(cfg, workers=1).frequency(RED)


def test_defector_values_telescope():
    vals = ex.defector_values(4, 60, 0.5, 40, 11, workers=1)
    assert [v.k for v in vals] == [1, 2, 3, 4]
    assert sum(v.value for v in vals) == pytest.approx(vals[-1].rho - 0.5)
    flags = ex.values_decreasing(vals)
    assert [k for k, _ in flags] == [1, 2, 3]


def test_values_decreasing_logic():
    a = ex.DefectorValue(1, 0.7, 0.2, 0.01)
    b = ex.DefectorValue(2, 0.8, 0.1, 0.01)
    c = ex.DefectorValue(3, 1.0, 0.2, 0.01)
    assert ex.values_decreasing([a, b, c]) == [(1, True), (2, False)]


REF_POINT = bd.BoundParams(550, 0.5, 6, 0.01, 0.01, 0.3)


def test_milestone_frequencies_small_run():
    cfg = ex.TrialConfig(n=550, p=0.5, trials=60, master_seed=5, red=281)
    stats = ex.run_trials(cfg, REF_POINT, workers=1)
    res = ex.milestone_check(cfg, REF_POINT, stats=stats)
    assert [m.day for m in res] == [1, 2, 3, 4]
    assert res[0].qualifying == 60  # day 0 milestone holds by construction
    rep = bd.theorem_report(REF_POINT)
    for m, pt in zip(res, rep.p_values):
        pc = min(1.0, pt)
        assert m.threshold == pytest.approx(1 - pt - 3 * sqrt(pc * (1 - pc) / 60))
        assert m.passed
    assert stats.milestone_hits[0] == 60


def test_milestone_not_applicable():
    # every trial starts above the day-0 milestone
    stats = ex.run_trials(ex.TrialConfig(n=550, p=0.5, trials=3, master_seed=5, red=200), workers=1)
    rep = bd.theorem_report(REF_POINT)
    res = ex.milestone_frequencies(stats, rep)
    assert not res[0].applicable and res[0].passed is None


def test_milestone_check_preconditions():
    with pytest.raises(PreconditionViolated):
        ex.milestone_check(ex.TrialConfig(n=550, p=0.5, trials=3, master_seed=1, red=276), REF_POINT)
    with pytest.raises(InvalidParameter):
        ex.milestone_check(ex.TrialConfig(n=500, p=0.5, trials=3, master_seed=1, red=281), REF_POINT)


def test_golden_checks_all_pass():
    checks = ex.golden_bound_checks()
    assert len(checks) == 6
    assert all(c.passed for c in checks)


def test_workers_env(monkeypatch):
    monkeypatch.setenv(ex.WORKERS_ENV, "3")
    assert ex.default_workers() == 3
    monkeypatch.delenv(ex.WORKERS_ENV)
    assert ex.default_workers() >= 1
