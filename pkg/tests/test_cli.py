import csv
import io
import json

import pytest

from majority_gnp import __version__, rng
from majority_gnp.cli import RHO_HEADER, TABLE_HEADER, main


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_simulate_k4_all_none(capsys):
    assert main(["simulate", "--n", "4", "--p", "1.0", "--red", "2", "--trials", "5", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    rows = rows_of(out)
    assert rows[0] == TABLE_HEADER
    assert rows[1:] == [["5", "1.0", "2", "2", "none", "", "5", "1.0000"]]
    assert "\r" not in out


def test_simulate_bad_p_names_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["simulate", "--n", "10", "--p", "1.5", "--red", "5", "--trials", "1"])
    assert e.value.code == 2
    assert "--p" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--n", "10", "--p", "0.5", "--trials", "1"],  # no --red / --iid
        ["simulate", "--n", "10", "--p", "0.5", "--red", "11", "--trials", "1"],
        ["simulate", "--n", "10", "--p", "0.5", "--red", "5", "--trials", "0"],
        ["simulate", "--n", "10", "--p", "0.5", "--red", "5", "--trials", "1", "--workers", "0"],
        ["simulate", "--n", "10", "--p", "0.5", "--red", "5", "--trials", "1", "--seed", "-3"],
        ["rho", "--n", "20", "--k", "6:1", "--trials", "5"],
        ["rho", "--n", "20", "--k", "11", "--trials", "5"],
        ["rho", "--n", "20", "--k", "a:b", "--trials", "5"],
        ["verify", "--trials", "0"],
        ["bounds", "--n", "550", "--p", "0.5", "--c", "0"],
        ["bounds", "--n", "550", "--p", "1.0", "--c", "6"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_simulate_out_and_manifest(tmp_path, capsys):
    out = tmp_path / "table.csv"
    argv = ["simulate", "--n", "200", "--p", "0.5", "--red", "106", "--trials", "30", "--seed", "42", "--out", str(out)]
    assert main(argv) == 0
    assert capsys.readouterr().out == ""
    rows = rows_of(out.read_text())
    assert rows[0] == TABLE_HEADER
    assert sum(int(r[6]) for r in rows[1:]) == 30
    for r in rows[1:]:
        assert r[4] in {"red", "blue", "none"}
        assert r[7] == f"{int(r[6]) / 30:.4f}"
    man = json.loads((tmp_path / "table.csv.manifest.json").read_text())
    assert man["version"] == __version__
    assert man["subcommand"] == "simulate"
    assert man["master_seed"] == 42
    assert man["prng"] == rng.ALGORITHM
    assert man["parameters"]["red"] == 106 and man["parameters"]["c"] == 6
    assert man["workers"] >= 1 and man["wall_seconds"] >= 0

    # re-running from the manifest reproduces the body
    prm = man["parameters"]
    again = tmp_path / "again.csv"
    main([
        "simulate", "--n", str(prm["n"]), "--p", str(prm["p"]), "--red", str(prm["red"]),
        "--trials", str(prm["trials"]), "--seed", str(man["master_seed"]),
        "--max-days", str(prm["max_days"]), "--out", str(again), "--workers", "3",
    ])
    assert again.read_bytes() == out.read_bytes()


def test_simulate_byte_identical_across_workers(tmp_path):
    bodies = []
    for workers in ("1", "8", "1"):
        out = tmp_path / f"w{workers}-{len(bodies)}.csv"
        main(["simulate", "--n", "300", "--p", "0.3", "--red", "155", "--trials", "40", "--seed", "5",
              "--workers", workers, "--out", str(out)])
        bodies.append(out.read_bytes())
    assert bodies[0] == bodies[1] == bodies[2]


def test_simulate_json_lines(capsys):
    main(["simulate", "--n", "4", "--p", "1.0", "--red", "3", "--trials", "2", "--format", "json-lines"])
    lines = capsys.readouterr().out.splitlines()
    assert [json.loads(s) for s in lines] == [
        {"trials": 2, "p": "1.0", "red": "3", "blue": "1", "winner": "red", "last_day": 1, "count": 2, "frequency": "1.0000"}
    ]


def test_simulate_iid(capsys):
    assert main(["simulate", "--n", "51", "--p", "0.5", "--iid", "--trials", "20", "--seed", "3"]) == 0
    rows = rows_of(capsys.readouterr().out)[1:]
    assert all(r[2] == r[3] == "iid" for r in rows)


def test_bounds_text_and_json(capsys):
    assert main(["bounds", "--n", "550", "--p", "0.5", "--c", "6", "--eps1", "0.01", "--eps2", "0.01", "--r", "0.3"]) == 0
    text = capsys.readouterr().out
    wl = float(text.split("win_lower_bound = ")[1])
    assert wl >= 0.93
    assert main(["bounds", "--n", "550", "--p", "0.5", "--c", "4", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["win_lower_bound"] >= 0.73
    assert set(rep["p_values"]) == {"P1", "P2", "P3", "P4"}
    assert rep["conditions_ok"] == {"day1": True, "eps1": True}


def test_bounds_precondition_exit_3(capsys):
    assert main(["bounds", "--n", "10", "--p", "0.5", "--c", "1", "--eps1", "0.01", "--eps2", "0.01", "--r", "0.3"]) == 3
    cap = capsys.readouterr()
    assert "day-1 advantage condition: False" in cap.out
    assert "precondition failed" in cap.err
    assert main(["bounds", "--n", "10", "--p", "0.5", "--c", "1", "--format", "json"]) == 3
    assert json.loads(capsys.readouterr().out)["conditions_ok"]["day1"] is False


def test_rho_range(tmp_path):
    out = tmp_path / "rho.csv"
    assert main(["rho", "--n", "550", "--p", "0.5", "--k", "0:6", "--trials", "100", "--seed", "7", "--out", str(out)]) == 0
    rows = rows_of(out.read_text())
    assert rows[0] == RHO_HEADER
    assert [r[0] for r in rows[1:]] == [str(k) for k in range(7)]
    assert rows[1][1] == "0.500000" and rows[1][3] == ""
    # v telescopes back to rho
    total = sum(float(r[3]) for r in rows[2:])
    assert total == pytest.approx(float(rows[-1][1]) - 0.5, abs=1e-5)
    assert (tmp_path / "rho.csv.manifest.json").exists()


def test_rho_single_k_includes_difference(capsys):
    assert main(["rho", "--n", "60", "--k", "2", "--trials", "20", "--seed", "1"]) == 0
    rows = rows_of(capsys.readouterr().out)
    assert len(rows) == 2 and rows[1][3] != ""


def test_verify_passes(capsys):
    assert main(["verify", "--n", "550", "--p", "0.5", "--c", "6", "--trials", "300", "--seed", "9"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(s.startswith("PASS") for s in lines)


def test_verify_precondition_exit_3():
    assert main(["verify", "--n", "550", "--c", "300", "--trials", "10"]) == 3


def test_verify_reports_failure(monkeypatch, capsys):
    from majority_gnp import experiments as ex

    bad = ex.Check("forced", 1.0, 0.0, False)
    monkeypatch.setattr(ex, "golden_bound_checks", lambda: [bad])
    assert main(["verify", "--trials", "20"]) == 1
    assert "FAIL  forced" in capsys.readouterr().out


@pytest.mark.slow
def test_verify_reference_point(capsys):
    assert main(["verify", "--n", "550", "--p", "0.5", "--c", "6", "--trials", "2000", "--seed", "9"]) == 0
