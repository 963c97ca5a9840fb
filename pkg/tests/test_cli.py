import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from parkstat import exactprob
from parkstat.cli import main, parse_rational
from parkstat.exactprob import VacancyTable, vacancy_table
from parkstat.formulas import RationalDist, last_pref_distribution
from parkstat.lucky import TriangleTable, a220884_rows, weighted_pascal
from parkstat.montecarlo import SimConfig, SimReport, run_simulation
from parkstat.poly import Poly

from oracles import GOLDEN_A220884


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_prob_examples(capsys):
    assert run(capsys, "prob", "--prefs", "2,2,1")[:2] == (0, "2p - p^2\n")
    assert run(capsys, "prob", "--prefs", "1,2,3")[:2] == (0, "1\n")
    code, out, _ = run(capsys, "prob", "--prefs", "2,2,2", "--p", "1/2")
    assert code == 0 and out.splitlines() == ["2p - 2p^2", "1/2"]


def test_prob_circular(capsys):
    assert run(capsys, "prob", "--prefs", "3,3,3", "--street", "circular")[1] == "1\n"


def test_prob_round_trips(capsys):
    _, out, _ = run(capsys, "prob", "--prefs", "3,3,3", "--format", "csv")
    assert Poly.from_csv(out) == Poly.one_minus_p() ** 2
    _, out, _ = run(capsys, "prob", "--prefs", "2,2,1", "--p", "1/3", "--format", "json")
    obj = json.loads(out)
    assert Poly.from_json(obj) == Poly([0, 2, -1]) and obj["value"] == "5/9"


@pytest.mark.parametrize(
    "argv",
    [
        ("prob", "--prefs", "a,b"),
        ("prob", "--prefs", "4,1,1"),
        ("prob", "--prefs", "2,2,1", "--p", "0.5"),
        ("prob", "--prefs", "2,2,1", "--p", "3/2"),
        ("mean", "--n", "10", "--p", "0.5", "--exact"),
        ("dist", "--n", "4", "--p", "1/0"),
        ("verify", "--theorem", "4", "--n", "3"),
        ("nonsense",),
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(list(argv)))
    assert exc.value.code == 2


def test_size_limit_exit(capsys, monkeypatch):
    assert run(capsys, "prob", "--prefs", ",".join(["1"] * 21))[0] == 3
    monkeypatch.setenv("PARKSTAT_MAX_ENUM", "50")
    assert run(capsys, "verify", "--theorem", "1", "--n", "4")[0] == 3
    assert run(capsys, "vacancy", "--n", "4")[0] == 3


def test_identity_failure_exit(capsys, monkeypatch):
    monkeypatch.setattr(exactprob, "expected_pf_count", lambda n, m=None: 17)
    code, out, _ = run(capsys, "verify", "--theorem", "1", "--n", "3")
    assert code == 1
    assert out.startswith("FAIL") and "16" in out and "17" in out


@pytest.mark.parametrize(
    "argv, needle",
    [
        (("--theorem", "1", "--n", "3"), "mass 16 over 27"),
        (("--theorem", "8", "--n", "5"), "(120, 444, 504, 204, 24)"),
        (("--theorem", "2", "--n", "4", "--m", "2"), "mass 15 over 16"),
        (("--theorem", "3", "--n", "4"), "Theorem 3"),
        (("--theorem", "5", "--n", "30"), "Theorem 5"),
        (("--theorem", "6", "--n", "30", "--p", "1/4"), "Theorem 6"),
        (("--theorem", "7", "--n", "4"), "Theorem 7"),
        (("--theorem", "abel", "--n", "6"), "Abel"),
        (("--theorem", "pascal", "--n", "4"), "weighted Pascal"),
    ],
)
def test_verify_passes(capsys, argv, needle):
    code, out, _ = run(capsys, "verify", *argv)
    assert code == 0 and out.startswith("PASS") and needle in out


def test_triangle_is_a220884(capsys):
    _, out, _ = run(capsys, "triangle", "--kind", "a220884", "--rows", "5")
    t = TriangleTable.from_csv(out)
    assert [list(r) for r in t.rows] == GOLDEN_A220884 and t == a220884_rows(5)
    _, out, _ = run(capsys, "triangle", "--kind", "pascal", "--n", "4", "--format", "json")
    assert TriangleTable.from_json(out) == weighted_pascal(4)


def test_mean(capsys):
    assert run(capsys, "mean", "--n", "1000", "--p", "1/2", "--exact")[1] == "1001/2\n"
    code, out, _ = run(capsys, "mean", "--n", "10", "--p", "0.3", "--asymptotic")
    assert code == 0 and float(out) == pytest.approx(5.825998792854535)


def test_dist_round_trip(capsys, tmp_path):
    target = tmp_path / "d.csv"
    code, out, _ = run(capsys, "dist", "--n", "7", "--p", "2/5", "--out", str(target))
    assert code == 0 and out == ""
    assert RationalDist.from_csv(target.read_text()) == last_pref_distribution(7, Fraction(2, 5))
    _, out, _ = run(capsys, "dist", "--n", "4", "--p", "1/4", "--bruteforce")
    assert RationalDist.from_csv(out) == last_pref_distribution(4, Fraction(1, 4))


def test_tv(capsys):
    obj = json.loads(run(capsys, "tv", "--n", "3", "--p", "1/2")[1])
    assert obj["tv"] == "1/48" and obj["holds"] is True


def test_lucky(capsys):
    out = run(capsys, "lucky", "--n", "3", "--kind", "linear")[1]
    assert out.splitlines()[1:] == ["0,6", "1,15", "2,6"]
    out = run(capsys, "lucky", "--n", "4", "--format", "json")[1]
    assert "58" in out


def test_vacancy_round_trip(capsys):
    obj = json.loads(run(capsys, "vacancy", "--n", "3", "--format", "json")[1])
    assert VacancyTable.from_json(obj) == vacancy_table(3)


def test_simulate_json_round_trip(capsys):
    argv = ("simulate", "--n", "20", "--p", "0.5", "--samples", "5000", "--seed", "7", "--format", "json")
    rep = SimReport.from_json(json.loads(run(capsys, *argv)[1]))
    assert rep == run_simulation(SimConfig(20, 0.5, 5000, seed=7))


def test_simulate_histogram_and_sweep(capsys):
    out = run(capsys, "simulate", "--n", "10", "--p", "1/4", "--samples", "2000", "--histogram")[1]
    lines = out.splitlines()
    assert lines[0] == "j,count,frequency" and len(lines) == 11
    out = run(capsys, "sweep", "--n", "10", "--samples", "2000", "--p-grid", "0,1/2,1")[1]
    assert len(out.splitlines()) == 4


def _simulate(threads, extra=()):
    env = dict(os.environ, NUMBA_NUM_THREADS="4")
    cmd = [sys.executable, "-m", "parkstat", "simulate", "--n", "100", "--p", "0.5",
           "--samples", "100000", "--seed", "7", "--threads", str(threads), *extra]
    return subprocess.run(cmd, env=env, capture_output=True, check=True).stdout


def test_simulate_thread_independent():
    one = _simulate(1)
    assert one == _simulate(4) == _simulate(3)
    assert _simulate(1, ["--histogram"]) == _simulate(4, ["--histogram"])


def test_parse_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("1") == 1
