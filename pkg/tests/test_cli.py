from pathlib import Path

import pytest

from forage.cli import main

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


def test_cutoff(capsys):
    assert main(["cutoff", "--scenario", str(SCEN / "safe_good_news.ini")]) == 0
    out = capsys.readouterr().out
    assert "pbar(1) 0.25" in out


def test_cutoff_alpha0(capsys):
    assert main(["cutoff", "--scenario", str(SCEN / "safe_bad_news.ini")]) == 0
    assert "pbar(0) 0.66666666666666663" in capsys.readouterr().out


def test_parse_error_names_key(tmp_path, capsys):
    text = (SCEN / "safe_good_news.ini").read_text().replace("reward = 15", "reward = abc")
    bad = tmp_path / "bad.ini"
    bad.write_text(text)
    assert main(["cutoff", "--scenario", str(bad)]) == 2
    assert "high.reward" in capsys.readouterr().err
    assert main(["cutoff", "--scenario", str(tmp_path / "missing.ini")]) == 2
    assert main(["nonsense"]) == 2


def test_precondition_exit(capsys):
    assert main(["cutoff", "--scenario", str(SCEN / "balanced.ini")]) == 3


def test_delta_surface_csv(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (out1, out2):
        assert main(["delta-surface", "--scenario", str(SCEN / "safe_bad_news.ini"), "--out", str(out)]) == 0
    data = out1.read_bytes()
    assert data == out2.read_bytes()
    lines = data.decode().split("\n")
    assert lines[0] == "p_H,r_over_lambda,regime,pi_alpha0,pi_alpha1,delta_pi"
    rows = [l.split(",") for l in lines[1:] if l]
    assert len(rows) == 99 * 5
    assert all(float(r[5]) >= 0 for r in rows)
    assert all(float(r[5]) == 0.0 for r in rows if float(r[0]) >= 2 / 3)


def test_policy_timeline(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["policy", "--scenario", str(SCEN / "two_risky_good_news.ini"), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "initial_explored: H" in text
    header = out.read_text().split("\n")[0]
    assert header == "t,p_L,p_H,explored,exploited"


def test_simulate(capsys):
    assert main(["simulate", "--scenario", str(SCEN / "safe_good_news.ini"), "--paths", "500",
                 "--seed", "3"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0].startswith("policy,paths,seed")
    assert lines[1].startswith("safe,500,3,")


def test_cycle_and_verify_cycle(capsys):
    assert main(["cycle"]) == 0
    assert main(["verify", "cycle"]) == 0
    out = capsys.readouterr().out
    assert "3 explored over 1: yes" in out and "[PASS]" in out


def test_bad_flags():
    assert main(["simulate", "--scenario", str(SCEN / "safe_good_news.ini"), "--paths", "0"]) == 2
    assert main(["cycle", "--seed", "-1"]) == 2
