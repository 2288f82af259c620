from __future__ import annotations

import json

import pytest

from kpisano import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


@pytest.mark.parametrize(
    "argv, want",
    [
        (["period", "-k", "1", "-m", "10"], "60"),
        (["period", "-k", "4", "-m", "2"], "2"),
        (["period", "-k", "1", "-m", "10", "--oracle"], "60"),
        (["period", "-k", "1", "-m", "10", "--structured"], "60"),
        (["trajectory", "-k", "1", "-m", "2"], "2 → 3 → 8 → 12 → 24 [fixed] T=4"),
        (["trajectory", "-k", "3", "-m", "2"], "2 → 3 → 2 [2-cycle] P=0"),
        (["trajectory", "-k", "1", "-m", "24"], "24 [fixed] T=0"),
        (["fixed-points", "-k", "1", "--bound", "150"], "24 120 | family: 24×5^j"),
        (["fixed-points", "-k", "8", "--bound", "100"], "2 68 | family: 2 or 4×17^{j+1}"),
    ],
)
def test_documented_outputs(capsys, argv, want):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == want


def test_fixed_points_k2(capsys):
    code, out, _ = run(capsys, "fixed-points", "-k", "2", "--bound", "10")
    assert code == 0 and out.startswith("2 4 8")


def test_impure_period_shows_preperiod(capsys):
    code, out, _ = run(capsys, "period", "-a", "1", "-b", "2", "-c", "0", "-d", "1", "-m", "6")
    assert code == 0 and out.split()[0] == "6"
    code, out, _ = run(capsys, "period", "-a", "1", "-b", "2", "-m", "2")
    assert out == "1 preperiod=1"


def test_both(capsys):
    code, out, _ = run(capsys, "period", "-k", "2", "-m", "169", "--both")
    assert code == 0 and out == "oracle=28 structured=28"


def test_both_mismatch_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "pisano_structured", lambda k, m: 1)
    code, out, _ = run(capsys, "period", "-k", "1", "-m", "10", "--both")
    assert code == cli.EXIT_MISMATCH and "MISMATCH" in out


@pytest.mark.parametrize(
    "argv, code",
    [
        (["period", "-k", "1", "-m", "1"], 2),
        (["period", "-m", "5"], 2),
        (["period", "-k", "1", "-a", "1", "-m", "5"], 2),
        (["period", "-a", "1", "-b", "2", "-m", "5", "--structured"], 2),
        (["period", "-k", "5000000000", "-m", "10"], 3),
        (["period", "-k", "1", "-m", "18446744073709551617"], 3),
        (["trajectory", "-k", "1", "-m", "2", "--max-iters", "2"], 5),
        (["verify", "--suites", "nope"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert cli.main(argv) == code
    capsys.readouterr()


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["period", "-k", "x", "-m", "3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["period", "-k", "1", "-m", "10"],
        ["period", "-k", "1", "-m", "10", "--both"],
        ["trajectory", "-k", "3", "-m", "2"],
        ["fixed-points", "-k", "8", "--bound", "100"],
        ["classify", "-k", "16"],
        ["table"],
        ["table", "--kind", "periods"],
    ],
)
def test_json_mode_prints_only_json(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    json.loads(out)


def test_json_payloads(capsys):
    _, out, _ = run(capsys, "trajectory", "-k", "1", "-m", "11", "--format", "json")
    assert json.loads(out) == {"k": 1, "m": 11, "steps": [11, 10, 60, 120], "terminal": "fixed", "T": 3, "P": 120}
    _, out, _ = run(capsys, "fixed-points", "-k", "3", "--bound", "200", "--format", "json")
    d = json.loads(out)
    assert d["fixed_points"] == [6, 156] and d["family_agrees"]


def test_classify_and_table(capsys):
    _, out, _ = run(capsys, "classify", "-k", "9")
    assert out == "K=9: K = 3 (mod 6); K^2+4 = 5·17; family: 6 or 12×5^j1×17^j2 (some j ≥ 1)"
    _, out, _ = run(capsys, "table", "--k", "1..3")
    assert len(out.splitlines()) == 3
    _, out, _ = run(capsys, "table", "--kind", "periods")
    assert "JACOBSTHAL  m=3..24: 6 2 4" in out


@pytest.mark.parametrize("text, want", [("2..2000", (2, 2000)), ("5", (5, 5)), ("-20..20", (-20, 20))])
def test_parse_range(text, want):
    assert cli.parse_range(text) == want


def test_verify_writes_reports(capsys, tmp_path):
    code, out, err = run(
        capsys, "verify", "--suites", "oracle-equivalence", "--k", "1..3", "--m", "2..300", "--out", str(tmp_path)
    )
    assert code == 0
    assert "oracle-equivalence" in out and "clean" in err
    d = json.loads((tmp_path / "oracle-equivalence.json").read_text())
    assert d["checked"] == 3 * 299 and d["violations"] == []
    assert (tmp_path / "oracle-equivalence.csv").read_text().splitlines()[-1].startswith("summary,")


def test_verify_discrepancies_do_not_fail(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--suites", "final-table", "--out", str(tmp_path))
    assert code == 0 and "paper-statement-discrepancy" in err


def test_verify_theorem_violation_fails(capsys, tmp_path, monkeypatch):
    import kpisano.verify as v

    monkeypatch.setattr(v, "pisano_structured", lambda k, m: 7)
    code, _, _ = run(capsys, "verify", "--suites", "parity", "--k", "1", "--m", "3..10", "--out", str(tmp_path))
    assert code == cli.EXIT_VIOLATIONS


def test_verify_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suites": ["degenerate"], "m": "2..40", "out": str(tmp_path / "r")}))
    code, _, _ = run(capsys, "verify", "--config", str(cfg))
    assert code == 0
    assert json.loads((tmp_path / "r" / "degenerate.json").read_text())["checked"] == 5 * 39
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert cli.main(["verify", "--config", str(bad)]) == 2


def test_parallelism_precedence(monkeypatch):
    monkeypatch.delenv(cli.PARALLELISM_ENV, raising=False)
    assert cli._parallelism(None, None) == 1
    assert cli._parallelism(None, 3) == 3
    monkeypatch.setenv(cli.PARALLELISM_ENV, "4")
    assert cli._parallelism(None, 3) == 4
    assert cli._parallelism(2, 3) == 2
