import json

import pytest

from cantorwalk.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_intervals_json(capsys):
    code, out, _ = run(capsys, "intervals", "--word", "1,1",
                       "--precision", "128")
    assert code == 0
    payload = json.loads(out)
    assert payload["word"] == [1, 1]
    assert payload["length"] == {"num": 1, "den": 4, "depth": 2}
    assert payload["decimal_left"].startswith("0.28086")
    assert "hole" in payload
    assert payload["meta"]["tool"] == "cantorwalk"


def test_intervals_deterministic(capsys):
    _, out1, _ = run(capsys, "intervals", "--word", "2,5,5,0")
    _, out2, _ = run(capsys, "intervals", "--word", "2,5,5,0")
    assert out1 == out2


def test_measure_subcommand(capsys):
    code, out, _ = run(capsys, "measure", "--word", "1,1",
                       "--alpha", "3/4", "--truncation", "1000")
    assert code == 0
    payload = json.loads(out)
    assert payload["alpha"] == "3/4"
    assert payload["mass_decimal"].startswith("0.0259032261")
    assert payload["consistency"]["contains_parent"] is True


def test_measure_rejects_decimal_alpha(capsys):
    code, _, err = run(capsys, "measure", "--word", "1", "--alpha", "0.75")
    assert code == 2
    assert json.loads(err)["error"] == "CliError"


def test_walk_csv_byte_identical(capsys):
    args = ("walk", "--kind", "dissipative", "--alpha", "3/4",
            "--steps", "50", "--paths", "2", "--seed", "9")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
    lines = [l for l in out1.splitlines() if not l.startswith("#")]
    assert lines[0] == "path_id,step,state"
    assert len(lines) == 1 + 2 * 51  # header plus steps+1 rows per path
    assert lines[1] == "0,0,0"


def test_walk_transience_summary(capsys):
    code, out, _ = run(capsys, "walk", "--kind", "dissipative",
                       "--alpha", "3/4", "--steps", "500", "--paths", "50",
                       "--seed", "4", "--checkpoints", "10,100")
    assert code == 0
    payload = json.loads(out)
    assert set(payload["return_fraction"]) == {"10", "100"}
    assert payload["seeds"]["seed"] == 4


def test_walk_boundary_alpha_needs_flag(capsys):
    code, _, err = run(capsys, "walk", "--kind", "dissipative",
                       "--alpha", "1", "--steps", "10", "--seed", "1")
    assert code == 2
    assert "allow-boundary" in json.loads(err)["message"]


def test_dim_subcommand(capsys):
    code, out, _ = run(capsys, "dim", "--alpha", "3/4", "--depth", "200",
                       "--paths", "2", "--seed", "6", "--rows-per-path", "4")
    assert code == 0
    lines = out.splitlines()
    meta = [l for l in lines if l.startswith("#")]
    assert any("final_ratio_quantiles" in l for l in meta)
    data = [l for l in lines if not l.startswith("#")]
    assert data[0] == "path_id,n,ratio,furstenberg_ratio"
    assert len(data) == 1 + 2 * 4


def test_pressure_subcommand(capsys):
    code, out, _ = run(capsys, "pressure", "--cutoff", "1", "--tol", "1e-8")
    assert code == 0
    payload = json.loads(out)
    assert payload["s_star"] == pytest.approx(0.2797110465, abs=1e-6)
    assert payload["K"] == 1
    assert len(payload["lambda_trace"]) > 5


def test_lebesgue_subcommand(capsys):
    code, out, _ = run(capsys, "lebesgue", "--depth", "5", "--cutoff", "20")
    assert code == 0
    data = [l for l in out.splitlines() if not l.startswith("#")]
    assert data[0] == "level,mass,overcount_bound"
    masses = [float(l.split(",")[1]) for l in data[1:]]
    assert len(masses) == 5
    assert all(a > b for a, b in zip(masses, masses[1:]))


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5  # quick mode runs the deterministic-fast subset
    assert all(l.startswith("[PASS]") for l in lines)


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "iv.json"
    code, out, _ = run(capsys, "intervals", "--word", "1",
                       "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["word"] == [1]


def test_bad_word_is_a_clean_error(capsys):
    code, _, err = run(capsys, "intervals", "--word", "0,1")
    assert code == 2
    assert "error" in json.loads(err)
