import re
import subprocess
import sys

import pytest

from ratmodels import cli
from ratmodels.cli import main, run_command

from conftest import MODELS


def m(name):
    return str(MODELS / f"{name}.model")


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_check_Y(capsys):
    code, out, _ = run(["check", m("Y")], capsys)
    assert code == 0
    assert "generators: x1:4, x2:4, y:7" in out
    assert "d y: x1*x2" in out and "d_squares_to_zero: yes" in out


def test_check_lie(capsys):
    code, out, _ = run(["check", m("Ldiff"), "--max-degree", "6"], capsys)
    assert code == 0 and "kind: lie" in out


def test_cohomology_Y():
    rep = run_command("cohomology", [m("Y"), "--max-degree", "16"])
    assert rep.get("summary", "dims") == [1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2]


@pytest.mark.parametrize("name", ["Y", "S2", "S3", "nonformal", "S2_finite"])
def test_cohomology_degree_zero(name):
    rep = run_command("cohomology", [m(name), "--max-degree", "0"])
    assert rep.get("summary", "dims") == [1]


def test_lie_homology():
    rep = run_command("cohomology", [m("L33"), "--max-degree", "6"])
    assert rep.get("homology", "H_3") == 2 and rep.get("homology", "H_6") == 3


def test_minimal_model_command(capsys):
    code, out, _ = run(["minimal-model", m("S2_finite"), "--max-degree", "10"], capsys)
    assert code == 0
    assert "minimal: yes" in out


def test_bigraded_model_command(capsys):
    code, out, _ = run(["bigraded-model", m("Y"), "--max-degree", "12"], capsys)
    assert code == 0
    assert "grading_law: yes" in out
    assert "lower 1" in out


def test_formality_mapping_space():
    rep = run_command("formality", [m("F_S2_Y"), "--max-degree", "14"])
    assert rep.get("formality", "status") == "CERTIFIED_FORMAL"
    assert rep.get("formality", "certificate_reverified") is True


def test_formality_psi_search():
    rep = run_command("formality", [m("F_S2_Y"), "--max-degree", "12", "--no-koszul"])
    assert rep.get("formality", "method") == "psi-search"
    assert rep.get("formality", "certificate_reverified") is True


def test_formality_nonformal():
    rep = run_command("formality", [m("nonformal"), "--max-degree", "12"])
    assert rep.get("formality", "status") == "CERTIFIED_NONFORMAL"
    assert rep.get("formality", "indeterminacy_dimension") == 0


def test_massey_command():
    rep = run_command("massey", [m("nonformal"), "x", "x", "y", "--max-degree", "12"])
    assert str(rep.get("massey", "value")) == "x*z"
    assert rep.get("massey", "avoids_zero") is True


def test_regular_seq_both_orders():
    for seq in (["x1*x2", "x1_bar*x2 + x1*x2_bar"], ["x1_bar*x2 + x1*x2_bar", "x1*x2"]):
        rep = run_command("regular-seq", [m("ring_xbar"), *seq, "--max-degree", "16"])
        assert rep.get("regular_sequence", "status") == "REGULAR_UP_TO_BOUND"


def test_regular_seq_failure():
    rep = run_command("regular-seq", [m("ring_xbar"), "x1", "x1", "--max-degree", "12"])
    assert rep.get("regular_sequence", "status") == "NOT_REGULAR"
    assert rep.get("regular_sequence", "zero_divisor_index") == 2


def test_cstar_command(capsys):
    code, out, _ = run(["cstar", m("L33"), "--max-degree", "10"], capsys)
    assert code == 0
    assert "v4_1:4" in out and "partial: v10_1" in out


def test_map_model_command():
    rep = run_command("map-model", [m("S2"), m("L33"), "--max-degree", "8", "--cstar"])
    assert rep.get("validation", "ok") is True
    assert rep.get("validation", "jacobi") > 0


def test_sphere_map_command():
    rep = run_command("sphere-map", [m("Y"), "--p", "2"])
    gens = rep.get("sphere_mapping_model", "generators")
    assert sorted(int(t.split(":")[1]) for t in gens) == [2, 2, 4, 4, 5, 7]
    assert str(rep.get("sphere_mapping_model", "d y_bar")) == "x1_bar*x2 + x2_bar*x1"


def test_audit_S2():
    rep = run_command("audit", [m("S2"), m("Y"), "--max-degree", "14"])
    summary = rep.get("conclusion", "summary")
    assert summary.startswith("assumption 1 fails (no odd spherical retract)")
    assert "formality of F does NOT force free cohomology" in summary
    assert "observed: F formal, H(Y) not free" in summary
    assert rep.get("mapping_space", "status") == "CERTIFIED_FORMAL"


def test_audit_S3():
    rep = run_command("audit", [m("S3"), m("Y"), "--max-degree", "14"])
    summary = rep.get("conclusion", "summary")
    assert summary.startswith("assumption 1 holds")
    assert "NOT_FREE" in rep.render()


def test_reports_are_deterministic():
    argv = ["audit", m("S3"), m("Y"), "--max-degree", "12"]
    outs = [subprocess.run([sys.executable, "-m", "ratmodels", *argv], capture_output=True).stdout
            for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]


def test_no_floats_in_reports():
    for argv in (["formality", m("F_S2_Y"), "--max-degree", "12"],
                 ["sphere-map", m("Y"), "--p", "3"],
                 ["cstar", m("L33"), "--max-degree", "8"]):
        text = run_command(argv[0], argv[1:]).render()
        assert not re.search(r"\d\.\d|\de[-+]?\d", text)


def test_exit_code_input_errors(capsys, tmp_path):
    assert main(["cohomology", m("Y")]) == 1                         # missing --max-degree
    assert main(["nonsense", m("Y")]) == 1                           # unknown command
    assert main(["cohomology", str(tmp_path / "none.model"), "--max-degree", "2"]) == 1
    bad = tmp_path / "bad.model"
    bad.write_text("[Y]\nx1 : 4\ny : 7\nd y = x1\n")
    assert main(["check", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "degree 4, expected 8" in err


def test_exit_code_internal_error(monkeypatch, capsys):
    def broken(args, rep):
        raise ArithmeticError("invariant violated")
    monkeypatch.setitem(cli.HANDLERS, "check", broken)
    assert main(["check", m("Y")]) == 2
    assert "internal error" in capsys.readouterr().err


def test_console_entry_point_runs():
    res = subprocess.run([sys.executable, "-m", "ratmodels", "cohomology", m("S3"), "--max-degree", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "dims: 1, 0, 0, 1" in res.stdout
