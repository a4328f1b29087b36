import json

import pytest

from squeezemetro.cli import main
from squeezemetro.gaussian import GaussianState
from squeezemetro.reproduction import SWEEP_COLUMNS, RunConfig, sweep


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_table2_passes(capsys):
    code, out, _ = run(capsys, "reproduce-table2")
    assert code == 0
    assert "6/6" in out


def test_table1_reports_cells(capsys):
    code, out, _ = run(capsys, "reproduce-table1")
    assert out.count("\n") >= 13
    # exit status tracks the per-cell verdicts
    assert code == (0 if "MISMATCH" not in out else 1)


def test_table_u_invariant(capsys):
    _, a, _ = run(capsys, "reproduce-table1", "--u", "1e4")
    _, b, _ = run(capsys, "reproduce-table1", "--u", "1e5")
    assert a == b


def test_table_closed_form_engine_flags(capsys):
    code, out, _ = run(capsys, "reproduce-table1", "--engine", "closed-form")
    assert code == 1
    assert out.count("MISMATCH") >= 4


def test_sweep_csv_deterministic(capsys, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--r-steps", "41", "--out", str(out1)]) == 0
    assert main(["sweep", "--r-steps", "41", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 42


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--medium", "gain", "--theta", "1.05",
                       "--r-steps", "5", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 5
    assert list(rows[0]) == list(SWEEP_COLUMNS)


def test_sweep_qa_u_invariant():
    base = None
    for u in (1e3, 1e4, 1e5):
        rows = sweep(RunConfig(u=u, r_steps=36))
        qa = [(r.qa_bd, r.qa_su11_single, r.qa_su11_sum, r.qa_crb) for r in rows]
        if base is None:
            base = qa
        for got, want in zip(qa, base):
            assert got == pytest.approx(want, rel=1e-9)


def test_sweep_singular_cell_empty(capsys):
    from squeezemetro.estimation import su11_sum_singularity
    r_star = su11_sum_singularity(0.05)
    code, out, _ = run(capsys, "sweep", "--r-min", repr(r_star), "--r-max", "3", "--r-steps", "2")
    first = out.splitlines()[1].split(",")
    assert code == 0
    assert first[SWEEP_COLUMNS.index("qa_su11_sum")] == ""
    assert first[SWEEP_COLUMNS.index("delta_su11_sum")] == ""


@pytest.mark.parametrize("argv", [
    ["sweep", "--r-min", "0", "--r-max", "0", "--r-steps", "2"],
    ["sweep", "--r-steps", "1"],
    ["sweep", "--alpha", "1.5"],
    ["sweep", "--medium", "gain", "--theta", "0.5"],
    ["qfi", "--alpha", "0.1", "--gain", "1.1"],
])
def test_invalid_config_exit_2(capsys, argv):
    assert main(argv) == 2


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_unwritable_output_exit_2(capsys, tmp_path):
    assert main(["sweep", "--r-steps", "3", "--out", str(tmp_path / "missing" / "x.csv")]) == 2


def test_singularity(capsys):
    code, out, _ = run(capsys, "singularity", "--alpha", "0.05")
    assert code == 0
    assert "r_star    2.18" in out


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", "--scheme", "bd", "--alpha", "0.01")
    assert code == 0
    r_opt = float(out.split("r_opt")[1].split()[0])
    assert r_opt == pytest.approx(2.82, abs=0.01)


def test_optimize_warning_on_stderr(capsys):
    code, _, err = run(capsys, "optimize", "--scheme", "su11-sum", "--alpha", "0.05")
    assert code == 0 and "not unimodal" in err


def test_qfi_dump_state(capsys, tmp_path):
    path = tmp_path / "state.json"
    code, out, _ = run(capsys, "qfi", "--alpha", "0.05", "--r", "2.35", "--u", "1",
                       "--dump-state", str(path))
    assert code == 0
    assert "437.906" in out
    state = GaussianState.from_json(path.read_text())
    assert state.is_physical()


def test_oracle_check_small(capsys):
    code, out, _ = run(capsys, "oracle-check")
    assert code == 0
    assert "max deviation" in out


def test_config_file(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nmedium = gain\ntheta = 1.01\nr-steps = 3\nformat = json\n")
    monkeypatch.setenv("SQUEEZEMETRO_CONFIG", str(cfg))
    code, out, _ = run(capsys, "sweep")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 3 and rows[0]["theta"] == 1.01
    # flags win over the file
    code, out, _ = run(capsys, "sweep", "--format", "csv", "--r-steps", "4")
    assert out.startswith("r,theta") and len(out.splitlines()) == 5


def test_config_file_errors(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SQUEEZEMETRO_CONFIG", str(tmp_path / "absent.cfg"))
    assert main(["sweep"]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    monkeypatch.setenv("SQUEEZEMETRO_CONFIG", str(bad))
    assert main(["sweep"]) == 2
