import pytest
import yaml

from equilevel import config_manager
from equilevel.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out.splitlines(), captured.err


@pytest.fixture
def fresh_config(monkeypatch):
    monkeypatch.setattr(config_manager, "_default_manager", None)


def test_betti(capsys):
    status, lines, _ = run(capsys, "betti", "builtin:CD3")
    assert status == EXIT_OK
    assert lines == ["H_0\t1", "H_1\t1", "H_2\t2", "H_3\t2", "H_4\t0", "H_5\t0", "H_6\t0", "euler\t0"]


def test_betti_with_workers(capsys):
    status, lines, _ = run(capsys, "--workers", "3", "betti", "builtin:CD2")
    assert status == EXIT_OK
    assert lines[:4] == ["H_0\t1", "H_1\t1", "H_2\t1", "H_3\t1"]


def test_betti_of_invalid_complex_fails(capsys):
    status, lines, err = run(capsys, "betti", "builtin:CD3:formulas")
    assert status == EXIT_FAIL
    assert lines == []
    assert "fails validation" in err


def test_verify(capsys):
    status, lines, _ = run(capsys, "verify", "builtin:CD3")
    assert (status, lines) == (EXIT_OK, ["status\tok"])

    status, lines, _ = run(capsys, "verify", "builtin:CD3:formulas")
    assert status == EXIT_FAIL
    assert lines[0] == "status\tfail"
    assert all(line.startswith("violation\t") for line in lines[1:])
    assert len({line.split("\t")[2] for line in lines[1:]}) == 12


def test_euler_and_census(capsys):
    assert run(capsys, "euler", "builtin:CD1")[:2] == (EXIT_OK, ["euler\t0"])
    status, lines, _ = run(capsys, "census", "builtin:CD2")
    assert status == EXIT_OK
    assert lines == ["0\t0\t1\t1", "1\t1\t4\t5", "2\t4\t6\t10", "3\t6\t3\t9", "4\t3\t0\t3",
                     "total\t14\t14\t28"]


def test_reconcile(capsys):
    status, lines, _ = run(capsys, "reconcile", "builtin:CD3:formulas", "builtin:CD3:matrices")
    assert status == EXIT_FAIL
    assert lines == ["2\tbar_V_2\tbar_Ups_1\tmatrices", "4\tbar_C_35\tbar_k_2_m\tmatrices"]
    assert run(capsys, "reconcile", "builtin:CD3", "builtin:CD3:matrices")[:2] == (EXIT_OK, [])


def test_cycles(capsys):
    status, lines, _ = run(capsys, "cycles", "builtin:CD3", "--degree", "3", "--chains", "builtin:CD3:generators")
    assert status == EXIT_OK
    assert lines == ["cycle\tH3a\tyes", "cycle\tH3b\tyes", "basis\t3\tyes"]


def test_cycles_above_the_top_degree(capsys):
    status, lines, err = run(capsys, "cycles", "builtin:CD3", "--degree", "7", "--chains", "builtin:CD3:generators")
    assert (status, lines) == (EXIT_OK, ["basis\t7\tyes"])
    assert "Traceback" not in err
    status, lines, _ = run(capsys, "cycles", "builtin:CD1", "--degree", "-1", "--chains", "builtin:CD1:generators")
    assert (status, lines) == (EXIT_OK, ["basis\t-1\tyes"])


def test_cycles_reports_non_cycles(capsys, tmp_path):
    path = tmp_path / "bad.chains"
    path.write_text("degree 2 : bar_S\ndegree 2 : U_12_missing\n")
    status, _, err = run(capsys, "cycles", "builtin:CD3", "--degree", "2", "--chains", str(path))
    assert status == EXIT_USAGE
    assert "bad.chains:2:12" in err

    path.write_text("degree 3 : J\n")
    status, lines, _ = run(capsys, "cycles", "builtin:CD3", "--degree", "3", "--chains", str(path))
    assert status == EXIT_FAIL
    assert lines[-1] == "basis\t3\tno"


def test_kernel(capsys):
    status, lines, _ = run(capsys, "kernel", "builtin:CD3", "--degree", "2")
    assert status == EXIT_OK
    assert lines[0] == "kernel_dim\t2\t23"
    assert len(lines) == 24 and lines[1].startswith("vector\t1\t")

    status, lines, _ = run(capsys, "kernel", "builtin:CD3", "--degree", "3", "--chains", "builtin:CD3:kernel3")
    assert status == EXIT_OK
    assert lines == ["kernel_dim\t3\t46", "kernel_list\t3\tyes"]


def test_filtration(capsys):
    status, lines, _ = run(capsys, "filtration", "builtin:CD3", "--key", "mult")
    assert status == EXIT_OK
    assert lines[0] == "level\t0\tcells\t16"
    assert [line for line in lines if line.startswith("E1")] == [
        "E1\t0\t0\t1", "E1\t0\t1\t1", "E1\t2\t0\t2", "E1\t2\t1\t2",
    ]
    assert lines[-1] == "euler_check\tok"

    status, lines, _ = run(capsys, "filtration", "builtin:CD2", "--key", "type")
    assert status == EXIT_OK
    assert lines[:2] == ["level\t0\tcells\t14", "level\t1\tcells\t14"]


def test_relative(capsys):
    status, lines, _ = run(capsys, "relative", "builtin:CD3", "--key", "mult", "--level", "2",
                           "--chains", "builtin:CD3:generators", "--degree", "2")
    assert status == EXIT_OK
    assert lines[2] == "H_2\t2" and lines[3] == "H_3\t2"
    assert lines[-1] == "basis\t2\tyes"

    status, lines, _ = run(capsys, "relative", "builtin:CD3", "--key", "mult", "--level", "0")
    assert status == EXIT_OK
    assert lines[:2] == ["H_0\t1", "H_1\t1"]

    assert run(capsys, "relative", "builtin:CD3", "--key", "mult", "--level", "7")[0] == EXIT_USAGE
    assert run(capsys, "relative", "builtin:CD3", "--key", "mult", "--level", "2",
               "--chains", "builtin:CD3:generators")[0] == EXIT_USAGE


def test_adjudicate(capsys):
    status, lines, _ = run(capsys, "adjudicate")
    assert status == EXIT_OK
    assert len(lines) == 10
    assert "reading\tz3_42\tas_printed\tcandidate\tyes\tno\t19" in lines
    assert "reading\tz3_42\tk2_plus_minus\tadopted\tyes\tyes\t0" in lines
    assert "reading\tbar_V_2\tbar_added\tadopted\tyes\tyes\t-" in lines


def test_decompose(capsys):
    assert run(capsys, "decompose")[:2] == (EXIT_OK, ["mismatches\t0"])

    status, lines, _ = run(capsys, "decompose", "--reading", "z3_42=as_printed")
    assert status == EXIT_FAIL
    assert lines[-1] == "mismatches\t19"
    assert all(line.startswith("mismatch\t") for line in lines[:-1])

    assert run(capsys, "decompose", "--reading", "z2_23=as_printed")[0] == EXIT_USAGE
    assert run(capsys, "decompose", "--reading", "z9_99=x")[0] == EXIT_USAGE


def test_usage_errors(capsys):
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "betti")[0] == EXIT_USAGE
    assert run(capsys, "filtration", "builtin:CD3", "--key", "size")[0] == EXIT_USAGE
    assert run(capsys, "--help")[0] == EXIT_OK
    assert run(capsys, "betti", "builtin:CD9")[0] == EXIT_USAGE
    assert run(capsys, "betti", "builtin:CD2:matrices")[0] == EXIT_USAGE


def test_file_errors(capsys, tmp_path):
    status, lines, err = run(capsys, "betti", str(tmp_path / "missing.chc"))
    assert status == EXIT_USAGE and lines == []
    assert err.startswith("error:")

    bad = tmp_path / "bad.chc"
    bad.write_text("complex B\ndim 1\ncell a dim=0\nboundary a = b\n")
    status, _, err = run(capsys, "verify", str(bad))
    assert status == EXIT_USAGE
    assert "bad.chc:4:14: unknown boundary target 'b'" in err


def test_undecodable_files(capsys, tmp_path):
    bad = tmp_path / "latin.chc"
    bad.write_bytes(b"complex B\ndim 0\ncell caf\xe9 dim=0\n")
    status, lines, err = run(capsys, "betti", str(bad))
    assert (status, lines) == (EXIT_USAGE, [])
    assert err.startswith("error: latin.chc:3:9: invalid UTF-8 byte 0xe9")

    chains = tmp_path / "bad.chains"
    chains.write_bytes(b"\xff\n")
    status, _, err = run(capsys, "cycles", "builtin:CD1", "--degree", "0", "--chains", str(chains))
    assert status == EXIT_USAGE
    assert "bad.chains:1:1: invalid UTF-8 byte 0xff" in err


def test_custom_config(capsys, tmp_path, fresh_config):
    settings = yaml.safe_load(config_manager.CONFIG_DIR.joinpath("system.yml").read_text())
    settings["reports"] = {"separator": ","}
    settings["data"]["data_dir"] = str(config_manager.PACKAGE_DIR / "data")
    path = tmp_path / "system.yml"
    path.write_text(yaml.safe_dump(settings))

    status, lines, _ = run(capsys, "--config", str(path), "betti", "builtin:CD1")
    assert status == EXIT_OK
    assert lines == ["H_0,1", "H_1,1", "H_2,0", "euler,0"]


def test_invalid_config(capsys, tmp_path, fresh_config):
    path = tmp_path / "system.yml"
    path.write_text("logging:\n  level: LOUD\n")
    status, _, err = run(capsys, "--config", str(path), "betti", "builtin:CD1")
    assert status == EXIT_USAGE
    assert "system.yml" in err


def test_log_dir(capsys, tmp_path):
    log_dir = tmp_path / "logs"
    assert run(capsys, "--log-dir", str(log_dir), "--verbose", "verify", "builtin:CD1")[0] == EXIT_OK
    logs = list(log_dir.glob("verification_*.log"))
    assert len(logs) == 1
    assert "Check passed" in logs[0].read_text()
