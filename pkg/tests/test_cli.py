import json

import pytest

from powersum.cli import main, read_config
from powersum.sieve import read_certificates


def test_bounds_k(capsys):
    assert main(["bounds", "--k", "10"]) == 0
    assert capsys.readouterr().out.split() == ["10", "173419"]


def test_bounds_not_applicable(capsys):
    assert main(["bounds", "--k", "6"]) == 0
    assert "not applicable" in capsys.readouterr().out


def test_decompose_json(tmp_path, capsys):
    out = tmp_path / "pairs.json"
    assert main(["decompose", "--k", "50", "--json", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert [1, 25] in rows[0]["pairs"] and [25, 1] in rows[0]["pairs"]


def test_sieve_then_verify(tmp_path, capsys):
    certs = tmp_path / "certs.ndjson"
    assert main(["sieve", "--k", "10", "--n-to", "50", "--certs", str(certs)]) == 0
    assert read_certificates(certs)
    assert main(["verify-cert", "--certs", str(certs)]) == 0
    assert "certificates verified" in capsys.readouterr().out


def test_verify_flags_tampered(tmp_path, capsys):
    certs = tmp_path / "certs.ndjson"
    certs.write_text('{"k":10,"d1":1,"d2":5,"form":"640.2.0","n":11,"t":2,"ell":24}\n')
    assert main(["verify-cert", "--certs", str(certs)]) == 1
    assert "shape" in capsys.readouterr().out


def test_thue(capsys):
    assert main(["thue", "--k", "26", "--n", "3", "--bound", "10"]) == 0
    out = capsys.readouterr().out
    assert "y1=5" in out and "y1=13" in out


def test_prove_exit_code(tmp_path):
    out = tmp_path / "report.json"
    assert main(["prove", "--k", "10", "--n-to", "40", "--thue-bound", "8", "--json", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] == "FullyVerifiedAtConfiguredScale"


def test_prove_missing_data_exits_nonzero(tmp_path):
    assert main(["prove", "--k", "10", "--n-to", "20", "--thue-bound", "5", "--newforms", str(tmp_path)]) == 1


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text("n_to = 30  # small\nt_max = 200\nparity_refinement = false\n")
    assert read_config(cfg) == {"n_to": 30, "t_max": 200, "parity_refinement": False}
    assert main(["sieve", "--k", "10", "--config", str(cfg), "--n-to", "20"]) == 0
    assert "[11,19]" in capsys.readouterr().out


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("colour = blue\n")
    with pytest.raises(SystemExit):
        read_config(cfg)


def test_bad_k_exits_2():
    assert main(["prove", "--k", "8"]) == 2


def test_check_known(capsys):
    assert main(["check-known"]) == 0
    assert capsys.readouterr().out.count("PASS") == 3
