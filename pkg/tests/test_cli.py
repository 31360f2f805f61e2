import csv
import hashlib
import io
import json

import pytest

from serre_lab.cli import OMEGA_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_frob_json(capsys, tmp_path):
    code, out = run(capsys, "frob", "--p", "5", "--r", "0", "--s", "1",
                    "--manifest", str(tmp_path / "m.json"))
    assert code == 0
    row = json.loads(out.out)[0]
    assert row["a"] == 0 and row["s11"] + row["s22"] == 0
    m = json.loads((tmp_path / "m.json").read_text())
    assert m["output_digest"] == "sha256:" + hashlib.sha256(out.out.encode()).hexdigest()
    assert m["prng"].startswith("MT19937")


def test_input_errors(capsys):
    assert run(capsys, "frob", "--p", "5", "--r", "0", "--s", "0", "--no-manifest")[0] == 2
    assert run(capsys, "omega", "--p", "4", "--level", "2", "--no-manifest")[0] == 2
    assert run(capsys, "family-es", "--s-num", "-3", "--s-den", "4", "--no-manifest")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["frob", "--p", "x"])
    assert e.value.code == 2


def test_omega_csv_columns(capsys):
    code, out = run(capsys, "omega", "--p", "13", "--level", "2", "--check", "--out", "csv",
                    "--no-manifest")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert list(rows[0]) == OMEGA_COLUMNS
    assert all(r["enumerated"] == r["formula"] for r in rows)


def test_family_es(capsys):
    for s in ("1", "2"):
        assert run(capsys, "family-es", "--s-num", s, "--verify", "--no-manifest")[0] == 0


def test_certify(capsys):
    code, out = run(capsys, "certify", "--r", "-1", "--s", "0", "--no-manifest")
    row = json.loads(out.out)[0]
    assert code == 0 and row["cond1"] == "fail" and row["verdict"] == "NotSerre"
    code, out = run(capsys, "certify", "--r", "3264", "--s", "83232", "--no-manifest")
    assert json.loads(out.out)[0]["cond2"] == "fail"


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# census settings\nprime_bound = 11\nsample_bound = 300\n")
    out_file = tmp_path / "census.json"
    code, _ = run(capsys, "census", "--X", "1", "--config", str(cfg), "--sample-bound", "200",
                  "--output", str(out_file))
    assert code == 0
    m = json.loads((tmp_path / "census.json.manifest.json").read_text())
    assert m["config"]["prime_bound"] == 11 and m["config"]["sample_bound"] == 200


def test_byte_identical_reruns(capsys, tmp_path):
    outs = []
    for i in range(2):
        f = tmp_path / f"cheb{i}.csv"
        main(["cheb", "--X", "60", "--level", "2", "--class-index", "1", "--sample", "30",
              "--seed", "5", "--out", "csv", "--output", str(f), "--no-manifest"])
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]


def test_threads_env_default(monkeypatch, capsys):
    monkeypatch.setenv("SERRE_LAB_THREADS", "2")
    from serre_lab.cli import build_parser
    args = build_parser().parse_args(["census", "--X", "1"])
    assert args.threads == 2


def test_empty_family_is_check_failure(capsys):
    code, _ = run(capsys, "cheb", "--X", "50", "--level", "2", "--class-index", "0",
                  "--family-height", "0", "--no-manifest")
    assert code == 3


def test_threads_do_not_change_output(capsys):
    outs = []
    for t in ("1", "2"):
        code, out = run(capsys, "cheb", "--X", "50", "--level", "2", "--class-index", "0",
                        "--threads", t, "--no-manifest")
        outs.append(out.out)
    assert outs[0] == outs[1]


def test_frob_mod2_identity(capsys):
    _, out = run(capsys, "frob", "--p", "7", "--r", "-1", "--s", "0", "--mod", "2",
                 "--no-manifest")
    row = json.loads(out.out)[0]
    assert (row["m11"], row["m12"], row["m21"], row["m22"]) == (1, 0, 0, 1)
