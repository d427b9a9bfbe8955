import json
import subprocess
import sys

import pytest

from detlab import cli, explab
from detlab import io as dio
from detlab.detcount import count_via_cofactors, explicit_set
from detlab.explab import ExperimentConfig
from detlab.field import make_field
from detlab.reports import CheckRecord, Report


def run(argv, capsys=None):
    code = cli.main(argv)
    out = capsys.readouterr() if capsys else None
    return code, out


def test_count_csv_example(tmp_path):
    out = tmp_path / "dist.csv"
    assert cli.main(["count", "--p", "3", "--r", "1", "--d", "2", "--set", "list:0,1",
                     "--out", str(out)]) == 0
    meta, counts = dio.read_table_csv(out.read_text())
    assert counts == [10, 3, 3]
    assert meta["p"] == "3" and meta["d"] == "2" and meta["set"] == "list:0,1"
    rows = [line for line in out.read_text().splitlines() if not line.startswith("#")]
    assert rows == ["t,count", "0,10", "1,3", "2,3"]


def test_count_extension_field_header(tmp_path):
    out = tmp_path / "f9.csv"
    assert cli.main(["count", "--p", "3", "--r", "2", "--d", "2", "--set", "list:0,1,3",
                     "--method", "both", "--out", str(out)]) == 0
    meta, counts = dio.read_table_csv(out.read_text())
    assert meta["modulus"] == "1 0 1" and sum(counts) == 81


def test_count_json(capsys):
    code, out = run(["count", "--p", "5", "--d", "2", "--set", "full", "--format", "json",
                     "--method", "both"], capsys)
    doc = json.loads(out.out)
    assert code == 0
    assert doc["data"]["counts"] == [145, 120, 120, 120, 120]
    assert doc["data"]["report"]["pass"]
    assert set(doc["meta"]) == {"timestamp", "workers", "version"}


def test_even_characteristic_is_usage_error(capsys):
    code, out = run(["count", "--p", "2", "--set", "full"], capsys)
    assert code == 2 and "p must be odd" in out.err


@pytest.mark.parametrize("argv", [
    ["count", "--p", "9"],
    ["count", "--p", "7", "--set", "interval:4"],
    ["count", "--p", "7", "--set", "nonsense"],
    ["recursion", "--p", "5", "--d", "1"],
])
def test_invalid_configs_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["count"])
    assert exc.value.code == 2


def test_budget_flag_and_env(monkeypatch, capsys):
    argv = ["count", "--p", "5", "--d", "3", "--set", "full", "--method", "bruteforce"]
    code, out = run(argv + ["--budget", "1000"], capsys)
    assert code == 2 and "budget" in out.err
    monkeypatch.setenv("DETLAB_BUDGET", "1e3")
    code, out = run(argv, capsys)
    assert code == 2 and "budget" in out.err


def test_verify_all_example(tmp_path):
    out = tmp_path / "v.json"
    assert cli.main(["verify-all", "--p", "5", "--r", "1", "--d", "2", "--set", "random:4",
                     "--seed", "7", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    kinds = [r["kind"] for r in doc["data"]["reports"]]
    assert {"count", "error_bound", "second_moment", "recursion", "ap3"} <= set(kinds)


def test_verify_all_deterministic(tmp_path):
    paths = []
    for workers in (1, 3):
        p = tmp_path / f"w{workers}.json"
        cli.main(["verify-all", "--p", "7", "--d", "3", "--set", "random:3", "--seed", "2",
                  "--workers", str(workers), "--out", str(p)])
        paths.append(json.loads(p.read_text()))
    assert paths[0]["data"] == paths[1]["data"]
    assert paths[0]["meta"]["workers"] == 1 and paths[1]["meta"]["workers"] == 3


@pytest.mark.parametrize("op", ["incidence", "recursion", "m4", "ap3"])
def test_subcommands_pass(op, capsys):
    code, out = run([op, "--p", "5", "--d", "2", "--set", "list:0,1,3"], capsys)
    assert code == 0
    doc = json.loads(out.out)
    assert all(r["pass"] for r in doc["data"]["reports"])


def test_subcommand_csv_report(capsys):
    code, out = run(["m4", "--p", "3", "--set", "list:0,1", "--format", "csv"], capsys)
    assert code == 0
    lines = [line for line in out.out.splitlines() if not line.startswith("#")]
    assert lines[0] == ",".join(dio.REPORT_HEADER)
    assert any("S_d == sum" in line for line in lines)


def test_incidence_t_and_random_form(capsys):
    code, out = run(["incidence", "--p", "5", "--d", "2", "--set", "list:1,2", "--t", "1",
                     "--form", "random", "--seed", "4"], capsys)
    data = json.loads(out.out)["data"]
    assert code == 0 and data["nu_t"]["t"] == 1 and data["nu_t"]["value"] == data["nu"][1]


def test_recursion_single_t(capsys):
    code, out = run(["recursion", "--p", "3", "--set", "list:0,1", "--t", "1"], capsys)
    reports = {r["kind"]: r for r in json.loads(out.out)["data"]["reports"]}
    assert code == 0
    assert reports["deviation"]["records"][0]["lhs"] == "49/9"


def test_ap3_with_second_set_and_trials(capsys):
    code, out = run(["ap3", "--p", "11", "--set", "random:7", "--set-b", "random:8",
                     "--trials", "4", "--seed", "1"], capsys)
    kinds = [r["kind"] for r in json.loads(out.out)["data"]["reports"]]
    assert code == 0 and kinds == ["ap3", "quadruple_lower_bound", "ap_threshold"]


def test_failing_check_exits_1_with_witness(monkeypatch, capsys):
    def broken(A, d, guard=None):
        rep = Report("s_recursion", {})
        rep.add(CheckRecord("forced", 2, 1, False, {"t": 1}))
        return rep

    monkeypatch.setattr(explab.ineq, "check_m4_chain", broken)
    code, out = run(["m4", "--p", "3", "--set", "list:0,1"], capsys)
    assert code == 1
    rec = json.loads(out.out)["data"]["reports"][0]["records"][0]
    assert rec["witness"] == {"t": 1} and not rec["pass"]
    assert "failed" in out.err


def test_sweep_example(capsys):
    code, out = run(["sweep", "--p", "13", "--d", "2", "--kind", "interval",
                     "--sizes", "1,2,3,4,5,6"], capsys)
    assert code == 0
    rows = [line.split(",") for line in out.out.splitlines() if not line.startswith("#")]
    assert rows[0] == explab.SWEEP_HEADER and len(rows) == 7
    assert rows[-1][5] == "1/169"


def test_sweep_empty_and_skipped(capsys):
    code, out = run(["sweep", "--p", "13", "--sizes", ""], capsys)
    body = [line for line in out.out.splitlines() if not line.startswith("#")]
    assert code == 0 and body == [",".join(explab.SWEEP_HEADER)]
    code, out = run(["sweep", "--p", "13", "--d", "3", "--sizes", "13", "--budget", "1000"],
                    capsys)
    assert code == 0 and out.out.rstrip().endswith("skipped")


def test_sweep_json(capsys):
    code, out = run(["sweep", "--p", "7", "--sizes", "3,7", "--seeds", "0,1",
                     "--format", "json"], capsys)
    rows = json.loads(out.out)["data"]["rows"]
    assert code == 0 and len(rows) == 4 and rows[-1]["eps"] == "1/49"


def test_identical_configs_identical_csv(tmp_path):
    texts = []
    for i in range(2):
        p = tmp_path / f"s{i}.csv"
        cli.main(["count", "--p", "7", "--d", "3", "--set", "random:4", "--seed", "9",
                  "--workers", str(1 + 3 * i), "--out", str(p)])
        texts.append(p.read_bytes())
    assert texts[0] == texts[1]


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(op="plot", p=3)
    with pytest.raises(ValueError):
        ExperimentConfig(op="count", p=3, workers=0)
    assert ExperimentConfig(op="sweep", p=3).output_format == "csv"
    assert ExperimentConfig(op="m4", p=3).output_format == "json"


def test_table_json_roundtrip():
    A = explicit_set(make_field(3), [0, 1])
    doc = dio.table_to_json(count_via_cofactors(A, 2))
    assert doc["counts"] == [10, 3, 3] and doc["set"] == "list:0,1" and "version" in doc


def test_console_script_module_entry():
    res = subprocess.run([sys.executable, "-m", "detlab.cli", "count", "--p", "3",
                          "--set", "list:0,1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip().endswith("2,3")
