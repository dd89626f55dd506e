import json
import subprocess
import sys

import pytest

from ultraweight.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def statuses(doc):
    return {v["check_id"]: v["status"] for v in doc["verdicts"]}


def test_seq_check_report_shape(capsys):
    doc = report(capsys, "seq", "check", "--spec", "gevrey:1", "--conditions", "lc,mg,dc", "--K", "60")
    assert set(doc) == {"manifest", "verdicts"}
    m = doc["manifest"]
    assert m["command"] == "seq check"
    assert m["inputs"][0]["resolved"] == {"kind": "gevrey", "s": 1.0, "K": 60}
    assert m["toolVersion"].startswith("ultraweight")
    assert statuses(doc) == {f"condition:{c}": "holds-on-window" for c in ("dc", "lc", "mg")}
    ids = [v["check_id"] for v in doc["verdicts"]]
    assert ids == sorted(ids)


def test_failing_mathematics_still_exits_zero(capsys):
    doc = report(capsys, "seq", "check", "--spec", "example36:r=4", "--conditions", "wlc", "--K", "200")
    v = doc["verdicts"][0]
    assert v["status"] == "fails"
    assert v["counterexample"]["k"] >= 1


def test_reports_are_deterministic_apart_from_timestamp(capsys):
    argv = ("wf", "check", "--omega", "gevrey_root:1", "--conditions", "w1,w6")
    a, b = report(capsys, *argv), report(capsys, *argv)
    a["manifest"].pop("timestamp")
    b["manifest"].pop("timestamp")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


@pytest.mark.parametrize("argv", [
    ("seq", "check", "--spec", "nope:1"),
    ("seq", "check", "--spec", "gevrey:1", "--conditions", "xx"),
    ("wf", "check", "--omega", "power_log:1"),
    ("scenario", "bogus"),
    ("matrix", "check", "--matrix", "gevrey:1", "--cond", "BR", "--K", "20", "--flavor", "roumieu",
     "--out", "/nonexistent-dir/x.json"),
])
def test_input_errors_exit_two_without_a_report(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error: ") and "(field: " in err
    assert out == ""


def test_unknown_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["seq", "frobnicate"])
    assert info.value.code == 2


def test_out_and_csv(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "seq", "regularize", "--spec", "example36:r=4", "--K", "200",
                          "--out", str(out), "--csv", str(tmp_path / "tables"))
    assert code == 0 and stdout == ""
    doc = json.loads(out.read_text())
    assert doc["manifest"]["outputs"]
    for path in doc["manifest"]["outputs"]:
        assert open(path).readline().strip()


def test_construct_example36_emits_reusable_spec(capsys):
    doc = report(capsys, "construct", "example36", "--K", "120")
    spec = next(v for v in doc["verdicts"] if v["check_id"] == "example36")["witness"]["spec"]
    again = report(capsys, "seq", "check", "--spec", json.dumps(spec), "--conditions", "dc")
    assert again["manifest"]["inputs"][0]["resolved"] == spec


@pytest.mark.parametrize("argv, check_id, status", [
    (("seq", "compare", "--left", "gevrey:1", "--right", "gevrey:2", "--rel", "triangleleft"),
     "relation:triangleleft", "holds-on-window"),
    (("wf", "check", "--omega", "power_log:2", "--conditions", "w6"), "condition:w6", "fails"),
    (("matrix", "check", "--matrix", "gevrey:0.5,1,2", "--cond", "BR", "--flavor", "roumieu"),
     "matrix:BR:roumieu", "holds-on-window"),
    (("series", "verify-fdb", "--f", "exp", "--g", "poly:0,1,1", "--K", "10", "--M", "gevrey:0"),
     "verify-fdb", "holds-on-window"),
    (("seq", "carleman", "--spec", "logL"), "carleman", "certified"),
])
def test_documented_commands(capsys, argv, check_id, status):
    assert statuses(report(capsys, *argv))[check_id] == status


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ultraweight", "scenario", "paper-example36"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert [v["status"] for v in doc["verdicts"]] == ["pass"]
