import csv
import io
import json
import re
import subprocess
import sys

import pytest

from extremecycles import cli
from extremecycles.cycles import Instance, verify_cycle


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def all_cycles(report):
    """Every (points, digits) pair in a report, including nested records."""
    for w in report.get("witnesses", []):
        if isinstance(w, dict) and "points" in w:
            yield int(report["g"]), int(report["m"]), w
        elif isinstance(w, dict) and "witnesses" in w:
            yield from all_cycles(w)


def assert_round_trip(report):
    for g, m, w in all_cycles(report):
        assert verify_cycle(Instance(g, m), [int(x) for x in w["points"]], w["digits"])


def test_cycles_json(capsys):
    code, rep = run_json(capsys, "cycles", "--g", "6", "--m", "55987")
    assert code == 0
    assert rep["verdict"] == "incomplete" and rep["order"] == "7"
    assert all(w["length"] == "7" and w["length_equals_order"] for w in rep["witnesses"])
    assert {"311", "9383", "10895", "11147", "11189", "11196", "1866"} in [set(w["points"]) for w in rep["witnesses"]]
    assert {"g", "m", "rule", "verdict", "witnesses", "timing_ms"} <= rep.keys()
    assert_round_trip(rep)


def test_cycles_complete_exit_one(capsys):
    code, out, _ = run(capsys, "cycles", "--g", "4", "--m", "5", "--format", "text")
    assert code == 1 and "complete" in out


def test_cycles_twelve_point(capsys):
    code, rep = run_json(capsys, "cycles", "--g", "12", "--m", "810554586205")
    assert code == 0
    (w,) = rep["witnesses"]
    assert w["length"] == "12" and "68057929271" in w["points"]
    assert_round_trip(rep)


def test_primitives(capsys):
    code, rep = run_json(capsys, "primitives", "--g", "4", "--max", "6000")
    assert code == 0
    assert rep["primitives"] == ["3", "85", "341", "455", "1285", "4369", "5461"]
    assert_round_trip(rep)


def test_order(capsys):
    code, rep = run_json(capsys, "order", "--g", "16", "--m", "361")
    assert code == 0 and rep["order"] == "171"


def test_construct(capsys):
    code, rep = run_json(capsys, "construct", "--g", "16", "--digits", "1110")
    assert code == 0 and rep["m"] == "21845"
    assert_round_trip(rep)
    code, rep = run_json(capsys, "construct", "--g", "6", "--q", "7")
    assert code == 0 and rep["m"] == "55987" and rep["order"] == "7"


def test_classify_certify_repunit_sweep(capsys):
    code, rep = run_json(capsys, "classify", "--g", "4", "--m", "9")
    assert code == 0 and rep["witness_divisor"] == "3" and rep["primitive"] is False
    code, rep = run_json(capsys, "classify", "--g", "22", "--m", "118778947")
    assert code == 1 and rep["verdict"] == "complete"
    code, rep = run_json(capsys, "certify", "--g", "6", "--m", "7")
    assert code == 0 and "TH_2_12" in rep["rule"]
    code, rep = run_json(capsys, "repunit", "--g", "6")
    assert code == 0 and rep["m"] == "9331"
    assert_round_trip(rep)
    code, rep = run_json(capsys, "sweep", "--g", "6", "--n", "8", "--known", "5")
    assert code == 0 and rep["primitives"] == ["335923"]
    code, rep = run_json(capsys, "sweep", "--g", "6", "--n", "14")
    assert code == 1 and rep["primitives"] == []


def test_conjecture(capsys):
    code, rep = run_json(capsys, "conjecture", "--g", "4")
    assert code == 0 and rep["verdict"] == "verified-up-to-bound"
    code, rep = run_json(capsys, "conjecture", "--g", "12", "--seconds", "0.2")
    assert code == 69 and rep["verdict"] == "budget-exhausted"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["cycles", "--g", "5", "--m", "3"], 64),
        (["cycles", "--g", "4"], 64),
        (["bogus"], 64),
        (["construct", "--g", "4", "--digits", "000"], 64),
        (["construct", "--g", "22", "--q", "7"], 64),
        (["cycles", "--g", "4", "--m", "10000001", "--method", "scan", "--scan-ceiling", "10"], 69),
        (["primitives", "--g", "4", "--max", "100000", "--budget", "10"], 69),
        (["--threads", "0", "order", "--g", "4", "--m", "5"], 64),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    assert cli.main(argv) == code


def test_csv_and_text_formats(capsys):
    code, out, _ = run(capsys, "cycles", "--g", "4", "--m", "85", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["w_points"] == "7 23 27 28" and rows[0]["w_digits"] == "1110"
    code, out, _ = run(capsys, "--format", "text", "primitives", "--g", "4", "--max", "100")
    assert "85" in out


def _strip_timing(text):
    out, n = re.subn(r',\n  "timing_ms": [-0-9.e+]+\n', "\n", text)
    assert n == 1
    return out


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--g", "6", "--n", "16"],
        ["classify", "--g", "12", "--m", "810554586205"],
        ["order", "--g", "6", "--m", str(6**20 - 1)],
    ],
)
def test_cache_transparency(tmp_path, argv):
    cache = tmp_path / "factors.jsonl"

    def go(extra):
        r = subprocess.run(
            [sys.executable, "-m", "extremecycles.cli", *argv, *extra],
            capture_output=True,
            text=True,
            check=False,
        )
        assert r.returncode in (0, 1), r.stderr
        return _strip_timing(r.stdout)

    plain = go([])
    cold = go(["--cache", str(cache)])
    assert cache.stat().st_size > 0
    warm = go(["--cache", str(cache)])
    assert plain == cold == warm


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "extremecycles.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()
