import csv
import io
import json
import math
import pathlib
import subprocess
import sys

import pytest

from gtd.analysis import SCAN_COLUMNS
from gtd.cli import fmt_number, jsonable, parse_range

from conftest import run_cli

GOLDEN = pathlib.Path(__file__).parent / "golden"
HEADER = "model,ensemble,entropy,e1,e2,T,C_Q,C_phi,C_S,M,H,F,G,g11,g22,detg,R,T_positive,stable,domain_ok"


def ok(argv):
    code, out, err, secs = run_cli(argv)
    assert code == 0, err
    assert secs < 5.0
    return out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# ----------------------------------------------------------------------- eval

def test_eval_emgb_mass():
    d = json.loads(ok(["eval", "--model", "emgb", "--entropy", "area", "--ensemble", "mass",
                       "--params", "Q=1", "--at", "S=1"]))
    assert d["schema"] == "gtd/1" and d["model"] == "emgb/area/mass"
    assert d["T"] == pytest.approx(0.444444, abs=1e-6)
    assert d["C_Q"] == pytest.approx(3.0, rel=1e-12)
    assert d["R"] == pytest.approx(-30.375, rel=1e-10)
    assert d["metric"]["signature"] == "Lorentzian"
    assert d["flags"] == {"T_positive": True, "stable": True, "domain_ok": True,
                          "capacity_divergent": False, "entropy_negative": False}


def test_eval_gibbs():
    d = json.loads(ok(["eval", "--model", "emgb", "--ensemble", "gibbs", "--at", "T=1,phi=0"]))
    assert d["potentials"]["G"] == pytest.approx(0.148148, abs=1e-6)
    assert d["R"] == pytest.approx(-45.5625, rel=1e-10)


def test_eval_csv_row():
    out = ok(["eval", "--model", "emgb", "--params", "Q=1", "--at", "S=1", "--format", "csv"])
    header, line = out.splitlines()
    assert header == HEADER
    r = rows(out)[0]
    assert float(r["C_Q"]) == pytest.approx(3.0) and r["C_phi"] == "" and r["stable"] == "true"


def test_eval_modified_by_radius():
    d = json.loads(ok(["eval", "--model", "eymgb", "--entropy", "modified", "--ensemble", "entropy",
                       "--params", "alpha=1,Q=1", "--at", "r=2"]))
    assert d["T"] == pytest.approx(1 / 6, rel=1e-10)
    assert d["C_Q"] == pytest.approx(108.0, rel=1e-8)


def test_eval_domain_error():
    code, out, err, _ = run_cli(["eval", "--model", "emgb", "--params", "Q=1", "--at", "S=0"])
    assert code == 2 and out == ""
    assert "S>0" in err


def test_eval_infinite_capacity_is_string():
    S = (5 / 3) ** 0.75
    d = json.loads(ok(["eval", "--model", "emgb", "--params", "Q=1", "--at", f"S={S!r}"]))
    assert d["C_Q"] in ("inf", "-inf") or abs(d["C_Q"]) > 1e10


@pytest.mark.parametrize("argv", [
    ["eval", "--model", "emgb", "--params", "Q=1,bogus=2", "--at", "S=1"],
    ["eval", "--model", "emgb", "--params", "Q=1", "--at", "S=abc"],
    ["eval", "--model", "emgb", "--params", "Q=1"],
    ["eval", "--model", "emgb-lambda", "--params", "Q=1,Lambda=1", "--at", "S=1"],
    ["eval", "--params", "Q=1", "--at", "S=1"],
    ["eval", "--model", "kerr", "--at", "S=1"],
    ["eval", "--model", "eymgb", "--ensemble", "gibbs", "--at", "T=1,phi=0"],
    ["scan", "--model", "emgb", "--params", "Q=1", "--grid", "S=0.2:5:1"],
    ["scan", "--model", "emgb", "--params", "Q=1", "--grid", "S=5:0.2:10"],
    ["scan", "--model", "emgb", "--params", "Q=1", "--grid", "S=0.2:5"],
    ["scan", "--model", "emgb", "--params", "Q=1"],
    ["transitions", "--model", "emgb", "--params", "Q=1"],
    ["verify", "--model", "emgb", "--format", "csv"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv):
    code, out, err, _ = run_cli(argv)
    assert code == 1
    assert err


def test_parse_range():
    assert parse_range("S=0.2:5:500") == ("S", 0.2, 5.0, 500)


def test_number_formatting():
    assert fmt_number(0.1) == "0.10000000000000001"
    assert fmt_number(math.inf) == "inf" and fmt_number(-math.inf) == "-inf"
    assert fmt_number(None) == "" and fmt_number(True) == "true"
    assert jsonable({"a": [math.inf, math.nan, 1]}) == {"a": ["inf", None, 1]}


# ----------------------------------------------------------------------- scan

def test_scan_header_and_shape():
    out = ok(["scan", "--model", "emgb", "--ensemble", "mass", "--params", "Q=1", "--grid", "S=0.2:5:500"])
    lines = out.splitlines()
    assert lines[0] == HEADER == ",".join(SCAN_COLUMNS)
    data = rows(out)
    assert len(data) == 500
    T = [float(r["T"]) for r in data]
    S = [float(r["e1"]) for r in data]
    k = max(range(len(T)), key=T.__getitem__)
    # single maximum of T, located at (5/3)^(3/4) to grid resolution
    assert all(a < b for a, b in zip(T[:k], T[1:k + 1]))
    assert all(a > b for a, b in zip(T[k:-1], T[k + 1:]))
    assert abs(S[k] - (5 / 3) ** 0.75) < (5 - 0.2) / 499
    C = [float(r["C_Q"]) for r in data]
    assert C[k - 1] > 0 > C[k + 1] or C[k] * C[k + 1] < 0 or C[k - 1] * C[k] < 0


def test_scan_eymgb_figure():
    data = rows(ok(["scan", "--model", "eymgb", "--params", "S=10", "--grid", "Q=-3:3:600"]))
    assert len(data) == 600
    assert all(r["model"] == "eymgb" and float(r["e1"]) == 10.0 for r in data)


def test_scan_two_axes_row_major():
    data = rows(ok(["scan", "--model", "emgb", "--grid", "S=1:2:3", "--grid", "Q=0:1:2"]))
    assert [(r["e1"], r["e2"]) for r in data] == [
        ("1", "0"), ("1", "1"), ("1.5", "0"), ("1.5", "1"), ("2", "0"), ("2", "1")]


def test_scan_out_of_domain_rows():
    data = rows(ok(["scan", "--model", "emgb", "--params", "Q=1", "--grid", "S=-1:1:3"]))
    assert data[0]["domain_ok"] == "false" and data[0]["T"] == ""
    assert data[2]["domain_ok"] == "true"


@pytest.mark.parametrize("name,argv", [
    ("emgb_mass_Q1_S.csv", ["scan", "--model", "emgb", "--ensemble", "mass", "--params", "Q=1",
                            "--grid", "S=0.2:5:25"]),
    ("eymgb_mass_S10_Q.csv", ["scan", "--model", "eymgb", "--params", "S=10", "--grid", "Q=-3:3:13"]),
    ("emgb_gibbs_grid.csv", ["scan", "--model", "emgb", "--ensemble", "gibbs", "--grid", "T=0.5:2:3",
                             "--grid", "phi=0:1.5:4"]),
])
def test_golden_csv(name, argv):
    assert ok(argv) == (GOLDEN / name).read_text()


def test_golden_values_match_closed_forms():
    for r in rows((GOLDEN / "emgb_mass_Q1_S.csv").read_text()):
        S, Q = float(r["e1"]), float(r["e2"])
        assert float(r["T"]) == pytest.approx((2 / 9) * (3 * S ** (4 / 3) - Q * Q) / S ** (5 / 3), rel=1e-12)


def test_scan_to_file(tmp_path):
    path = tmp_path / "scan.csv"
    code, out, err, _ = run_cli(["scan", "--model", "emgb", "--params", "Q=1", "--grid", "S=0.2:5:25",
                                 "--out", str(path)])
    assert code == 0 and out == ""
    assert path.read_text() == (GOLDEN / "emgb_mass_Q1_S.csv").read_text()


def test_scan_json():
    d = json.loads(ok(["scan", "--model", "emgb", "--params", "Q=1", "--grid", "S=0.2:5:5",
                       "--format", "json"]))
    assert d["schema"] == "gtd/1" and d["columns"] == list(SCAN_COLUMNS) and len(d["rows"]) == 5


def test_scan_deterministic():
    argv = ["scan", "--model", "eymgb", "--entropy", "modified", "--params", "alpha=1,Q=1",
            "--grid", "r=0.5:4:300"]
    assert ok(argv) == ok(argv)


# --------------------------------------------------------------- config file

def test_config_file_flags_win(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# EMGB Fig. 1\nmodel = emgb\nensemble = mass\nparams = Q=1\nat = S=2\n")
    d = json.loads(ok(["eval", "--config", str(cfg)]))
    assert d["point"] == {"S": 2.0, "Q": 1.0}
    d = json.loads(ok(["eval", "--config", str(cfg), "--at", "S=1"]))
    assert d["point"] == {"S": 1.0, "Q": 1.0} and d["C_Q"] == pytest.approx(3.0)


@pytest.mark.parametrize("text", ["model emgb\n", "colour = red\n"])
def test_config_file_errors(tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    assert run_cli(["eval", "--config", str(cfg)])[0] == 1


def test_config_missing_file(tmp_path):
    assert run_cli(["eval", "--config", str(tmp_path / "nope.cfg")])[0] == 1


# ---------------------------------------------------------------- transitions

def test_transitions_eymgb_modified():
    d = json.loads(ok(["transitions", "--model", "eymgb", "--entropy", "modified",
                       "--params", "Q=1,alpha=1", "--sweep", "r=1:4:1024"]))
    cd = [L for L in d["loci"] if L["indicator"] == "CapacityDivergence" and L["kind"] == "C_Q"]
    root = math.sqrt(1.5 + 1 + 0.5 * math.sqrt(9 + 20 + 4))
    assert len(cd) == 1 and cd[0]["location"] == pytest.approx(root, abs=1e-9)
    assert d["schema"] == "gtd/1" and d["consistency"]["holds"]


def test_transitions_csv():
    out = ok(["transitions", "--model", "emgb", "--params", "Q=1", "--sweep", "S=0.2:5:512",
              "--format", "csv"])
    data = rows(out)
    assert {r["indicator"] for r in data} == {"CapacityDivergence", "ZeroTemperature",
                                              "CurvatureSingularity"}


def test_transitions_helmholtz():
    d = json.loads(ok(["transitions", "--model", "emgb-lambda", "--params", "Lambda=-1,Q=0.5",
                       "--sweep", "S=0.01:10:2048"]))
    assert [e["kind"] for e in d["helmholtz_extrema"]] == ["min", "max"]
    assert all(e["coincidesWithCQDivergence"] for e in d["helmholtz_extrema"])


# ------------------------------------------------------------------ stability

def test_stability_json():
    d = json.loads(ok(["stability", "--model", "emgb", "--params", "Q=1", "--grid", "S=0.2:3:57"]))
    assert d["shape"] == [57] and set(d["summary"]) <= {"stable", "unstable", "unphysical", "boundary"}
    stable = [c["point"]["S"] for c in d["cells"] if c["phase"] == "stable"]
    assert min(stable) > 3 ** -0.75 and max(stable) < (5 / 3) ** 0.75


def test_stability_csv():
    data = rows(ok(["stability", "--model", "emgb", "--ensemble", "enthalpy", "--grid", "S=0.5:2:4",
                    "--grid", "phi=-0.5:0.5:3", "--format", "csv"]))
    assert len(data) == 12 and {r["phase"] for r in data} == {"unstable"}


# --------------------------------------------------------------- verify/models

def test_verify_all(verify_all_output):
    code, out, err, secs = verify_all_output
    assert code == 0, err
    assert secs < 5.0
    d = json.loads(out)
    assert d["passed"] and len(d["reports"]) == 12
    for rep in d["reports"]:
        for o in rep["oracles"]:
            if o["status"] == "VerifiedAgainstRule":
                assert o["max_rel_error"] < 1e-8


def test_verify_deterministic():
    argv = ["verify", "--model", "emgb", "--samples", "40", "--seed", "7"]
    assert ok(argv) == ok(argv)


def test_verify_failure_exit_code():
    code, out, _, _ = run_cli(["verify", "--model", "emgb", "--entropy", "area", "--ensemble", "mass",
                               "--samples", "20", "--tol", "1e-30"])
    assert code == 4 and json.loads(out)["passed"] is False


def test_models_listing():
    d = json.loads(ok(["models"]))
    ids = [m["id"] for m in d["models"]]
    assert "emgb/area/gibbs" in ids and "emgb-lambda/modified/entropy" in ids
    assert "eymgb/modified/gibbs" not in ids
    fig = next(m for m in d["models"] if m["id"] == "emgb/area/mass")["figures"]
    assert any("Fig. 1" in f for f in fig)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gtd", "eval", "--model", "emgb", "--params", "Q=1",
                           "--at", "S=1"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["C_Q"] == pytest.approx(3.0)
    proc = subprocess.run([sys.executable, "-m", "gtd", "eval", "--model", "emgb", "--params", "Q=1",
                           "--at", "S=0"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 2 and "S>0" in proc.stderr
