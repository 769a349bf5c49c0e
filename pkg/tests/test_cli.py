import io
import json
import shutil
import subprocess
import sys

import pytest

from umat import build_preset, serialize_deck
from umat.cli import main
from umat.point_driver import read_csv


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def nh_deck(tmp_path):
    p = tmp_path / "nh.inp"
    p.write_text(serialize_deck(build_preset("neo_hooke")))
    return str(p)


def test_eval_json(nh_deck):
    code, text = run("eval", "--deck", nh_deck, "--F", "1,0,0,0,1,0,0,0,1", "--json")
    assert code == 0
    doc = json.loads(text)
    assert doc["energy"] == 0.0 and doc["units"] == "MPa"
    assert doc["invariants"][:3] == [3.0, 3.0, 1.0]


def test_eval_text_with_pressure():
    code, text = run("eval", "--preset", "brain_blatz_ko_gray", "--F", "1,0,0,0,1,0,0,0,1", "--pressure", "2")
    assert code == 0
    assert "sigma [kPa]" in text and "-2.000000000e+00" in text


def test_eval_explicit_fibers():
    code, text = run("eval", "--preset", "skin_discovered", "--F", "1.1,0,0,0,0.9534625892455922,0,0,0,0.9534625892455922",
                     "--fibers", "0,2,0", "--pressure", "0", "--json")
    assert code == 0
    assert json.loads(text)["invariants"][3] == pytest.approx(0.9534625892455922 ** 2, rel=1e-9)


def test_curve_to_file(tmp_path):
    out = tmp_path / "c.csv"
    code, _ = run("curve", "--preset", "neo_hooke", "--param", "D1=0", "--mode", "uniaxial",
                  "--range", "1:1.5:2", "--out", str(out))
    assert code == 0
    header, rows = read_csv(out.read_text())
    assert header[1] == "sigma_11[MPa]"
    assert rows[1][1] == pytest.approx(1.583333333, rel=1e-9)


def test_curve_shear_plane_by_mode():
    code, text = run("curve", "--preset", "heart_guan", "--mode", "shear", "--range", "0:0.2:3", "--plane", "fs")
    assert code == 0
    _, rows = read_csv(text)
    assert rows[-1][4] > 0.0


def test_preset_list_and_show():
    code, text = run("preset", "list")
    assert code == 0 and "heart_guan" in text and "[kPa]" in text
    code, text = run("preset", "show", "brain_mooney_rivlin_gray")
    assert code == 0
    assert "2,1,1,1,1.0,1.0,0.94085" in text


def test_check_single_preset(tmp_path):
    report = tmp_path / "r.json"
    code, text = run("check", "--preset", "valve_fung_septal", "--samples", "10", "--json", str(report))
    assert code == 0 and "overall: pass" in text
    assert json.loads(report.read_text())["status"] == "pass"


@pytest.mark.parametrize("argv", [
    ["eval", "--preset", "neo_hooke", "--F", "1,0,0"],
    ["eval", "--preset", "neo_hooke", "--F", "a,b,c,d,e,f,g,h,i"],
    ["curve", "--preset", "neo_hooke", "--mode", "uniaxial", "--range", "1:2"],
    ["curve", "--preset", "neo_hooke", "--mode", "uniaxial", "--range", "1.1:2:3"],
    ["curve", "--preset", "neo_hooke", "--mode", "shear", "--range", "0:1:3", "--plane", "11"],
    ["eval", "--preset", "neo_hooke", "--param", "C10", "--F", "1,0,0,0,1,0,0,0,1"],
    ["preset", "show"],
])
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.inp"
    bad.write_text("*ANISOTROPIC HYPERELASTIC, TYPE=COMPRESSIBLE, LOCAL DIRECTIONS=0\n"
                   '*PARAMETER TABLE, TYPE="UNIVERSAL_TAB"\n1,1,1\n')
    code, _ = run("eval", "--deck", str(bad), "--F", "1,0,0,0,1,0,0,0,1")
    assert code == 2
    assert "3:1:" in capsys.readouterr().err


def test_step_failure_exit_3():
    code, _ = run("curve", "--preset", "brain_discovered_six_term_gray", "--mode", "uniaxial", "--range", "1:3:41")
    assert code == 3


def test_unknown_preset_exit_1():
    assert run("eval", "--preset", "nope", "--F", "1,0,0,0,1,0,0,0,1")[0] == 1


def test_missing_file_exit_1(tmp_path):
    assert run("eval", "--deck", str(tmp_path / "none.inp"), "--F", "1,0,0,0,1,0,0,0,1")[0] == 1


def test_console_script_installed():
    exe = shutil.which("umat")
    cmd = [exe] if exe else [sys.executable, "-m", "umat.cli"]
    res = subprocess.run(cmd + ["preset", "list"], capture_output=True, text=True)
    assert res.returncode == 0 and "neo_hooke" in res.stdout
