"""CLI behaviour: formats, determinism, exit codes."""

import json
import math

import numpy as np
import pytest

from entrodiag import SeededRng, random_unitary, save_unitary
from entrodiag.cli import main, parse_unitary
from entrodiag.errors import UnknownName


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_unitary_specs():
    assert parse_unitary("fourier:3").dim == 3
    assert parse_unitary("group:2x2").label == "group:2x2"
    assert parse_unitary("c6").dim == 6
    assert parse_unitary("example3").dim == 3
    assert parse_unitary("random:5:4").dim == 4
    for bad in ("fourier:x", "fourier", "mub:3", "random:1"):
        with pytest.raises(UnknownName):
            parse_unitary(bad)


def test_mu_csv_and_json(capsys):
    code, out, _ = run(capsys, "mu", "--unitary", "fourier:4")
    assert code == 0
    assert out.splitlines()[0] == "c,mu_bound_bits,inv_c2,inv_c2_is_integer"
    assert out.splitlines()[1] == "0.5,2,4,true"
    code, out, _ = run(capsys, "mu", "--unitary", "fourier:4",
                       "--format", "json")
    obj = json.loads(out)
    assert obj["mu_bound_bits"] == pytest.approx(2.0)


def test_diagram_row_count_and_bound(capsys):
    code, out, _ = run(capsys, "diagram", "--unitary", "fourier:2",
                       "--samples", "100", "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "h_x,h_y"
    assert len(lines) == 101
    pts = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.min(pts.sum(axis=1)) >= 1.0 - 1e-9
    # --include-equality appends the known corner states
    code, out2, _ = run(capsys, "diagram", "--unitary", "fourier:2",
                        "--samples", "100", "--seed", "1",
                        "--include-equality")
    assert len(out2.strip().splitlines()) > 101


def test_cli_deterministic(capsys):
    args = ("frontier", "--unitary", "random:3:4", "--samples", "2000",
            "--seed", "7", "--alpha", "2")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args, "--threads", "8")
    assert out1 == out2
    pts = np.array([[float(v) for v in ln.split(",")]
                    for ln in out1.strip().splitlines()[1:]])
    assert np.all(np.diff(pts[:, 0]) > 0)
    assert np.all(np.diff(pts[:, 1]) < 0)


def test_equality_scan_c6(capsys):
    code, out, _ = run(capsys, "equality", "scan", "--unitary", "c6",
                       "--shape", "3x2")
    assert code == 0
    assert out.splitlines()[0] == "0 equality supports among 300 candidates"


def test_equality_fourier_and_check(capsys, tmp_path):
    code, out, _ = run(capsys, "equality", "fourier", "--group", "2x3",
                       "--format", "json")
    assert code == 0
    entries = json.loads(out)
    assert len(entries) == 4  # subgroups of Z2 x Z3 = Z6
    state = tmp_path / "e0.json"
    state.write_text("[[1,0],[0,0],[0,0],[0,0]]")
    code, out, _ = run(capsys, "equality", "check", "--unitary", "fourier:4",
                       "--state", str(state))
    assert code == 0
    assert out.splitlines()[1].startswith("true,")


def test_d2_and_englert(capsys):
    code, out, _ = run(capsys, "d2", "--unitary", "fourier:2",
                       "--points", "256")
    assert code == 0
    pts = np.array([[float(v) for v in ln.split(",")]
                    for ln in out.strip().splitlines()[1:]])
    assert pts[0] == pytest.approx([0.0, 1.0], abs=1e-9)
    assert pts[-1] == pytest.approx([1.0, 0.0], abs=1e-9)
    code, out, _ = run(capsys, "englert", "--dim", "4", "--format", "json")
    obj = json.loads(out)
    assert obj["mu_equality_points"] == 2


def test_extremality_command(capsys, tmp_path):
    state = tmp_path / "rrs.json"
    v = np.array([2.0, 1.0, 1.0])
    v /= np.linalg.norm(v)
    state.write_text(json.dumps([[float(x), 0.0] for x in v]))
    code, out, _ = run(capsys, "extremality", "--state", str(state),
                       "--alpha", "1", "--format", "json")
    assert code == 0
    assert json.loads(out)["max_abs"] <= 1e-10


def test_conjecture_command(capsys):
    code, out, _ = run(capsys, "conjecture", "1", "--samples", "3000",
                       "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["conjecture"] == 1 and obj["verdict"] in ("consistent",
                                                         "tension")


def test_file_unitary_roundtrip(capsys, tmp_path):
    path = str(tmp_path / "u.json")
    save_unitary(path, random_unitary(3, SeededRng(11)))
    code, out, _ = run(capsys, "mu", "--unitary", f"file:{path}",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["unitary"] == f"file:{path}"


def test_out_flag_writes_file(capsys, tmp_path):
    dest = tmp_path / "points.csv"
    code, _, _ = run(capsys, "diagram", "--unitary", "fourier:3",
                     "--samples", "10", "--out", str(dest))
    assert code == 0
    assert dest.read_text().splitlines()[0] == "h_x,h_y"
    assert len(dest.read_text().splitlines()) == 11


def test_error_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "mu", "--unitary", "mub:3")
    assert code == 1 and "error:" in err
    # the uniform state has a boundary Fourier distribution, so the
    # residual is undefined -> invalid input
    state = tmp_path / "uniform.json"
    state.write_text("[[1,0],[1,0]]")
    code, _, err = run(capsys, "extremality", "--state", str(state),
                       "--alpha", "2")
    assert code == 1
    # bad flags exit 1 without a traceback
    assert main(["diagram"]) == 1
    assert main(["nonsense"]) == 1
