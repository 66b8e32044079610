import json

import pytest

from qdouble.cli import EXIT_INPUT, EXIT_MATH, EXIT_OK, main
from qdouble.groups import from_name
from qdouble import io


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name,count,total", [("S3", 8, 36), ("Z2", 4, 4), ("trivial", 1, 1)])
def test_irreps(capsys, name, count, total):
    code, out, _ = run(capsys, "irreps", "--group", name)
    data = json.loads(out)
    assert code == EXIT_OK
    assert len(data["irreps"]) == count and data["sumOfSquares"] == total and data["pass"]


def test_irreps_natural_action_and_text(capsys):
    code, out, _ = run(capsys, "irreps", "--group", "S3", "--action", "natural", "--format", "text")
    assert code == EXIT_OK
    assert "sum of squares 18 (expected 18)" in out and out.rstrip().endswith("PASS")


def test_output_is_byte_identical(capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}.json"
        assert main(["verify", "--group", "S3", "--suite", "hopf", "--mode", "randomized",
                     "--seed", "5", "--output", str(path)]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--group", "D4")
    data = json.loads(out)
    assert code == EXIT_OK and data["pass"]
    assert [r["suite"] for r in data["reports"]] == ["hopf", "quasitriangular", "star", "dpr", "tga"]


def test_verify_group_file(capsys, tmp_path):
    path = tmp_path / "q8.json"
    path.write_text(io.dumps(io.group_to_json(from_name("Q8"))))
    code, out, _ = run(capsys, "verify", "--group-file", str(path), "--suite", "quasitriangular")
    assert code == EXIT_OK and json.loads(out)["pass"]


def test_bad_inputs_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"cayley": [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]}))
    code, _, err = run(capsys, "verify", "--group-file", str(bad))
    assert code == EXIT_INPUT and "associative" in err
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"group": "S3", "colour": "blue"}))
    assert run(capsys, "irreps", "--config", str(cfg))[0] == EXIT_INPUT
    assert run(capsys, "irreps")[0] == EXIT_INPUT
    assert run(capsys, "irreps", "--group", "Y7")[0] == EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT
    assert run(capsys, "verify", "--group", "S3", "--action", "natural", "--suite", "hopf")[0] == EXIT_INPUT


def test_config_file_and_seed_override(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"group": "S3", "suite": "star", "mode": "randomized", "seed": 3}))
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    assert code == EXIT_OK and json.loads(out)["seed"] == 3
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--seed", "4")
    assert json.loads(out)["seed"] == 4
    monkeypatch.setenv("QDOUBLE_SEED", "11")
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--seed", "4")
    assert json.loads(out)["seed"] == 11
    monkeypatch.setenv("QDOUBLE_SEED", "eleven")
    assert run(capsys, "verify", "--config", str(cfg))[0] == EXIT_INPUT


def test_tensor(capsys):
    code, out, _ = run(capsys, "tensor", "--group", "S3", "--first", "1,0", "--second", "1,0")
    data = json.loads(out)
    assert code == EXIT_OK
    assert [c["label"] for c in data["components"]] == [[0, 0], [0, 2], [3, 0], [3, 1], [3, 2]]
    assert data["dimensions"] == {"product": 9, "sum": 9}
    _, swapped, _ = run(capsys, "tensor", "--group", "S3", "--first", "3,1", "--second", "1,0")
    _, direct, _ = run(capsys, "tensor", "--group", "S3", "--first", "1,0", "--second", "3,1")
    assert json.loads(swapped)["components"] == json.loads(direct)["components"]
    assert run(capsys, "tensor", "--group", "S3", "--first", "2,0", "--second", "0,0")[0] == EXIT_INPUT


def test_su2_verify(capsys):
    code, out, _ = run(capsys, "compact", "su2-verify", "--n", "1", "--L", "1/2")
    data = json.loads(out)
    assert code == EXIT_OK and data["pass"]
    assert {c["id"] for c in data["checks"]} == {"homomorphism", "star", "saturation", "leakage"}
    assert run(capsys, "compact", "su2-verify", "--n", "1", "--L", "1/2", "--order", "1")[0] == EXIT_INPUT
    assert run(capsys, "compact", "su2-verify", "--n", "1")[0] == EXIT_INPUT


def test_sl2r_classify(capsys):
    code, out, _ = run(capsys, "compact", "sl2r-classify", "--matrix", "1,1,0,1")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["label"]["family"] == "ParabolicPos" and data["warnings"]
    code, out, _ = run(capsys, "compact", "sl2r-classify", "--matrix", "0,1,-1,0", "--format", "text")
    assert code == EXIT_OK and "EllipticPlus" in out and "U(1)" in out
    assert run(capsys, "compact", "sl2r-classify", "--matrix", "1,1,1,1")[0] == EXIT_INPUT


def test_failing_verification_exits_3(capsys):
    # an absurd tolerance makes the randomized star suite fail on rounding noise
    code, out, _ = run(capsys, "verify", "--group", "S4", "--suite", "tga", "--samples", "5", "--tol", "-1")
    assert code == EXIT_MATH and not json.loads(out)["pass"]
