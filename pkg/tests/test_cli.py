import json
import subprocess
import sys

import pytest

from slnchar import fixture_path
from slnchar.cli import EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, EXIT_VERIFY, run
from slnchar.exactmat import SLMatrix, from_json
from slnchar.torus import lattice_box, orbits_up_to, samples_to_json, synthetic_samples


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ball(capsys):
    code, out, _ = call(capsys, "ball", "--n", "3", "--radius", "2")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and json.loads(lines[0])["count"] == 121 and len(lines) == 122
    assert json.loads(lines[0])["config"]["params"]["radius"] == 2


def test_ball_cap_exit(capsys):
    code, _, err = call(capsys, "ball", "--n", "3", "--radius", "4", "--ball-cap", "500")
    assert code == EXIT_RESOURCE and json.loads(err)["error"]["type"] == "resource_cap"


def test_decompose_matrix(capsys):
    m = json.dumps([[2, 3, 1], [1, 2, 1], [1, 2, 2]])
    code, out, _ = call(capsys, "decompose", "--matrix", m)
    w = json.loads(out)["witness"]
    gamma = SLMatrix.from_rows([[2, 3, 1], [1, 2, 1], [1, 2, 2]])
    c = from_json(w["conjugator"])
    f = [from_json(x) for x in w["factors"]]
    assert code == EXIT_OK and w["verified"]
    assert c @ gamma @ c.inv() == f[0] @ f[1] @ f[2]


def test_decompose_random_two_factor(capsys):
    code, out, _ = call(capsys, "decompose", "--n", "4", "--random", "30", "--two-factor",
                        "--seed", "3")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["verified"] == 30


def test_input_errors(capsys):
    bad = json.dumps([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert call(capsys, "decompose", "--matrix", bad)[0] == EXIT_INPUT
    assert call(capsys, "decompose", "--matrix", "[[1, 0], [0, 1]]")[0] == EXIT_INPUT
    assert call(capsys, "decompose", "--n", "4", "--matrix", "[[1,0,0],[0,1,0],[0,0,1]]")[0] == EXIT_INPUT
    assert call(capsys, "decompose")[0] == EXIT_INPUT
    assert call(capsys, "lift", "--n", "2", "--mod", "2", "--row", "9", "--matrix", "[[1,0],[0,1]]")[0] == EXIT_INPUT
    assert call(capsys, "lift", "--n", "3", "--mod", "2", "--row", "1",
                "--matrix", "[[2,0,0],[0,1,0],[0,0,1]]")[0] == EXIT_INPUT
    assert call(capsys, "classify", "--candidate", "/nonexistent.jsonl")[0] == EXIT_INPUT


def test_chartab_and_csv(capsys, tmp_path):
    csv = tmp_path / "t.csv"
    code, out, _ = call(capsys, "chartab", "--n", "2", "--mod", "3", "--csv", str(csv))
    obj = json.loads(out)
    assert code == EXIT_OK and obj["degrees"] == [1, 1, 1, 2, 2, 2, 3]
    assert len(csv.read_text().strip().splitlines()) == 8


def test_lift_value(capsys):
    code, out, _ = call(capsys, "lift", "--n", "3", "--mod", "2", "--row", "1",
                        "--matrix", "[[1,1,0],[0,1,0],[0,0,1]]")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["degree"] == 3 and abs(obj["value"][0] + 1 / 3) < 1e-12


def test_lift_then_classify_and_verify(capsys, tmp_path):
    path = tmp_path / "phi.jsonl"
    assert call(capsys, "lift", "--n", "3", "--mod", "2", "--row", "3", "--radius", "3",
                "--out", str(path))[0] == EXIT_OK
    code, out, _ = call(capsys, "classify", "--candidate", str(path), "--strict")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["verdict"] == "congruence" and rep["level"] == 2
    code, out, _ = call(capsys, "verify", "--candidate", str(path))
    assert code == EXIT_OK and json.loads(out)["passed"]
    assert call(capsys, "verify", "--candidate", str(path), "--check", "bogus")[0] == EXIT_INPUT


def test_extend_and_classify(capsys, tmp_path):
    path = tmp_path / "ext.jsonl"
    assert call(capsys, "extend", "--n", "4", "--chi", "-1", "--radius", "2",
                "--out", str(path))[0] == EXIT_OK
    code, out, _ = call(capsys, "classify", "--candidate", str(path))
    rep = json.loads(out)
    assert rep["verdict"] == "center" and rep["center_values"]["-I"] == [-1.0, 0.0]


def test_classify_fixture(capsys):
    code, out, _ = call(capsys, "classify", "--candidate", str(fixture_path("delta_n3_r3.jsonl")))
    assert code == EXIT_OK and json.loads(out)["verdict"] == "center"


def test_strict_undecided_exit(capsys, tmp_path):
    path = tmp_path / "bad.jsonl"
    lines = fixture_path("delta_n3_r3.jsonl").read_text().splitlines()
    row = json.loads(lines[2])
    row["value"] = [0.3, 0.0]
    lines[2] = json.dumps(row)
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = call(capsys, "classify", "--candidate", str(path), "--strict")
    assert code == EXIT_VERIFY and json.loads(out)["verdict"] == "undecided"
    code, out, _ = call(capsys, "verify", "--candidate", str(path), "--check", "central")
    assert code == EXIT_VERIFY


def test_tits(capsys):
    code, out, _ = call(capsys, "tits-check", "--n", "3", "--base", "2", "--mod", "4")
    assert code == EXIT_OK and json.loads(out)["contained"]


def test_orbits_and_fit(capsys, tmp_path):
    code, out, _ = call(capsys, "torus-orbits", "--m", "2", "--denominator", "3")
    assert [o["size"] for o in json.loads(out)["orbits"]] == [1, 8]
    o = orbits_up_to(2, 3)
    samples = synthetic_samples(0.25, {o[1]: 0.5, o[2]: 0.25}, lattice_box(2, 6))
    path = tmp_path / "s.json"
    path.write_text(json.dumps(samples_to_json(samples, 2)))
    code, out, _ = call(capsys, "fit", "--samples", str(path), "--nmax", "4")
    obj = json.loads(out)
    assert code == EXIT_OK and abs(obj["t_inf"] - 0.25) < 1e-9 and obj["residual"] < 1e-9


@pytest.mark.parametrize("argv", [
    ["decompose", "--random", "20", "--seed", "11"],
    ["chartab", "--n", "2", "--mod", "4"],
    ["torus-orbits", "--m", "2", "--denominator", "6"],
])
def test_output_is_deterministic(capsys, argv):
    a = call(capsys, *argv)[1]
    b = call(capsys, *argv)[1]
    assert a == b and a


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "slnchar.cli", "torus-orbits", "--m", "2",
                          "--denominator", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and '"size": 3' in res.stdout
